"""
Lorentzian peak fitting of demodulated spectra.

The model is a constant baseline plus a sum of Lorentzians, each with a
signed height, center and full width at half maximum.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks, peak_widths

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Spectrum

from .exceptions import FitConvergenceError
from .leastsq import MAX_NFEV, converged, fit_lm, rms, standard_errors

logger = logging.getLogger(__name__)

DETECTION_SIGMA = 4.0
# Detection floor for noiseless spectra, relative to the largest deviation
RELATIVE_FLOOR = 0.02
MIN_POINTS_PER_WIDTH = 5


@dataclass(frozen=True)
class PeakFit:
    center: float
    fwhm: float
    amplitude: float
    center_err: float = 0.0
    fwhm_err: float = 0.0
    amplitude_err: float = 0.0

    def __post_init__(self) -> None:
        if not self.fwhm > 0:
            raise ParameterError(f"FWHM must be > 0, got {self.fwhm}")
        if min(self.center_err, self.fwhm_err, self.amplitude_err) < 0:
            raise ParameterError("Standard errors must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "center_mhz": self.center,
            "fwhm_mhz": self.fwhm,
            "amplitude": self.amplitude,
            "center_err": self.center_err,
            "fwhm_err": self.fwhm_err,
            "amplitude_err": self.amplitude_err,
        }


@dataclass(frozen=True)
class PeakFitResult:
    peaks: List[PeakFit]
    baseline: float
    residual_rms: float
    noise: float
    nfev: int = 0
    metadata: dict = field(default_factory=dict)

    def __iter__(self) -> Iterator[PeakFit]:
        return iter(self.peaks)

    def __len__(self) -> int:
        return len(self.peaks)

    @property
    def centers(self) -> np.ndarray:
        return np.array([p.center for p in self.peaks])

    def near(self, frequency_mhz: float, tolerance_mhz: float) -> Optional[PeakFit]:
        """Closest fitted peak within ``tolerance_mhz``, if any."""
        candidates = [p for p in self.peaks if abs(p.center - frequency_mhz) <= tolerance_mhz]
        return min(candidates, key=lambda p: abs(p.center - frequency_mhz), default=None)

    def to_json_dict(self) -> dict:
        return {
            "peaks": [p.to_json_dict() for p in self.peaks],
            "baseline": self.baseline,
            "residual_rms": self.residual_rms,
            "noise": self.noise,
            "nfev": self.nfev,
            "metadata": dict(self.metadata),
        }


def lorentzian_sum(frequencies, baseline: float, peaks: Sequence[PeakFit]) -> np.ndarray:
    params = [baseline] + [v for p in peaks for v in (p.amplitude, p.center, p.fwhm)]
    return _model(np.asarray(frequencies, dtype=float), np.array(params))


def _model(x: np.ndarray, params: np.ndarray) -> np.ndarray:
    y = np.full_like(x, params[0])
    for amplitude, center, width in params[1:].reshape(-1, 3):
        half = 0.5 * width
        y += amplitude * half**2 / ((x - center) ** 2 + half**2)
    return y


def _jacobian(x: np.ndarray, params: np.ndarray) -> np.ndarray:
    jac = np.empty((len(x), len(params)))
    jac[:, 0] = 1.0
    for k, (amplitude, center, width) in enumerate(params[1:].reshape(-1, 3)):
        half = 0.5 * width
        dx = x - center
        denom = dx**2 + half**2
        shape = half**2 / denom
        jac[:, 1 + 3 * k] = shape
        jac[:, 2 + 3 * k] = amplitude * 2.0 * half**2 * dx / denom**2
        jac[:, 3 + 3 * k] = amplitude * half * dx**2 / denom**2
    return jac


def estimate_noise(signal: np.ndarray) -> float:
    """Robust noise estimate from the median absolute point-to-point difference."""
    if len(signal) < 3:
        return 0.0
    diffs = np.diff(signal)
    return float(1.4826 * np.median(np.abs(diffs - np.median(diffs))) / np.sqrt(2.0))


def detect_peaks(spectrum: Spectrum, sigma: float = DETECTION_SIGMA) -> List[PeakFit]:
    """
    Seeds for ``fit_peaks``: local extrema of either sign standing out of
    the baseline by more than ``sigma`` times the estimated noise.
    """
    signal = spectrum.signal
    if len(signal) < 3:
        return []
    baseline = float(np.median(signal))
    deviation = signal - baseline
    largest = float(np.max(np.abs(deviation)))
    threshold = max(sigma * estimate_noise(signal), RELATIVE_FLOOR * largest)
    if threshold <= 0:
        return []

    seeds = []
    for sign in (1.0, -1.0):
        indices, _ = find_peaks(sign * deviation, height=threshold, prominence=threshold)
        if not len(indices):
            continue
        widths = peak_widths(sign * deviation, indices, rel_height=0.5)[0] * spectrum.step
        for i, width in zip(indices, widths):
            seeds.append(
                PeakFit(float(spectrum.frequencies[i]), max(float(width), spectrum.step), float(deviation[i]))
            )
    seeds.sort(key=lambda p: p.center)
    logger.debug(f"Detected {len(seeds)} peaks above {threshold:.3g}")
    return seeds


def fit_peaks(
    spectrum: Spectrum,
    guesses: Optional[Sequence[float]] = None,
    default_fwhm: float = 2.0,
) -> PeakFitResult:
    """
    Least-squares fit of Lorentzians plus a constant baseline.

    ``guesses`` are initial centers; without them the peaks found by
    ``detect_peaks`` are used. Raises FitConvergenceError when the
    iteration cap is reached.
    """
    x = spectrum.frequencies
    y = spectrum.signal
    noise = estimate_noise(y)
    baseline = float(np.median(y)) if len(y) else 0.0

    if guesses is None:
        seeds = detect_peaks(spectrum)
    else:
        seeds = [
            PeakFit(float(c), default_fwhm, float(y[np.argmin(np.abs(x - c))] - baseline))
            for c in guesses
        ]
    seeds = [s if s.amplitude != 0 else PeakFit(s.center, s.fwhm, noise or 1e-12) for s in seeds]
    if not seeds:
        empty_rms = float(np.sqrt(np.mean((y - baseline) ** 2))) if len(y) else 0.0
        return PeakFitResult([], baseline, empty_rms, noise)

    n_params = 1 + 3 * len(seeds)
    if len(x) <= n_params:
        raise ParameterError(f"{len(x)} points cannot constrain {len(seeds)} peaks")
    narrowest = min(s.fwhm for s in seeds)
    if spectrum.step > narrowest / MIN_POINTS_PER_WIDTH:
        logger.warning(
            f"Grid step {spectrum.step:.3g} MHz undersamples a {narrowest:.3g} MHz wide peak"
        )

    p0 = np.array([baseline] + [v for s in seeds for v in (s.amplitude, s.center, s.fwhm)])
    result = fit_lm(lambda p: _model(x, p) - y, lambda p: _jacobian(x, p), p0)
    residual_rms = rms(result)
    if not converged(result):
        raise FitConvergenceError(
            f"Peak fit did not converge in {MAX_NFEV} evaluations (rms {residual_rms:.3g})",
            best_params=result.x,
            residual_rms=residual_rms,
        )

    errors = standard_errors(result.jac, result.fun)
    peaks = []
    for k, (amplitude, center, width) in enumerate(result.x[1:].reshape(-1, 3)):
        amplitude_err, center_err, width_err = errors[1 + 3 * k : 4 + 3 * k]
        peaks.append(
            PeakFit(
                center=float(center),
                fwhm=abs(float(width)),
                amplitude=float(amplitude),
                center_err=float(center_err),
                fwhm_err=float(width_err),
                amplitude_err=float(amplitude_err),
            )
        )
    peaks.sort(key=lambda p: p.center)
    logger.info(f"Fitted {len(peaks)} peaks, residual rms {residual_rms:.3g}")
    return PeakFitResult(
        peaks,
        float(result.x[0]),
        residual_rms,
        noise,
        nfev=int(result.nfev),
        metadata={"channel": spectrum.channel.value},
    )



def refine_center(spectrum: Spectrum, guess_mhz: float, window_mhz: float, iterations: int = 2) -> PeakFit:
    """
    Single-peak fit restricted to ``guess_mhz`` +- ``window_mhz``, re-centred
    on the fitted peak ``iterations`` times.
    """
    center = guess_mhz
    fit = None
    for _ in range(iterations):
        mask = np.abs(spectrum.frequencies - center) <= window_mhz
        window = Spectrum(spectrum.frequencies[mask], spectrum.signal[mask], spectrum.channel)
        result = fit_peaks(window, guesses=[center], default_fwhm=window_mhz / 2.0)
        fit = result.peaks[0]
        if abs(fit.center - center) > window_mhz:
            raise FitConvergenceError(
                f"Peak near {guess_mhz} MHz left the fit window ({fit.center:.3f} MHz)",
                residual_rms=result.residual_rms,
            )
        center = fit.center
    assert fit is not None
    return fit
