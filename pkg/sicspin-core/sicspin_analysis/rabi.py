"""
Multi-component decomposition of Rabi oscillations.

Model: sum_i A_i exp(-gamma_i t) cos(2 pi f_i t + phi_i) + a + b t. Each
component is fitted as c_i cos + s_i sin so that phases never wrap.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import RabiTrace

from .exceptions import FitConvergenceError
from .leastsq import MAX_NFEV, converged, fit_lm, rms, standard_errors

logger = logging.getLogger(__name__)

PHASE_RESTARTS = 8
PAD_FACTOR = 8


@dataclass(frozen=True)
class RabiComponent:
    frequency: float
    amplitude: float
    decay_rate: float
    phase: float
    frequency_err: float = 0.0
    amplitude_err: float = 0.0
    decay_rate_err: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "frequency_mhz": self.frequency,
            "amplitude": self.amplitude,
            "decay_rate_per_us": self.decay_rate,
            "phase_rad": self.phase,
            "frequency_err": self.frequency_err,
            "amplitude_err": self.amplitude_err,
            "decay_rate_err": self.decay_rate_err,
        }


@dataclass(frozen=True)
class RabiComponentFit:
    components: List[RabiComponent]
    intercept: float
    slope: float
    residual_rms: float
    rss: float
    n_points: int
    degenerate: bool = False
    scores: Dict[int, float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.components:
            raise ParameterError("A Rabi fit has at least one component")
        freqs = [c.frequency for c in self.components]
        if min(freqs) <= 0 or freqs != sorted(freqs):
            raise ParameterError(f"Component frequencies must be positive and ascending: {freqs}")

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def n_params(self) -> int:
        return 4 * self.n_components + 2

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([c.frequency for c in self.components])

    def component_curve(self, index: int, times) -> np.ndarray:
        c = self.components[index]
        t = np.asarray(times, dtype=float)
        return c.amplitude * np.exp(-c.decay_rate * t) * np.cos(2 * np.pi * c.frequency * t + c.phase)

    def background(self, times) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(times, dtype=float)

    def model(self, times) -> np.ndarray:
        total = self.background(times)
        for i in range(self.n_components):
            total = total + self.component_curve(i, times)
        return total

    def to_json_dict(self) -> dict:
        return {
            "n_components": self.n_components,
            "components": [c.to_json_dict() for c in self.components],
            "background": {"intercept": self.intercept, "slope": self.slope},
            "residual_rms": self.residual_rms,
            "degenerate": self.degenerate,
            "scores": {str(n): (s if np.isfinite(s) else None) for n, s in sorted(self.scores.items())},
            "metadata": dict(self.metadata),
        }


def _model(t: np.ndarray, params: np.ndarray) -> np.ndarray:
    y = params[0] + params[1] * t
    for f, gamma, c, s in params[2:].reshape(-1, 4):
        arg = 2 * np.pi * f * t
        y = y + np.exp(-gamma * t) * (c * np.cos(arg) + s * np.sin(arg))
    return y


def _jacobian(t: np.ndarray, params: np.ndarray) -> np.ndarray:
    jac = np.empty((len(t), len(params)))
    jac[:, 0] = 1.0
    jac[:, 1] = t
    for k, (f, gamma, c, s) in enumerate(params[2:].reshape(-1, 4)):
        arg = 2 * np.pi * f * t
        decay = np.exp(-gamma * t)
        cos, sin = np.cos(arg), np.sin(arg)
        col = 2 + 4 * k
        jac[:, col] = decay * (s * cos - c * sin) * 2 * np.pi * t
        jac[:, col + 1] = -t * decay * (c * cos + s * sin)
        jac[:, col + 2] = decay * cos
        jac[:, col + 3] = decay * sin
    return jac


def fourier_seeds(trace: RabiTrace, count: int) -> List[float]:
    """The ``count`` strongest peaks of the detrended, zero-padded spectrum."""
    t, y = trace.times, trace.signal
    detrended = y - np.polyval(np.polyfit(t, y, 1), t)
    n_fft = PAD_FACTOR * int(2 ** np.ceil(np.log2(len(t))))
    magnitude = np.abs(np.fft.rfft(detrended, n_fft))
    freqs = np.fft.rfftfreq(n_fft, trace.dt)
    indices, _ = find_peaks(magnitude)
    strongest = sorted(indices, key=lambda i: magnitude[i], reverse=True)[:count]
    seeds = sorted(float(freqs[i]) for i in strongest)
    if len(seeds) < count:
        # too few spectral features; fill in with evenly spread guesses
        nyquist = 0.5 / trace.dt
        extra = np.linspace(0.05, 0.5, count - len(seeds) + 2)[1:-1] * nyquist
        seeds = sorted(seeds + [float(f) for f in extra])
    return seeds


def _linear_start(t: np.ndarray, y: np.ndarray, freqs: Sequence[float], gamma: float) -> np.ndarray:
    """Amplitudes, phases and background by linear least squares at fixed frequencies."""
    decay = np.exp(-gamma * t)
    columns = [np.ones_like(t), t]
    for f in freqs:
        columns += [decay * np.cos(2 * np.pi * f * t), decay * np.sin(2 * np.pi * f * t)]
    coef, *_ = np.linalg.lstsq(np.column_stack(columns), y, rcond=None)
    params = [coef[0], coef[1]]
    for k, f in enumerate(freqs):
        params += [f, gamma, coef[2 + 2 * k], coef[3 + 2 * k]]
    return np.array(params)


def _rotate_phases(params: np.ndarray, angle: float) -> np.ndarray:
    rotated = params.copy()
    for k in range(len(params[2:]) // 4):
        c, s = params[4 + 4 * k], params[5 + 4 * k]
        rotated[4 + 4 * k] = c * np.cos(angle) - s * np.sin(angle)
        rotated[5 + 4 * k] = c * np.sin(angle) + s * np.cos(angle)
    return rotated


def fit_rabi(
    trace: RabiTrace,
    n_components: int,
    seeds: Optional[Sequence[float]] = None,
) -> RabiComponentFit:
    """
    Fits ``n_components`` damped cosines plus a linear background.

    Every N-subset of the top N+2 Fourier peaks is tried as a frequency
    seed set, then the best one is restarted with rotated phases. The
    lowest-residual converged fit wins.
    """
    if n_components < 1:
        raise ParameterError(f"Need at least one component, got {n_components}")
    t, y = trace.times, trace.signal
    n_params = 4 * n_components + 2
    if len(t) < n_params + 2:
        raise ParameterError(f"{len(t)} points cannot constrain {n_components} components")

    candidates = list(seeds) if seeds is not None else fourier_seeds(trace, n_components + 2)
    if len(candidates) < n_components:
        raise ParameterError(f"Need {n_components} frequency seeds, got {len(candidates)}")
    gamma0 = 1.0 / trace.duration

    def residuals(p: np.ndarray) -> np.ndarray:
        return _model(t, p) - y

    def jacobian(p: np.ndarray) -> np.ndarray:
        return _jacobian(t, p)

    results = []
    for subset in itertools.combinations(candidates, n_components):
        start = _linear_start(t, y, subset, gamma0)
        results.append((fit_lm(residuals, jacobian, start), start))

    def cost(entry) -> float:
        result, _ = entry
        return float(result.cost) if converged(result) else np.inf

    _, best_start = min(results, key=cost)
    for k in range(1, PHASE_RESTARTS):
        start = _rotate_phases(best_start, 2 * np.pi * k / PHASE_RESTARTS)
        results.append((fit_lm(residuals, jacobian, start), start))

    good = [r for r, _ in results if converged(r)]
    if not good:
        best = min((r for r, _ in results), key=lambda r: r.cost)
        raise FitConvergenceError(
            f"No {n_components}-component start converged within {MAX_NFEV} evaluations",
            best_params=best.x,
            residual_rms=rms(best),
        )
    best = min(good, key=lambda r: r.cost)
    return _build_fit(trace, best, n_components)


def _build_fit(trace: RabiTrace, result, n_components: int) -> RabiComponentFit:
    errors = standard_errors(result.jac, result.fun)
    components = []
    for k, (f, gamma, c, s) in enumerate(result.x[2:].reshape(-1, 4)):
        col = 2 + 4 * k
        if f < 0:
            f, s = -f, -s
        amplitude = float(np.hypot(c, s))
        amplitude_err = (
            float(np.hypot(c * errors[col + 2], s * errors[col + 3]) / amplitude) if amplitude > 0 else 0.0
        )
        components.append(
            RabiComponent(
                frequency=float(f),
                amplitude=amplitude,
                decay_rate=float(gamma),
                phase=float(np.arctan2(-s, c)),
                frequency_err=float(errors[col]),
                amplitude_err=amplitude_err,
                decay_rate_err=float(errors[col + 1]),
            )
        )
    components.sort(key=lambda c: c.frequency)

    resolution = 1.0 / (2.0 * trace.duration)
    freqs = np.array([c.frequency for c in components])
    degenerate = bool(len(freqs) > 1 and np.min(np.diff(freqs)) < resolution)
    if degenerate:
        logger.warning(
            f"Components closer than the {resolution:.3g} MHz resolution: "
            f"{', '.join(f'{f:.3f}' for f in freqs)} MHz"
        )
    return RabiComponentFit(
        components=components,
        intercept=float(result.x[0]),
        slope=float(result.x[1]),
        residual_rms=rms(result),
        rss=float(result.fun @ result.fun),
        n_points=len(trace),
        degenerate=degenerate,
        metadata={k: v for k, v in trace.metadata.items() if k in ("mw_power", "frequency_mhz", "b1_mhz")},
    )
