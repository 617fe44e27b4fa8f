import logging
from typing import Dict, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib.figure import Figure

from sicspin_analysis.peaks import PeakFitResult, lorentzian_sum
from sicspin_analysis.rabi import RabiComponentFit
from sicspin_core.models import RabiTrace, Spectrum

logger = logging.getLogger(__name__)

# fixed element ids and no timestamp, so reruns give identical files
_SVG_RC = {"svg.hashsalt": "sicspin", "svg.fonttype": "none"}


def _save(fig: Figure, path: str) -> str:
    with matplotlib.rc_context(_SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    logger.debug(f"Wrote {path}")
    return path


def plot_spectrum(path: str, spectrum: Spectrum, fit: Optional[PeakFitResult] = None, title: str = "") -> str:
    fig = Figure(figsize=(7, 3.5))
    ax = fig.add_subplot()
    ax.plot(spectrum.frequencies, spectrum.signal, ".", ms=2, color="0.3", label="data")
    if fit is not None and len(fit):
        fine = np.linspace(spectrum.frequencies[0], spectrum.frequencies[-1], 20 * len(spectrum))
        ax.plot(fine, lorentzian_sum(fine, fit.baseline, fit.peaks), "-", lw=1, color="C3", label="fit")
        for p in fit:
            ax.axvline(p.center, lw=0.5, ls=":", color="C3")
        ax.legend(loc="best", frameon=False)
    ax.set_xlabel("Frequency (MHz)")
    ax.set_ylabel(f"{spectrum.channel.value} signal (arb. u.)")
    ax.set_title(title or f"{spectrum.channel.value} spectrum")
    fig.tight_layout()
    return _save(fig, path)


def plot_rabi(path: str, trace: RabiTrace, fit: Optional[RabiComponentFit] = None, title: str = "") -> str:
    """Data with the total fit, and each component as a thin offset curve below."""
    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot()
    ax.plot(trace.times, trace.signal, ".", ms=2, color="0.3", label="data")
    if fit is not None:
        fine = np.linspace(trace.times[0], trace.times[-1], 10 * len(trace))
        ax.plot(fine, fit.model(fine), "-", lw=1, color="C3", label=f"fit, N={fit.n_components}")
        span = float(np.ptp(trace.signal)) or 1.0
        floor = float(np.min(trace.signal))
        for i, c in enumerate(fit.components):
            offset = floor - span * (0.6 + 0.5 * i)
            ax.plot(fine, offset + fit.component_curve(i, fine), "-", lw=0.6, color=f"C{i}", label=f"{c.frequency:.3f} MHz")
        ax.legend(loc="upper right", frameon=False, fontsize="small")
    ax.set_xlabel("Pulse duration (us)")
    ax.set_ylabel(f"{trace.channel.value} signal (arb. u.)")
    ax.set_title(title or "Rabi oscillation")
    fig.tight_layout()
    return _save(fig, path)


def plot_power_law(path: str, powers: Sequence[float], frequencies: np.ndarray, prefactors: Sequence[float], exponents: Sequence[float]) -> str:
    """Component frequency against microwave power, one column of ``frequencies`` per component."""
    fig = Figure(figsize=(5, 4))
    ax = fig.add_subplot()
    p = np.asarray(powers, dtype=float)
    fine = np.geomspace(p[0], p[-1], 50)
    for k in range(frequencies.shape[1]):
        ax.loglog(p, frequencies[:, k], "o", ms=4, color=f"C{k}")
        ax.loglog(fine, prefactors[k] * fine ** exponents[k], "-", lw=1, color=f"C{k}", label=f"alpha = {exponents[k]:.3f}")
    ax.set_xlabel("Microwave power (arb. u.)")
    ax.set_ylabel("Rabi frequency (MHz)")
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def plot_laser_sweep(path: str, powers: Sequence[float], intensities: Dict[str, np.ndarray], channel: str) -> str:
    fig = Figure(figsize=(5, 4))
    ax = fig.add_subplot()
    for i, (name, values) in enumerate(sorted(intensities.items())):
        values = np.abs(np.asarray(values, dtype=float))
        if np.all(values <= 0):
            continue
        ax.loglog(powers, np.where(values > 0, values, np.nan), "o-", ms=3, lw=1, color=f"C{i}", label=name)
    ax.set_xlabel("Laser power (arb. u.)")
    ax.set_ylabel(f"{channel} intensity (norm.)")
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    return _save(fig, path)
