import logging
from typing import Sequence

import numpy as np

from sicspin_core.models import Channel, RabiTrace, Spectrum

logging.basicConfig(level=logging.DEBUG)


def damped_cosines(
    frequencies: Sequence[float],
    amplitudes: Sequence[float],
    decay_rate: float = 0.5,
    duration: float = 4.0,
    n_points: int = 401,
    noise: float = 0.0,
    seed: int = 0,
    intercept: float = 0.0,
    slope: float = 0.0,
) -> RabiTrace:
    """Synthetic Rabi trace: a sum of damped cosines on a linear background."""
    t = np.linspace(0.0, duration, n_points)
    y = intercept + slope * t
    for f, a in zip(frequencies, amplitudes):
        y = y + a * np.exp(-decay_rate * t) * np.cos(2 * np.pi * f * t)
    if noise > 0:
        y = y + np.random.default_rng(seed).normal(0.0, noise, size=n_points)
    return RabiTrace(t, y, Channel.ODMR)


def lorentzian_spectrum(
    centers: Sequence[float],
    amplitudes: Sequence[float],
    fwhm: float = 2.0,
    f_start: float = 1100.0,
    f_stop: float = 1400.0,
    step: float = 0.25,
    noise: float = 0.0,
    seed: int = 0,
    baseline: float = 0.0,
) -> Spectrum:
    f = np.arange(f_start, f_stop + step / 2, step)
    half = fwhm / 2
    y = np.full_like(f, baseline)
    for c, a in zip(centers, amplitudes):
        y += a * half**2 / ((f - c) ** 2 + half**2)
    if noise > 0:
        y += np.random.default_rng(seed).normal(0.0, noise, size=len(f))
    return Spectrum(f, y, Channel.ODMR)
