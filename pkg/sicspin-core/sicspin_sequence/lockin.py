import logging

import numpy as np

from sicspin_core.exceptions import ParameterError

logger = logging.getLogger(__name__)


def square_wave_envelope(n_repetitions: int, period: int) -> np.ndarray:
    """On for the first half of every period. Needs a whole number of periods."""
    if period < 2 or period % 2:
        raise ParameterError(f"Modulation period must be an even number >= 2, got {period}")
    if n_repetitions < period or n_repetitions % period:
        raise ParameterError(
            f"{n_repetitions} repetitions is not a whole number of {period}-repetition periods"
        )
    phase = np.arange(n_repetitions) % period
    return phase < period // 2


def demodulate(samples: np.ndarray, envelope: np.ndarray) -> np.ndarray:
    """
    Multiply-and-average lock-in output: mean over "on" repetitions minus
    mean over "off" repetitions, along the last axis.
    """
    samples = np.asarray(samples, dtype=float)
    envelope = np.asarray(envelope, dtype=bool)
    if samples.shape[-1] != len(envelope):
        raise ParameterError(
            f"Got {samples.shape[-1]} samples per point for a {len(envelope)}-repetition envelope"
        )
    if envelope.all() or not envelope.any():
        raise ParameterError("Envelope must contain both on and off repetitions")
    return samples[..., envelope].mean(axis=-1) - samples[..., ~envelope].mean(axis=-1)


def demodulated_noise(sigma: float, envelope: np.ndarray) -> float:
    """Standard deviation of ``demodulate`` for independent noise of ``sigma`` per repetition."""
    envelope = np.asarray(envelope, dtype=bool)
    n_on = int(envelope.sum())
    n_off = len(envelope) - n_on
    return float(sigma * np.sqrt(1.0 / n_on + 1.0 / n_off))
