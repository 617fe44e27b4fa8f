import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

import numpy as np

from .exceptions import ParameterError

logger = logging.getLogger(__name__)


Metadata = Dict[str, Any]


class Channel(str, Enum):
    """Readout channel: photoluminescence (ODMR) or photocurrent (PDMR)."""

    ODMR = "ODMR"
    PDMR = "PDMR"


class Transition(str, Enum):
    """Zero-field transition of a spin-1: |0> <-> |+> (D + E) or |0> <-> |-> (D - E)."""

    PLUS = "plus"
    MINUS = "minus"


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ParameterError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Spectrum:
    """Frequency-swept, demodulated signal."""

    frequencies: np.ndarray
    signal: np.ndarray
    channel: Channel
    metadata: Metadata = field(default_factory=dict)

    def __post_init__(self) -> None:
        freqs = _as_float_array(self.frequencies, "frequencies")
        signal = _as_float_array(self.signal, "signal")
        if len(freqs) != len(signal):
            raise ParameterError(
                f"Spectrum has {len(freqs)} grid points but {len(signal)} values"
            )
        if len(freqs) > 1 and not np.all(np.diff(freqs) > 0):
            raise ParameterError("Spectrum frequency grid must be strictly increasing")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "signal", signal)
        object.__setattr__(self, "channel", Channel(self.channel))

    @property
    def step(self) -> float:
        return float(np.median(np.diff(self.frequencies))) if len(self) > 1 else 0.0

    def __len__(self) -> int:
        return len(self.frequencies)

    def to_json_dict(self) -> dict:
        return {
            "channel": self.channel.value,
            "freq_mhz": self.frequencies.tolist(),
            "signal": self.signal.tolist(),
            "metadata": dict(self.metadata),
        }


@dataclass(frozen=True)
class RabiTrace:
    """Sampled Rabi oscillation on a uniform time grid (microseconds)."""

    times: np.ndarray
    signal: np.ndarray
    channel: Channel
    metadata: Metadata = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = _as_float_array(self.times, "times")
        signal = _as_float_array(self.signal, "signal")
        if len(times) != len(signal):
            raise ParameterError(
                f"RabiTrace has {len(times)} time points but {len(signal)} values"
            )
        if len(times) < 2:
            raise ParameterError("RabiTrace needs at least two time points")
        steps = np.diff(times)
        if not np.all(steps > 0):
            raise ParameterError("RabiTrace time grid must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-6, atol=0):
            raise ParameterError("RabiTrace time grid must be uniform")
        if not np.all(np.isfinite(signal)):
            raise ParameterError("RabiTrace signal must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "signal", signal)
        object.__setattr__(self, "channel", Channel(self.channel))

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    def __len__(self) -> int:
        return len(self.times)

    def to_json_dict(self) -> dict:
        return {
            "channel": self.channel.value,
            "time_us": self.times.tolist(),
            "signal": self.signal.tolist(),
            "metadata": dict(self.metadata),
        }


@dataclass(frozen=True)
class ResponseMatrix:
    """
    Two-frequency cross responses between candidate lines.

    ``values[i, j]`` is the differential signal at ``lines[j]`` with the
    modulated tone fixed at ``lines[i]``; ``sigma`` is the noise standard
    deviation of a single entry.
    """

    lines: np.ndarray
    values: np.ndarray
    sigma: float
    channel: Channel
    metadata: Metadata = field(default_factory=dict)

    def __post_init__(self) -> None:
        lines = _as_float_array(self.lines, "lines")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(lines), len(lines)):
            raise ParameterError(
                f"Response matrix shape {values.shape} does not match {len(lines)} lines"
            )
        if self.sigma < 0:
            raise ParameterError(f"Noise sigma must be >= 0, got {self.sigma}")
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "channel", Channel(self.channel))

    def __len__(self) -> int:
        return len(self.lines)

    def to_json_dict(self) -> dict:
        return {
            "channel": self.channel.value,
            "lines_mhz": self.lines.tolist(),
            "values": self.values.tolist(),
            "sigma": self.sigma,
            "metadata": dict(self.metadata),
        }
