"""
Pulse sequences for pulsed ODMR/PDMR.

A sequence is one repetition: laser initialization, microwave pulses,
and a laser readout. The modulation names the microwave tone whose
amplitude is switched on and off by the slow square-wave envelope.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence

from sicspin_core.exceptions import ParameterError
from sicspin_spin.geometry import MwField

logger = logging.getLogger(__name__)

DEFAULT_LASER_US = 3.0
DEFAULT_WAIT_US = 1.0
DEFAULT_READOUT_US = 0.5


class SegmentKind(str, Enum):
    LASER = "laser"
    MW = "mw"
    WAIT = "wait"
    READOUT = "readout"


@dataclass(frozen=True)
class MwTone:
    """
    A microwave source. ``power`` is in units of the reference power at
    which the drive amplitude is ``b1_ref`` MHz.
    """

    label: str
    frequency_mhz: float
    power: float = 1.0
    b1_ref: float = 5.0
    elevation_deg: float = 45.0
    misalignment_deg: float = 0.0

    def __post_init__(self) -> None:
        if not self.frequency_mhz > 0:
            raise ParameterError(f"{self.label}: frequency must be > 0, got {self.frequency_mhz}")
        if self.power < 0:
            raise ParameterError(f"{self.label}: power must be >= 0, got {self.power}")

    @property
    def field(self) -> MwField:
        return MwField.from_power(
            self.power,
            b1_ref=self.b1_ref,
            elevation_deg=self.elevation_deg,
            misalignment_deg=self.misalignment_deg,
        )

    @property
    def nominal_field(self) -> MwField:
        """Field at the reference power, used for pi-pulse calibration."""
        return replace(self, power=1.0).field


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    duration_us: Optional[float] = None
    tone: Optional[MwTone] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SegmentKind(self.kind))
        if self.kind is SegmentKind.MW:
            if self.tone is None:
                raise ParameterError("Microwave segments need a tone")
        elif self.tone is not None:
            raise ParameterError(f"{self.kind.value} segments cannot carry a tone")
        # only microwave segments may leave their duration to pi calibration
        if self.duration_us is None and self.kind is not SegmentKind.MW:
            raise ParameterError(f"{self.kind.value} segment needs a duration")
        if self.duration_us is not None and not self.duration_us > 0:
            raise ParameterError(f"Segment durations must be > 0, got {self.duration_us}")

    @property
    def is_pi_calibrated(self) -> bool:
        return self.kind is SegmentKind.MW and self.duration_us is None


@dataclass(frozen=True)
class Modulation:
    """Square-wave on/off envelope of one tone, ``period`` repetitions long."""

    target: str
    period: int = 2

    def __post_init__(self) -> None:
        if self.period < 2 or self.period % 2:
            raise ParameterError(f"Modulation period must be an even number >= 2, got {self.period}")


@dataclass(frozen=True)
class PulseSequence:
    segments: Sequence[Segment]
    modulation: Modulation
    name: str = "sequence"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        readouts = sum(1 for s in self.segments if s.kind is SegmentKind.READOUT)
        if readouts != 1:
            raise ParameterError(f"{self.name}: need exactly one readout segment, got {readouts}")
        labels = [t.label for t in self.tones]
        if len(set(labels)) != len(labels):
            raise ParameterError(f"{self.name}: tone labels must be unique, got {labels}")
        if self.modulation.target not in labels:
            raise ParameterError(
                f"{self.name}: modulated tone {self.modulation.target!r} is not in the sequence"
            )

    @property
    def tones(self) -> List[MwTone]:
        return [s.tone for s in self.segments if s.tone is not None]

    def tone(self, label: str) -> MwTone:
        for t in self.tones:
            if t.label == label:
                return t
        raise KeyError(label)

    def mw_segments(self, disabled: Sequence[str] = ()) -> List[Segment]:
        """Microwave segments in order, skipping tones switched off."""
        return [
            s
            for s in self.segments
            if s.kind is SegmentKind.MW and s.tone is not None and s.tone.label not in disabled
        ]

    def describe(self) -> List[dict]:
        return [
            {
                "kind": s.kind.value,
                "duration_us": "pi" if s.is_pi_calibrated else s.duration_us,
                **({"tone": s.tone.label, "frequency_mhz": s.tone.frequency_mhz} if s.tone else {}),
            }
            for s in self.segments
        ]


def _frame(mw: List[Segment], laser_us: float, wait_us: float, readout_us: float) -> List[Segment]:
    return [
        Segment(SegmentKind.LASER, laser_us),
        Segment(SegmentKind.WAIT, wait_us),
        *mw,
        Segment(SegmentKind.READOUT, readout_us),
    ]


def pulsed_odmr_sequence(
    frequency_mhz: float,
    mw_power: float = 1.0,
    pulse_us: Optional[float] = None,
    period: int = 2,
    laser_us: float = DEFAULT_LASER_US,
    wait_us: float = DEFAULT_WAIT_US,
    readout_us: float = DEFAULT_READOUT_US,
    **tone_kwargs,
) -> PulseSequence:
    """Laser, one microwave pulse (pi-calibrated unless ``pulse_us`` is set), readout."""
    tone = MwTone("MW", frequency_mhz, mw_power, **tone_kwargs)
    return PulseSequence(
        _frame([Segment(SegmentKind.MW, pulse_us, tone)], laser_us, wait_us, readout_us),
        Modulation("MW", period),
        name="pulsed",
    )


def two_frequency_sequence(
    f1_mhz: float,
    f2_mhz: float,
    mw_power: float = 1.0,
    period: int = 2,
    laser_us: float = DEFAULT_LASER_US,
    wait_us: float = DEFAULT_WAIT_US,
    readout_us: float = DEFAULT_READOUT_US,
    **tone_kwargs,
) -> PulseSequence:
    """MW1 then MW2, both pi pulses before readout; MW1 is modulated."""
    mw1 = MwTone("MW1", f1_mhz, mw_power, **tone_kwargs)
    mw2 = MwTone("MW2", f2_mhz, mw_power, **tone_kwargs)
    return PulseSequence(
        _frame(
            [Segment(SegmentKind.MW, None, mw1), Segment(SegmentKind.MW, None, mw2)],
            laser_us,
            wait_us,
            readout_us,
        ),
        Modulation("MW1", period),
        name="two-frequency",
    )
