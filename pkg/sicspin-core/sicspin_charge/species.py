import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Tuple

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Transition
from sicspin_spin.zfs import ZfsParams, transition_frequency

from .rates import PhotoPhysics

logger = logging.getLogger(__name__)


class OrientationClass(str, Enum):
    AXIAL = "axial"
    BASAL = "basal"


@dataclass(frozen=True)
class Thresholds:
    """Photon energies (eV) for emission, first ionization and charge recovery."""

    zpl_ev: float
    ion_threshold_ev: float
    recovery_threshold_ev: float

    def __post_init__(self) -> None:
        if min(self.zpl_ev, self.ion_threshold_ev, self.recovery_threshold_ev) <= 0:
            raise ParameterError(f"Energy thresholds must be positive: {self}")

    @property
    def cycling_ev(self) -> float:
        """Photon energy needed for continuous charge cycling."""
        return max(self.ion_threshold_ev, self.recovery_threshold_ev)


@dataclass(frozen=True)
class DefectSpecies:
    name: str
    zfs: ZfsParams
    orientation_class: OrientationClass
    thresholds: Thresholds
    photophysics: PhotoPhysics = field(default_factory=PhotoPhysics)
    sign: int = 1
    weight: float = 1.0
    transitions: Tuple[Transition, ...] = (Transition.PLUS, Transition.MINUS)
    rabi_scale: float = 1.0
    provenance: str = "paper"
    assumed_fields: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "orientation_class", OrientationClass(self.orientation_class))
        object.__setattr__(self, "transitions", tuple(Transition(t) for t in self.transitions))
        if self.sign not in (1, -1):
            raise ParameterError(f"{self.name}: sign must be +1 or -1, got {self.sign}")
        if self.weight < 0:
            raise ParameterError(f"{self.name}: weight must be >= 0, got {self.weight}")
        if self.rabi_scale <= 0:
            raise ParameterError(f"{self.name}: rabi_scale must be > 0, got {self.rabi_scale}")
        if self.is_axial and not self.zfs.is_axial:
            raise ParameterError(f"{self.name}: axial defects have E = 0, got {self.zfs.e_mhz}")
        if not self.transitions:
            raise ParameterError(f"{self.name}: at least one transition must be observed")

    @property
    def is_axial(self) -> bool:
        return self.orientation_class is OrientationClass.AXIAL

    def has_transition(self, transition: Transition) -> bool:
        # both labels name the single degenerate line of an axial defect
        return self.is_axial or Transition(transition) in self.transitions

    def lines(self) -> List[Tuple[Transition, float]]:
        """Observed resonance lines as (transition, frequency in MHz)."""
        if self.is_axial:
            return [(Transition.PLUS, self.zfs.d_mhz)]
        return [(t, transition_frequency(self.zfs, t)) for t in self.transitions]

    def with_weight(self, weight: float) -> "DefectSpecies":
        return replace(self, weight=weight)

    def provenance_dict(self) -> dict:
        return {"provenance": self.provenance, "assumed_fields": list(self.assumed_fields)}

