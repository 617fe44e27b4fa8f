from .rates import (
    Level,
    PhotoCycleRates,
    PhotoPhysics,
    SingularSystemError,
    StationaryState,
    rate_matrix,
    steady_state,
)
from .readout import (
    PHOTON_ENERGY_905NM_EV,
    ReadoutCurve,
    pdmr_visible,
    power_dependence,
    readout_curve,
    readout_signal,
)
from .registry import (
    DEFAULT_REGISTRY_PATH,
    DefectRegistry,
    default_registry,
    load_registry,
    parse_registry,
)
from .species import DefectSpecies, OrientationClass, Thresholds

__all__ = [
    "Level",
    "PhotoCycleRates",
    "PhotoPhysics",
    "SingularSystemError",
    "StationaryState",
    "rate_matrix",
    "steady_state",
    "PHOTON_ENERGY_905NM_EV",
    "ReadoutCurve",
    "pdmr_visible",
    "power_dependence",
    "readout_curve",
    "readout_signal",
    "DEFAULT_REGISTRY_PATH",
    "DefectRegistry",
    "default_registry",
    "load_registry",
    "parse_registry",
    "DefectSpecies",
    "OrientationClass",
    "Thresholds",
]
