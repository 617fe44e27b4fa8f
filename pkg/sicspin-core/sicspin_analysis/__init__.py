from .assignment import Assignment, assign_transitions, refine_pair
from .exceptions import AmbiguousPairingError, AnalysisException, FitConvergenceError
from .pairing import PairingResult, TransitionPair, pair_transitions, response_threshold
from .peaks import PeakFit, PeakFitResult, detect_peaks, estimate_noise, fit_peaks, lorentzian_sum, refine_center
from .power import (
    ClassificationResult,
    PowerLawFit,
    Verdict,
    classify_pattern,
    classify_transition,
    fit_power_law,
)
from .rabi import RabiComponent, RabiComponentFit, fit_rabi, fourier_seeds
from .selection import ComponentSelection, aicc, select_components

__all__ = [
    "Assignment",
    "assign_transitions",
    "refine_pair",
    "AmbiguousPairingError",
    "AnalysisException",
    "FitConvergenceError",
    "PairingResult",
    "TransitionPair",
    "pair_transitions",
    "response_threshold",
    "PeakFit",
    "PeakFitResult",
    "detect_peaks",
    "estimate_noise",
    "fit_peaks",
    "lorentzian_sum",
    "refine_center",
    "ClassificationResult",
    "PowerLawFit",
    "Verdict",
    "classify_pattern",
    "classify_transition",
    "fit_power_law",
    "RabiComponent",
    "RabiComponentFit",
    "fit_rabi",
    "fourier_seeds",
    "ComponentSelection",
    "aicc",
    "select_components",
]
