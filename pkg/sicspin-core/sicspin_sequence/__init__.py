from .engine import (
    DEFAULT_LINEWIDTH_MHZ,
    LINE_CUTOFF_FWHM,
    AcquisitionSettings,
    NoMatchingTransitionError,
    SpeciesModel,
    candidate_lines,
    evaluate_sequence,
    frequency_grid,
    lorentzian,
    matching_transitions,
    run_laser_sweep,
    run_power_sweep,
    run_pulsed_spectrum,
    run_rabi_sweep,
    run_two_frequency,
    scan_response_matrix,
    species_models,
)
from .lockin import demodulate, demodulated_noise, square_wave_envelope
from .pulses import (
    Modulation,
    MwTone,
    PulseSequence,
    Segment,
    SegmentKind,
    pulsed_odmr_sequence,
    two_frequency_sequence,
)

__all__ = [
    "DEFAULT_LINEWIDTH_MHZ",
    "LINE_CUTOFF_FWHM",
    "AcquisitionSettings",
    "NoMatchingTransitionError",
    "SpeciesModel",
    "candidate_lines",
    "evaluate_sequence",
    "frequency_grid",
    "lorentzian",
    "matching_transitions",
    "run_laser_sweep",
    "run_power_sweep",
    "run_pulsed_spectrum",
    "run_rabi_sweep",
    "run_two_frequency",
    "scan_response_matrix",
    "species_models",
    "demodulate",
    "demodulated_noise",
    "square_wave_envelope",
    "Modulation",
    "MwTone",
    "PulseSequence",
    "Segment",
    "SegmentKind",
    "pulsed_odmr_sequence",
    "two_frequency_sequence",
]
