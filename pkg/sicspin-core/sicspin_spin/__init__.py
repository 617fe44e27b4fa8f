from .zfs import (
    ZfsParams,
    ZeroFieldBasis,
    spin_operators,
    zero_field_basis,
    build_hamiltonian,
    analytic_energies,
    eigenstructure,
    transition_frequencies,
    transition_frequency,
    zfs_from_transitions,
)
from .geometry import (
    DefectOrientation,
    MwField,
    basal_orientations,
    axial_orientation,
    rabi_couplings,
    axial_coupling,
    multiplet_pattern,
    scan_azimuth_offsets,
)
from .dynamics import (
    DriveParams,
    Trajectory,
    StepSizeError,
    propagate_full,
    rabi_rwa,
    transfer_probability,
    transition_couplings,
    simulate_ensemble_rabi,
)

__all__ = [
    "ZfsParams",
    "ZeroFieldBasis",
    "spin_operators",
    "zero_field_basis",
    "build_hamiltonian",
    "analytic_energies",
    "eigenstructure",
    "transition_frequencies",
    "transition_frequency",
    "zfs_from_transitions",
    "DefectOrientation",
    "MwField",
    "basal_orientations",
    "axial_orientation",
    "rabi_couplings",
    "axial_coupling",
    "multiplet_pattern",
    "scan_azimuth_offsets",
    "DriveParams",
    "Trajectory",
    "StepSizeError",
    "propagate_full",
    "rabi_rwa",
    "transfer_probability",
    "transition_couplings",
    "simulate_ensemble_rabi",
]
