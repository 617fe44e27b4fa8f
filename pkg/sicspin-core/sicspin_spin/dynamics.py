"""
Coherent dynamics of driven spin-1 defects.

Coupling convention: the "coupling" of a transition is its on-resonance
population oscillation frequency in MHz, so a resonant drive of coupling
nu gives p0(t) = cos^2(pi nu t). In the lab frame this corresponds to the
drive term cos(2 pi f t + phase) * (omega_x Sx + omega_y Sy + omega_z Sz)
with the omegas in MHz; propagate_full and rabi_rwa agree on it.
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Channel, RabiTrace, Transition

from .geometry import MwField, axial_coupling, basal_orientations, rabi_couplings
from .zfs import ZfsParams, build_hamiltonian, spin_operators, transition_frequency, zero_field_basis

if TYPE_CHECKING:  # pragma: no cover
    from sicspin_charge.species import DefectSpecies

logger = logging.getLogger(__name__)

# Minimum number of propagator steps per drive period
STEPS_PER_PERIOD = 20
DEFAULT_DECAY_TIME_US = 2.0
DEFAULT_NOISE = 0.02

_CHUNK = 20000


class StepSizeError(ParameterError):
    pass


@dataclass(frozen=True)
class DriveParams:
    frequency_mhz: float
    omega_x: float = 0.0
    omega_y: float = 0.0
    omega_z: float = 0.0
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not self.frequency_mhz > 0:
            raise ParameterError(f"Drive frequency must be positive, got {self.frequency_mhz}")
        if min(self.omega_x, self.omega_y, self.omega_z) < 0:
            raise ParameterError("Drive couplings must be >= 0")


@dataclass(frozen=True)
class Trajectory:
    """Populations of |0>, |+>, |-> on the propagation time grid."""

    times: np.ndarray
    p0: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.p0 + self.p_plus + self.p_minus


def _step_unitaries(h0: np.ndarray, drive_op: np.ndarray, amplitudes: np.ndarray, dt: float) -> np.ndarray:
    hamiltonians = h0[None, :, :] + amplitudes[:, None, None] * drive_op[None, :, :]
    energies, vectors = np.linalg.eigh(hamiltonians)
    phases = np.exp(-2j * np.pi * energies * dt)
    return np.einsum("kij,kj,klj->kil", vectors, phases, vectors.conj())


def propagate_full(zfs: ZfsParams, drive: DriveParams, t_final: float, dt: float) -> Trajectory:
    """
    Propagates |0> under the full lab-frame Hamiltonian.

    The Hamiltonian is held constant over each step at its midpoint value and
    each step is exponentiated exactly through its eigendecomposition.
    """
    if dt <= 0 or t_final <= 0:
        raise ParameterError(f"Need positive t_final and dt, got {t_final}, {dt}")
    max_dt = 1.0 / (STEPS_PER_PERIOD * drive.frequency_mhz)
    if dt > max_dt:
        raise StepSizeError(
            f"Step {dt} us does not resolve the {drive.frequency_mhz} MHz drive "
            f"(need dt <= {max_dt:.3g} us)"
        )

    n_steps = int(round(t_final / dt))
    times = np.arange(n_steps + 1) * dt
    sx, sy, sz = spin_operators()
    h0 = build_hamiltonian(zfs)
    drive_op = drive.omega_x * sx + drive.omega_y * sy + drive.omega_z * sz

    basis = zero_field_basis()
    psi = basis.zero.copy()
    states = np.empty((n_steps + 1, 3), dtype=complex)
    states[0] = psi
    for start in range(0, n_steps, _CHUNK):
        stop = min(start + _CHUNK, n_steps)
        midpoints = (np.arange(start, stop) + 0.5) * dt
        amplitudes = np.cos(2 * np.pi * drive.frequency_mhz * midpoints + drive.phase)
        unitaries = _step_unitaries(h0, drive_op, amplitudes, dt)
        for k, u in enumerate(unitaries, start=start):
            psi = u @ psi
            states[k + 1] = psi

    amplitudes = states @ basis.as_matrix().conj()
    populations = np.abs(amplitudes) ** 2
    logger.debug(f"Propagated {n_steps} steps of {dt} us")
    return Trajectory(times, populations[:, 0], populations[:, 1], populations[:, 2])


def rabi_rwa(
    transition: Transition,
    coupling: float,
    detuning: float,
    t,
) -> np.ndarray:
    """
    Two-level p0(t) for a drive of ``coupling`` detuned by ``detuning`` (MHz).

    The formula is the same for either transition; ``transition`` only names
    which one is addressed.
    """
    Transition(transition)
    if coupling < 0:
        raise ParameterError(f"Coupling must be >= 0, got {coupling}")
    t = np.asarray(t, dtype=float)
    generalized = np.hypot(coupling, detuning)
    if generalized == 0:
        return np.ones_like(t)
    depth = coupling**2 / generalized**2
    return 1.0 - depth * np.sin(np.pi * generalized * t) ** 2


def transfer_probability(coupling, detuning, duration):
    """Population moved out of |0> by a pulse of ``duration``."""
    coupling = np.asarray(coupling, dtype=float)
    generalized = np.hypot(coupling, detuning)
    safe = np.where(generalized > 0, generalized, 1.0)
    depth = np.where(generalized > 0, (coupling / safe) ** 2, 0.0)
    return depth * np.sin(np.pi * generalized * duration) ** 2


def transition_couplings(species: "DefectSpecies", field: MwField, transition: Transition) -> np.ndarray:
    """
    Per-orientation couplings of one transition of ``species``.

    Basal defects give six values (x-drive for |0>-|+>, y-drive for
    |0>-|->); axial defects give the single coupling of their degenerate line.
    """
    transition = Transition(transition)
    if species.is_axial:
        couplings = np.array([axial_coupling(field)])
    else:
        pairs = rabi_couplings(field, basal_orientations())
        index = 0 if transition is Transition.PLUS else 1
        couplings = np.array([pair[index] for pair in pairs])
    return species.rabi_scale * couplings


def simulate_ensemble_rabi(
    species: "DefectSpecies",
    field: MwField,
    transition: Transition,
    durations: Sequence[float],
    detuning: float = 0.0,
    decay_time: Optional[float] = DEFAULT_DECAY_TIME_US,
    noise: float = DEFAULT_NOISE,
    seed: int = 0,
    drift_slope: float = 0.0,
    drift_offset: float = 0.0,
    channel: Channel = Channel.ODMR,
) -> RabiTrace:
    """
    Ensemble-averaged p0 after a pulse of each duration.

    Every orientation contributes with equal weight a two-level Rabi signal
    at its own coupling; the oscillating part decays with ``decay_time``.
    Noise is Gaussian, drawn from a generator seeded with ``seed`` only.
    """
    transition = Transition(transition)
    if not species.has_transition(transition):
        raise ParameterError(f"{species.name} has no observed {transition.value} transition")
    times = np.asarray(durations, dtype=float)
    envelope = np.ones_like(times) if not decay_time else np.exp(-times / decay_time)

    couplings = transition_couplings(species, field, transition)
    signal = np.zeros_like(times)
    for coupling in couplings:
        p0 = rabi_rwa(transition, float(coupling), detuning, times)
        generalized = np.hypot(coupling, detuning)
        depth = coupling**2 / generalized**2 if generalized > 0 else 0.0
        mean_level = 1.0 - 0.5 * depth
        signal += mean_level + (p0 - mean_level) * envelope
    signal /= len(couplings)

    signal += drift_offset + drift_slope * times
    if noise > 0:
        signal += np.random.default_rng(seed).normal(0.0, noise, size=len(times))

    return RabiTrace(
        times,
        signal,
        channel,
        metadata={
            "species": species.name,
            "transition": transition.value,
            "frequency_mhz": transition_frequency(species.zfs, transition),
            "b1_mhz": field.b1_mhz,
            "couplings_mhz": [float(c) for c in couplings],
            "seed": seed,
        },
    )
