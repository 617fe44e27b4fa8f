"""
Spin-1 operator algebra and the zero-field-splitting Hamiltonian.

Conventions used throughout sicspin:
 - basis ordering {|+1>, |0>, |-1>}
 - energies and frequencies in MHz with h = 1, times in microseconds
 - |+> = (|+1> + |-1>)/sqrt(2), |-> = (|+1> - |-1>)/sqrt(2)
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import Transition

logger = logging.getLogger(__name__)

SpinMatrix = np.ndarray

_SQRT2 = np.sqrt(2.0)

# index of each |m_s> in the basis
IDX_PLUS1, IDX_0, IDX_MINUS1 = 0, 1, 2


@dataclass(frozen=True)
class ZfsParams:
    """Axial (D) and transverse (E) zero-field splitting, MHz."""

    d_mhz: float
    e_mhz: float

    def __post_init__(self) -> None:
        if not self.d_mhz > 0:
            raise ParameterError(f"D must be positive, got {self.d_mhz}")
        if not 0 <= self.e_mhz < self.d_mhz:
            raise ParameterError(
                f"E must satisfy 0 <= E < D, got E={self.e_mhz} with D={self.d_mhz}"
            )

    @property
    def is_axial(self) -> bool:
        return self.e_mhz == 0


class ZeroFieldBasis(NamedTuple):
    zero: np.ndarray
    plus: np.ndarray
    minus: np.ndarray

    def as_matrix(self) -> np.ndarray:
        """Columns |0>, |+>, |->."""
        return np.column_stack([self.zero, self.plus, self.minus])


def spin_operators() -> Tuple[SpinMatrix, SpinMatrix, SpinMatrix]:
    """Sx, Sy, Sz for S = 1."""
    sx = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQRT2
    sy = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _SQRT2
    sz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    return sx, sy, sz


def zero_field_basis() -> ZeroFieldBasis:
    zero = np.array([0, 1, 0], dtype=complex)
    plus = np.array([1, 0, 1], dtype=complex) / _SQRT2
    minus = np.array([1, 0, -1], dtype=complex) / _SQRT2
    return ZeroFieldBasis(zero, plus, minus)


def build_hamiltonian(zfs: ZfsParams) -> SpinMatrix:
    """H = D (Sz^2 - 2/3) + E (Sx^2 - Sy^2), traceless, in MHz."""
    sx, sy, sz = spin_operators()
    identity = np.eye(3, dtype=complex)
    h = zfs.d_mhz * (sz @ sz - (2.0 / 3.0) * identity) + zfs.e_mhz * (
        sx @ sx - sy @ sy
    )
    # exactly Hermitian
    return 0.5 * (h + h.conj().T)


def analytic_energies(zfs: ZfsParams) -> Tuple[float, float, float]:
    """Energies of |0>, |->, |+> in MHz."""
    d, e = zfs.d_mhz, zfs.e_mhz
    return (-2.0 * d / 3.0, d / 3.0 - e, d / 3.0 + e)


def eigenstructure(zfs: ZfsParams) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and matching eigenvectors (as columns) of the ZFS Hamiltonian."""
    return np.linalg.eigh(build_hamiltonian(zfs))


def transition_frequencies(zfs: ZfsParams) -> Tuple[float, float]:
    """(f_minus, f_plus) = (D - E, D + E)."""
    return zfs.d_mhz - zfs.e_mhz, zfs.d_mhz + zfs.e_mhz


def transition_frequency(zfs: ZfsParams, transition: Transition) -> float:
    f_minus, f_plus = transition_frequencies(zfs)
    return f_plus if Transition(transition) is Transition.PLUS else f_minus


def zfs_from_transitions(f_lo: float, f_hi: float) -> ZfsParams:
    """Inverse of transition_frequencies. Inputs must be ordered."""
    if not 0 < f_lo:
        raise ParameterError(f"Transition frequencies must be positive, got {f_lo}")
    if f_lo > f_hi:
        raise ParameterError(
            f"Transition frequencies must be ordered (f_lo <= f_hi), got {f_lo} > {f_hi}"
        )
    return ZfsParams(d_mhz=(f_hi + f_lo) / 2.0, e_mhz=(f_hi - f_lo) / 2.0)
