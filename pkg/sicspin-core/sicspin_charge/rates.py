"""
Six-level rate equations for spin-dependent photoluminescence and
photocurrent.

Levels are the ground and excited triplet, each split into an ms=0 and a
collapsed ms=+-1 pool, the metastable singlet, and the ionized charge
state. Rates are in 1/us and laser power is in arbitrary units.
"""

import logging
from dataclasses import asdict, dataclass
from enum import IntEnum
from typing import Dict, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from sicspin_core.exceptions import ParameterError, SicSpinException

logger = logging.getLogger(__name__)

# Excited-state lifetime of 13 ns sets k_rad + k_isc0
_ES_DECAY = 1.0 / 0.013
_K_RAD = 72.0

# Recovery from the ionized state does not remember the spin
_RECOVERY_MS0_SHARE = 1.0 / 3.0


class SingularSystemError(SicSpinException):
    pass


class Level(IntEnum):
    GS0 = 0
    GS1 = 1
    ES0 = 2
    ES1 = 3
    SINGLET = 4
    IONIZED = 5


@dataclass(frozen=True)
class PhotoCycleRates:
    """Transition rates at one laser power."""

    k_pump: float
    k_rad: float
    k_isc0: float
    k_isc1: float
    k_s: float
    k_ion: float
    k_rec: float
    sigma_ion: float = 1.0
    k_t1: float = 0.01

    def __post_init__(self) -> None:
        negative = [name for name, value in asdict(self).items() if not value >= 0]
        if negative:
            raise ParameterError(f"Rates must be >= 0: {', '.join(negative)}")
        if not self.k_isc1 > self.k_isc0:
            raise ParameterError(
                f"Spin contrast needs k_isc1 > k_isc0, got {self.k_isc1} <= {self.k_isc0}"
            )

    @property
    def is_dark(self) -> bool:
        return self.k_pump == 0

    @property
    def ionization_rate(self) -> float:
        """Effective ionization rate out of the excited state."""
        return self.k_ion * self.sigma_ion


@dataclass(frozen=True)
class PhotoPhysics:
    """
    Power-independent photophysics of one species.

    Pumping, ionization and recovery are one-photon steps and scale
    linearly with laser power; every other rate is intrinsic.
    """

    pump_per_power: float = 50.0
    k_rad: float = _K_RAD
    k_isc0: float = _ES_DECAY - _K_RAD
    k_isc1: float = 5.0 * (_ES_DECAY - _K_RAD)
    k_s: float = 5.0
    ion_per_power: float = 0.05
    rec_per_power: float = 0.5
    sigma_ion: float = 1.0
    k_t1: float = 0.01

    def __post_init__(self) -> None:
        self.at_power(1.0)

    def at_power(self, laser_power: float) -> PhotoCycleRates:
        if laser_power < 0:
            raise ParameterError(f"Laser power must be >= 0, got {laser_power}")
        return PhotoCycleRates(
            k_pump=self.pump_per_power * laser_power,
            k_rad=self.k_rad,
            k_isc0=self.k_isc0,
            k_isc1=self.k_isc1,
            k_s=self.k_s,
            k_ion=self.ion_per_power * laser_power,
            k_rec=self.rec_per_power * laser_power,
            sigma_ion=self.sigma_ion,
            k_t1=self.k_t1,
        )

    def to_json_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class StationaryState:
    occupations: np.ndarray
    pl_rate: float
    current_rate: float
    residual: float

    @property
    def ms0_polarization(self) -> float:
        ground = self.occupations[Level.GS0] + self.occupations[Level.GS1]
        return float(self.occupations[Level.GS0] / ground) if ground > 0 else 1.0 / 3.0

    def __getitem__(self, level: Level) -> float:
        return float(self.occupations[level])


def rate_matrix(rates: PhotoCycleRates) -> np.ndarray:
    """Generator Q with Q[to, from] = rate and columns summing to zero."""
    q = np.zeros((len(Level), len(Level)))

    def add(src: Level, dst: Level, k: float) -> None:
        q[dst, src] += k

    add(Level.GS0, Level.ES0, rates.k_pump)
    add(Level.GS1, Level.ES1, rates.k_pump)
    add(Level.ES0, Level.GS0, rates.k_rad)
    add(Level.ES1, Level.GS1, rates.k_rad)
    add(Level.ES0, Level.SINGLET, rates.k_isc0)
    add(Level.ES1, Level.SINGLET, rates.k_isc1)
    add(Level.SINGLET, Level.GS0, rates.k_s)
    add(Level.ES0, Level.IONIZED, rates.ionization_rate)
    add(Level.ES1, Level.IONIZED, rates.ionization_rate)
    add(Level.IONIZED, Level.GS0, rates.k_rec * _RECOVERY_MS0_SHARE)
    add(Level.IONIZED, Level.GS1, rates.k_rec * (1.0 - _RECOVERY_MS0_SHARE))
    # spin-lattice relaxation towards the thermal 1:2 split
    add(Level.GS0, Level.GS1, rates.k_t1 * (1.0 - _RECOVERY_MS0_SHARE))
    add(Level.GS1, Level.GS0, rates.k_t1 * _RECOVERY_MS0_SHARE)

    q -= np.diag(q.sum(axis=0))
    return q


def _reachable(q: np.ndarray) -> np.ndarray:
    adjacency = csr_matrix((q.T > 0) & ~np.eye(len(q), dtype=bool))
    found = set()
    for start in (Level.GS0, Level.GS1):
        found.update(breadth_first_order(adjacency, int(start), directed=True, return_predecessors=False))
    return np.array(sorted(found))


def _dark_state(ms0_fraction: Optional[float]) -> StationaryState:
    f = _RECOVERY_MS0_SHARE if ms0_fraction is None else ms0_fraction
    occupations = np.zeros(len(Level))
    occupations[Level.GS0] = f
    occupations[Level.GS1] = 1.0 - f
    return StationaryState(occupations, pl_rate=0.0, current_rate=0.0, residual=0.0)


def steady_state(rates: PhotoCycleRates, ms0_fraction: Optional[float] = None) -> StationaryState:
    """
    Stationary occupations under continuous illumination.

    Without ``ms0_fraction`` the free stationary state is returned, which
    is the laser-polarized reference. With it, the ground-state spin split
    is held at GS0:GS1 = f:(1-f) and the remaining levels relax around it.
    """
    if ms0_fraction is not None and not 0.0 <= ms0_fraction <= 1.0:
        raise ParameterError(f"ms0_fraction must lie in [0, 1], got {ms0_fraction}")
    if rates.is_dark:
        return _dark_state(ms0_fraction)

    q = rate_matrix(rates)
    levels = _reachable(q)
    conditioned = ms0_fraction is not None
    for level in levels:
        if conditioned and level in (Level.GS0, Level.GS1):
            continue
        if q[level, level] == 0:
            raise SingularSystemError(
                f"Level {Level(level).name} is populated but has no escape rate"
            )

    a = q[np.ix_(levels, levels)].copy()
    b = np.zeros(len(levels))
    # GS0 and GS1 are the first two reduced rows
    if conditioned:
        a[Level.GS0, :] = 0.0
        a[Level.GS0, Level.GS0] = 1.0 - ms0_fraction
        a[Level.GS0, Level.GS1] = -ms0_fraction
        a[Level.GS1, :] = 1.0
        b[Level.GS1] = 1.0
    else:
        a[Level.GS0, :] = 1.0
        b[Level.GS0] = 1.0
    try:
        solution = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as e:
        raise SingularSystemError(f"Rate equations have no unique stationary state: {e}") from e

    occupations = np.zeros(len(Level))
    occupations[levels] = np.maximum(solution, 0.0)

    balance = q @ occupations
    if conditioned:
        balance = balance[2:]
    residual = float(max(np.max(np.abs(balance)), abs(occupations.sum() - 1.0)))
    if residual > 1e-10:
        logger.warning(f"Stationary solution residual is {residual:.3g}")

    excited = occupations[Level.ES0] + occupations[Level.ES1]
    return StationaryState(
        occupations=occupations,
        pl_rate=float(rates.k_rad * excited),
        current_rate=float(
            rates.ionization_rate * excited + rates.k_rec * occupations[Level.IONIZED]
        ),
        residual=residual,
    )
