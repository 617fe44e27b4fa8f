"""
Crystal-frame vector math for basal and axial defects in 4H-SiC.

Lab frame: x || [11-20], y || [1-100], z || [0001]. The microwave wire runs
along [1-100], so an ideal drive field lies in the x-z plane.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from sicspin_core.exceptions import ParameterError

logger = logging.getLogger(__name__)

Vec3 = np.ndarray

# Polar angle of a basal Si-C bond from the c axis (ideal tetrahedron)
THETA_TETRAHEDRAL = float(np.arccos(-1.0 / 3.0))

UNPRIMED_AZIMUTHS_DEG = (90.0, 210.0, 330.0)
PRIMED_AZIMUTHS_DEG = (30.0, 150.0, 270.0)
_LABELS = ("a", "b", "c", "a'", "b'", "c'")

# Warn when the closest pair of x couplings is within this fraction of their mean
DEGENERACY_FRACTION = 0.01
PATTERN_RTOL = 1e-6

Couplings = List[Tuple[float, float]]


@dataclass(frozen=True)
class DefectOrientation:
    label: str
    azimuth_deg: float
    x_axis: Vec3
    y_axis: Vec3
    z_axis: Vec3


@dataclass(frozen=True)
class MwField:
    """
    Uniform microwave drive field.

    ``b1_mhz`` is the drive amplitude in Rabi-rate units. The direction is
    tilted from x_lab towards z_lab by ``elevation_deg``; a nonzero
    ``misalignment_deg`` rotates its in-plane part about z_lab, modelling a
    wire that is only approximately parallel to [1-100].
    """

    b1_mhz: float
    elevation_deg: float = 45.0
    misalignment_deg: float = 0.0

    def __post_init__(self) -> None:
        if self.b1_mhz < 0:
            raise ParameterError(f"Field amplitude must be >= 0, got {self.b1_mhz}")

    @classmethod
    def from_power(
        cls,
        power: float,
        b1_ref: float = 5.0,
        power_ref: float = 1.0,
        **kwargs,
    ) -> "MwField":
        """Field amplitude grows as sqrt(power); ``b1_ref`` is the amplitude at ``power_ref``."""
        if power < 0 or power_ref <= 0:
            raise ParameterError(f"Invalid MW power {power} (reference {power_ref})")
        return cls(b1_mhz=b1_ref * np.sqrt(power / power_ref), **kwargs)

    @property
    def direction(self) -> Vec3:
        elevation = np.radians(self.elevation_deg)
        rotation = np.radians(self.misalignment_deg)
        horizontal = np.cos(elevation)
        return np.array(
            [
                horizontal * np.cos(rotation),
                horizontal * np.sin(rotation),
                np.sin(elevation),
            ]
        )


def _orientation(label: str, azimuth_deg: float, theta: float = THETA_TETRAHEDRAL) -> DefectOrientation:
    phi = np.radians(azimuth_deg)
    z_axis = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    y_axis = np.array([-np.sin(phi), np.cos(phi), 0.0])
    x_axis = np.cross(y_axis, z_axis)
    return DefectOrientation(label, azimuth_deg, x_axis, y_axis, z_axis)


def basal_orientations(offset_deg: float = 30.0) -> List[DefectOrientation]:
    """
    The six symmetry-equivalent basal orientations a, b, c, a', b', c'.

    ``offset_deg`` shifts all azimuths relative to the shipped convention
    (offset 30 deg gives azimuths 90/210/330 and 30/150/270); it only exists
    for the azimuth-convention scan.
    """
    shift = offset_deg - 30.0
    azimuths = [a + shift for a in UNPRIMED_AZIMUTHS_DEG + PRIMED_AZIMUTHS_DEG]
    return [_orientation(label, az) for label, az in zip(_LABELS, azimuths)]


def axial_orientation() -> DefectOrientation:
    return DefectOrientation(
        "axial",
        0.0,
        np.array([1.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0]),
        np.array([0.0, 0.0, 1.0]),
    )


def distinct_values(values: Sequence[float], rtol: float = 1e-9) -> List[Tuple[float, int]]:
    """Sorted distinct values with multiplicities, merging values equal to ``rtol``."""
    groups: List[List[float]] = []
    for v in sorted(values):
        if groups and abs(v - groups[-1][0]) <= rtol * max(abs(v), abs(groups[-1][0]), 1e-300):
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(float(np.mean(g)), len(g)) for g in groups]


def _check_multiplets(couplings: Couplings) -> None:
    omega_x = [wx for wx, _ in couplings]
    mean = float(np.mean(omega_x))
    if mean == 0:
        return
    pattern = multiplet_pattern(couplings)
    x_values = [v for v, _ in pattern["x"]]
    listed = ", ".join(f"{v:.4g}" for v in x_values)
    if len(x_values) < 3 or float(np.min(np.diff(x_values))) < DEGENERACY_FRACTION * mean:
        logger.warning(f"x-driven couplings are (nearly) degenerate ({listed} MHz)")
    elif not pattern["x_equally_spaced"]:
        logger.warning(
            f"x-driven couplings are not equally spaced ({listed} MHz); "
            "the drive field is too close to the basal plane or misaligned"
        )
    if not pattern["y_one_to_two"]:
        y_listed = ", ".join(f"{v:.4g}" for v, _ in pattern["y"])
        logger.warning(f"y-driven couplings are not in a 1:2 ratio ({y_listed} MHz)")


def _project(field: MwField, orientations: Sequence[DefectOrientation]) -> Couplings:
    direction = field.direction
    return [
        (
            field.b1_mhz * abs(float(direction @ o.x_axis)),
            field.b1_mhz * abs(float(direction @ o.y_axis)),
        )
        for o in orientations
    ]


def rabi_couplings(field: MwField, orientations: Sequence[DefectOrientation]) -> Couplings:
    """Per orientation (omega_x, omega_y) = b1 * (|B.x_d|, |B.y_d|), MHz."""
    couplings = _project(field, orientations)
    if len(orientations) > 1:
        _check_multiplets(couplings)
    return couplings


def axial_coupling(field: MwField) -> float:
    """Drive of the degenerate line of an axial (E = 0) defect."""
    (omega_x, omega_y), = rabi_couplings(field, [axial_orientation()])
    return float(np.hypot(omega_x, omega_y))


def multiplet_pattern(couplings: Couplings, rtol: float = 1e-9) -> dict:
    """
    Distinct x- and y-driven coupling values with multiplicities, and
    whether they form the three-equally-spaced and 1:2 patterns.
    """
    x = distinct_values([wx for wx, _ in couplings], rtol)
    y = distinct_values([wy for _, wy in couplings], rtol)
    return {
        "x": x,
        "y": y,
        "x_equally_spaced": is_equally_spaced([v for v, _ in x], PATTERN_RTOL),
        "y_one_to_two": is_one_to_two([v for v, _ in y], PATTERN_RTOL),
    }


def is_equally_spaced(values: Sequence[float], rtol: float) -> bool:
    if len(values) != 3:
        return False
    low, mid, high = sorted(values)
    spacing = 0.5 * (high - low)
    return spacing > 0 and abs((high - mid) - (mid - low)) <= rtol * spacing


def is_one_to_two(values: Sequence[float], rtol: float) -> bool:
    if len(values) != 2:
        return False
    low, high = sorted(values)
    return low > 0 and abs(high / low - 2.0) <= rtol * 2.0


def scan_azimuth_offsets(field: MwField, step_deg: float = 1.0) -> List[float]:
    """
    Brute-force check of the azimuth convention.

    Tries every offset in [0, 120) deg and returns those for which the six
    orientations give both the three-equally-spaced x pattern and the 1:2 y
    pattern.
    """
    admitted = []
    for offset in np.arange(0.0, 120.0, step_deg):
        couplings = _project(field, basal_orientations(offset_deg=float(offset)))
        pattern = multiplet_pattern(couplings, rtol=1e-7)
        x_values = [v for v, _ in pattern["x"]]
        y_values = [v for v, _ in pattern["y"]]
        if is_equally_spaced(x_values, rtol=1e-6) and is_one_to_two(y_values, rtol=1e-6):
            admitted.append(float(offset))
    logger.debug(f"Azimuth offsets reproducing both multiplets: {admitted}")
    return admitted
