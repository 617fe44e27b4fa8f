import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from sicspin_charge.registry import DefectRegistry
from sicspin_core.models import ResponseMatrix
from sicspin_spin.zfs import ZfsParams, zfs_from_transitions

from .exceptions import AmbiguousPairingError

logger = logging.getLogger(__name__)

THRESHOLD_SIGMA = 5.0
# Noiseless floor relative to the largest cross response
RELATIVE_FLOOR = 0.01


@dataclass(frozen=True)
class TransitionPair:
    f_lo: float
    f_hi: float
    zfs: ZfsParams
    forward: float
    reverse: float
    label: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "f_lo_mhz": self.f_lo,
            "f_hi_mhz": self.f_hi,
            "d_mhz": self.zfs.d_mhz,
            "e_mhz": self.zfs.e_mhz,
            "response_lo_to_hi": self.forward,
            "response_hi_to_lo": self.reverse,
            "label": self.label,
        }


@dataclass(frozen=True)
class PairingResult:
    pairs: List[TransitionPair] = field(default_factory=list)
    unpaired: List[float] = field(default_factory=list)
    threshold: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "pairs": [p.to_json_dict() for p in self.pairs],
            "unpaired_mhz": list(self.unpaired),
            "threshold": self.threshold,
        }


def response_threshold(matrix: ResponseMatrix, sigma: float = THRESHOLD_SIGMA) -> float:
    off_diagonal = np.abs(matrix.values[~np.eye(len(matrix), dtype=bool)])
    largest = float(off_diagonal.max()) if off_diagonal.size else 0.0
    return max(sigma * matrix.sigma, RELATIVE_FLOOR * largest)


def label_pair(registry: DefectRegistry, f_lo: float, f_hi: float, tolerance_mhz: float) -> Optional[str]:
    """Name of the basal species whose two lines match the pair, if exactly one does."""
    names = [
        s.name
        for s in registry
        if not s.is_axial
        and abs(s.zfs.d_mhz - s.zfs.e_mhz - f_lo) <= tolerance_mhz
        and abs(s.zfs.d_mhz + s.zfs.e_mhz - f_hi) <= tolerance_mhz
    ]
    return names[0] if len(names) == 1 else None


def pair_transitions(
    matrix: ResponseMatrix,
    registry: Optional[DefectRegistry] = None,
    label_tolerance_mhz: float = 0.5,
) -> PairingResult:
    """
    Lines i and j pair when the response at j with the tone on i, and at i
    with the tone on j, both clear the threshold. The diagonal (same line)
    is ignored. A line with two or more partners is an error, not a tie.
    """
    n = len(matrix)
    if n == 0:
        return PairingResult()
    threshold = response_threshold(matrix)
    significant = np.abs(matrix.values) >= threshold
    np.fill_diagonal(significant, False)
    mutual = significant & significant.T
    if threshold == 0:
        mutual[:] = False

    conflicts = []
    for i in range(n):
        partners = np.flatnonzero(mutual[i])
        if len(partners) > 1:
            conflicts.append(
                {
                    "line_mhz": float(matrix.lines[i]),
                    "partners_mhz": [float(matrix.lines[j]) for j in partners],
                    "responses": [float(matrix.values[i, j]) for j in partners],
                }
            )
    if conflicts:
        raise AmbiguousPairingError(
            f"{len(conflicts)} line(s) respond to more than one partner", conflicts
        )

    pairs = []
    paired = set()
    for i in range(n):
        for j in np.flatnonzero(mutual[i]):
            if j <= i:
                continue
            f_lo, f_hi = float(matrix.lines[i]), float(matrix.lines[j])
            label = label_pair(registry, f_lo, f_hi, label_tolerance_mhz) if registry else None
            pairs.append(
                TransitionPair(
                    f_lo,
                    f_hi,
                    zfs_from_transitions(f_lo, f_hi),
                    forward=float(matrix.values[i, j]),
                    reverse=float(matrix.values[j, i]),
                    label=label,
                )
            )
            paired.update((i, int(j)))
    unpaired = [float(matrix.lines[i]) for i in range(n) if i not in paired]
    logger.info(f"Found {len(pairs)} pair(s), {len(unpaired)} unpaired line(s)")
    return PairingResult(pairs, unpaired, threshold)
