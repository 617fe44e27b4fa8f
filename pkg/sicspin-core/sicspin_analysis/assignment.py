"""
End-to-end spin-system assignment from two-frequency scans.

Candidate lines come from the registry as seen by the channel, every line
is used once as the modulated tone, and each mutual pair is refined by
fitting the partner line in its own differential spectrum. Lines that
overlap in an ordinary spectrum separate there, since only the species
addressed by the fixed tone responds.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from sicspin_charge.registry import DefectRegistry
from sicspin_core.models import ResponseMatrix
from sicspin_sequence.engine import AcquisitionSettings, candidate_lines, run_two_frequency, scan_response_matrix
from sicspin_spin.zfs import zfs_from_transitions

from .pairing import PairingResult, TransitionPair, pair_transitions
from .peaks import refine_center

logger = logging.getLogger(__name__)

# Noise streams for refinement scans, disjoint from the matrix rows
_REFINE_STREAM = 1000


@dataclass(frozen=True)
class Assignment:
    lines: np.ndarray
    matrix: ResponseMatrix
    pairing: PairingResult

    def to_json_dict(self) -> dict:
        return {
            "candidate_lines_mhz": self.lines.tolist(),
            **self.pairing.to_json_dict(),
        }


def _refine_line(
    registry: DefectRegistry,
    partner_mhz: float,
    line_mhz: float,
    settings: AcquisitionSettings,
    mw_power: float,
    stream: int,
    **tone_kwargs,
) -> float:
    half_width = 2.0 * settings.linewidth_mhz
    step = settings.linewidth_mhz / 20.0
    grid = line_mhz + step * np.arange(-round(half_width / step), round(half_width / step) + 1)
    spectrum = run_two_frequency(registry, partner_mhz, grid, settings, mw_power, stream=stream, **tone_kwargs)
    return refine_center(spectrum, line_mhz, half_width).center


def refine_pair(
    registry: DefectRegistry,
    pair: TransitionPair,
    settings: AcquisitionSettings,
    mw_power: float = 1.0,
    stream: int = 0,
    **tone_kwargs,
) -> TransitionPair:
    """Re-measures both lines of a pair with the tone on the other line."""
    base = _REFINE_STREAM + 2 * stream
    f_lo = _refine_line(registry, pair.f_hi, pair.f_lo, settings, mw_power, base, **tone_kwargs)
    f_hi = _refine_line(registry, pair.f_lo, pair.f_hi, settings, mw_power, base + 1, **tone_kwargs)
    logger.debug(f"Refined pair {pair.f_lo:.2f}/{pair.f_hi:.2f} to {f_lo:.3f}/{f_hi:.3f} MHz")
    return replace(pair, f_lo=f_lo, f_hi=f_hi, zfs=zfs_from_transitions(f_lo, f_hi))


def assign_transitions(
    registry: DefectRegistry,
    settings: AcquisitionSettings = AcquisitionSettings(),
    mw_power: float = 1.0,
    refine: bool = True,
    **tone_kwargs,
) -> Assignment:
    """
    Pairs the channel's candidate lines by their two-frequency cross
    responses and derives (D, E) for every pair.
    """
    lines = candidate_lines(
        registry, settings.channel, merge_mhz=settings.linewidth_mhz, photon_energy_ev=settings.photon_energy_ev
    )
    matrix = scan_response_matrix(registry, lines, settings, mw_power, **tone_kwargs)
    pairing = pair_transitions(matrix, registry)
    if refine and pairing.pairs:
        pairing = replace(
            pairing,
            pairs=[refine_pair(registry, p, settings, mw_power, stream=k, **tone_kwargs) for k, p in enumerate(pairing.pairs)],
        )
    for p in pairing.pairs:
        logger.info(
            f"Pair {p.f_lo:.2f}/{p.f_hi:.2f} MHz -> D = {p.zfs.d_mhz:.2f}, E = {p.zfs.e_mhz:.2f} MHz"
            + (f" ({p.label})" if p.label else "")
        )
    return Assignment(lines, matrix, pairing)
