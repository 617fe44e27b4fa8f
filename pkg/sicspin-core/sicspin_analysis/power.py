"""
Microwave-power analysis of Rabi fits: square-root power laws and the
x-/y-driven classification of basal transitions.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import linregress

from sicspin_core.exceptions import ParameterError
from sicspin_spin.geometry import is_equally_spaced, is_one_to_two

from .rabi import RabiComponentFit

logger = logging.getLogger(__name__)

# |(v3 - v2) - (v2 - v1)| relative to the mean spacing
SPACING_TOLERANCE = 0.10
# |v2 / v1 - 2|
RATIO_TOLERANCE = 0.15
SQRT_EXPONENT = 0.5
EXPONENT_TOLERANCE = 0.05


class Verdict(str, Enum):
    X_DRIVEN = "x_driven"
    Y_DRIVEN = "y_driven"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PowerLawFit:
    """values = prefactor * power ** exponent"""

    prefactor: float
    exponent: float
    exponent_err: float

    def to_json_dict(self) -> dict:
        return {"prefactor": self.prefactor, "exponent": self.exponent, "exponent_err": self.exponent_err}


def fit_power_law(powers: Sequence[float], values: Sequence[float]) -> PowerLawFit:
    """Straight-line fit in log-log coordinates."""
    p = np.asarray(powers, dtype=float)
    v = np.asarray(values, dtype=float)
    if len(p) != len(v) or len(p) < 2:
        raise ParameterError("Need at least two matching power/value points")
    if np.any(p <= 0) or np.any(v <= 0):
        raise ParameterError("Power-law fits need positive powers and values")
    fit = linregress(np.log(p), np.log(v))
    return PowerLawFit(float(np.exp(fit.intercept)), float(fit.slope), float(fit.stderr))


def classify_pattern(frequencies: Sequence[float]) -> Verdict:
    """Single power point: three equally spaced or two 1:2 components."""
    if len(frequencies) == 3 and is_equally_spaced(frequencies, SPACING_TOLERANCE):
        return Verdict.X_DRIVEN
    # is_one_to_two compares |ratio - 2| with rtol * 2
    if len(frequencies) == 2 and is_one_to_two(frequencies, RATIO_TOLERANCE / 2.0):
        return Verdict.Y_DRIVEN
    return Verdict.UNKNOWN


@dataclass(frozen=True)
class ClassificationResult:
    verdict: Verdict
    votes: List[Verdict]
    exponents: List[PowerLawFit] = field(default_factory=list)
    reason: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "votes": [v.value for v in self.votes],
            "exponents": [e.to_json_dict() for e in self.exponents],
            "reason": self.reason,
        }


def classify_transition(powers: Sequence[float], fits: Sequence[RabiComponentFit]) -> ClassificationResult:
    """
    Majority vote of the per-power patterns, confirmed by a square-root
    power law of every component. Never guesses: anything short of that
    is ``unknown``.
    """
    if len(powers) != len(fits):
        raise ParameterError(f"Got {len(powers)} powers for {len(fits)} fits")
    if len(fits) < 3:
        raise ParameterError(f"Need at least 3 power points, got {len(fits)}")

    votes = [classify_pattern(f.frequencies) for f in fits]
    verdict, count = Counter(votes).most_common(1)[0]
    if verdict is Verdict.UNKNOWN or count * 2 <= len(votes):
        return ClassificationResult(Verdict.UNKNOWN, votes, reason="no majority pattern")

    agreeing = [i for i, v in enumerate(votes) if v is verdict]
    agreeing_powers = [powers[i] for i in agreeing]
    n_components = fits[agreeing[0]].n_components
    exponents = [
        fit_power_law(agreeing_powers, [fits[i].frequencies[k] for i in agreeing])
        for k in range(n_components)
    ]
    off = [e.exponent for e in exponents if abs(e.exponent - SQRT_EXPONENT) > EXPONENT_TOLERANCE]
    if off:
        logger.info(f"Rabi frequencies do not follow sqrt(P): exponents {off}")
        return ClassificationResult(Verdict.UNKNOWN, votes, exponents, reason="not square-root power law")
    return ClassificationResult(verdict, votes, exponents)
