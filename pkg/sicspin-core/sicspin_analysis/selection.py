import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Optional

import numpy as np

from sicspin_core.exceptions import ParameterError
from sicspin_core.models import RabiTrace

from .exceptions import FitConvergenceError
from .rabi import RabiComponentFit, fit_rabi

logger = logging.getLogger(__name__)

# minimum AICc drop for each step up in N
AICC_MARGIN = 16.0
AMPLITUDE_SIGMAS = 3.0


def aicc(rss: float, n_points: int, n_params: int) -> float:
    """
    Small-sample corrected Akaike criterion for Gaussian residuals.

    The noise variance counts as one extra parameter.
    """
    k = n_params + 1
    if n_points - k - 1 <= 0:
        return np.inf
    rss = max(rss, np.finfo(float).tiny)
    return float(n_points * np.log(rss / n_points) + 2 * k + 2 * k * (k + 1) / (n_points - k - 1))


@dataclass(frozen=True)
class ComponentSelection:
    best_n: int
    scores: Dict[int, float]
    fits: Dict[int, RabiComponentFit]
    rejected: Dict[int, str] = field(default_factory=dict)

    @property
    def best(self) -> RabiComponentFit:
        return self.fits[self.best_n]

    def to_json_dict(self) -> dict:
        return {
            "selected_n": self.best_n,
            "scores": {str(n): (s if np.isfinite(s) else None) for n, s in sorted(self.scores.items())},
            "rejected": {str(n): reason for n, reason in sorted(self.rejected.items())},
            "fit": self.best.to_json_dict(),
        }


def inadmissible_reason(fit: RabiComponentFit) -> Optional[str]:
    """Why a fit cannot be the selected decomposition, or None."""
    if fit.degenerate:
        return "components closer than the frequency resolution"
    weak = [c.frequency for c in fit.components if c.amplitude < AMPLITUDE_SIGMAS * c.amplitude_err]
    if weak:
        return f"amplitude below {AMPLITUDE_SIGMAS:g} sigma at {', '.join(f'{f:.3f}' for f in weak)} MHz"
    return None


def select_components(trace: RabiTrace, n_max: int = 5) -> ComponentSelection:
    """
    Fits N = 1..n_max components and picks the component count.

    Counts are walked upwards; a larger N replaces the current choice only
    if its AICc is lower by at least AICC_MARGIN and its fit is admissible
    (resolved frequencies, every amplitude significant). Failed fits score
    +inf.
    """
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    scores: Dict[int, float] = {}
    fits: Dict[int, RabiComponentFit] = {}
    rejected: Dict[int, str] = {}
    for n in range(1, n_max + 1):
        try:
            fit = fit_rabi(trace, n)
        except (FitConvergenceError, ParameterError) as e:
            logger.warning(f"{n}-component fit failed: {e}")
            scores[n] = np.inf
            continue
        fits[n] = fit
        scores[n] = aicc(fit.rss, fit.n_points, fit.n_params)
        reason = inadmissible_reason(fit)
        if reason is not None:
            rejected[n] = reason
        logger.debug(f"N={n}: AICc {scores[n]:.2f}, rms {fit.residual_rms:.3g}{', ' + reason if reason else ''}")

    if not fits:
        raise FitConvergenceError(f"No component count in 1..{n_max} could be fitted")

    admissible = [n for n in sorted(fits) if n not in rejected]
    if admissible:
        best_n = admissible[0]
        for n in admissible[1:]:
            if scores[n] < scores[best_n] - AICC_MARGIN:
                best_n = n
    else:
        best_n = min(fits, key=lambda n: scores[n])
        logger.warning(f"No admissible fit in 1..{n_max}; falling back to the lowest AICc (N={best_n})")

    fits = {n: replace(f, scores=dict(scores)) for n, f in fits.items()}
    logger.info(f"Selected N={best_n} components")
    return ComponentSelection(best_n, scores, fits, rejected)
