import logging
from typing import Callable

import numpy as np
from scipy.optimize import OptimizeResult, least_squares

logger = logging.getLogger(__name__)

MAX_NFEV = 200
XTOL = 1e-10


def fit_lm(
    residuals: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    p0: np.ndarray,
) -> OptimizeResult:
    """Levenberg-Marquardt with the shared iteration cap and step tolerance."""
    return least_squares(residuals, p0, jac=jacobian, method="lm", max_nfev=MAX_NFEV, xtol=XTOL)


def converged(result: OptimizeResult) -> bool:
    # status 0 means the evaluation cap was hit
    return bool(result.status > 0)


def rms(result: OptimizeResult) -> float:
    return float(np.sqrt(np.mean(result.fun**2)))


def standard_errors(jac: np.ndarray, residuals: np.ndarray) -> np.ndarray:
    """Parameter standard errors from the Jacobian at the optimum."""
    n_params = jac.shape[1]
    dof = max(len(residuals) - n_params, 1)
    variance = float(residuals @ residuals) / dof
    covariance = np.linalg.pinv(jac.T @ jac) * variance
    return np.sqrt(np.clip(np.diag(covariance), 0.0, None))
