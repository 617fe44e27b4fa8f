from typing import List, Optional, Sequence

from sicspin_core.exceptions import SicSpinException


class AnalysisException(SicSpinException):
    pass


class FitConvergenceError(AnalysisException):
    """The optimizer hit its iteration cap; carries the best parameters found."""

    def __init__(
        self,
        message: str,
        best_params: Optional[Sequence[float]] = None,
        residual_rms: Optional[float] = None,
    ) -> None:
        super().__init__(message)
        self.best_params = list(best_params) if best_params is not None else None
        self.residual_rms = residual_rms


class AmbiguousPairingError(AnalysisException):
    """A line is claimed by more than one partner above threshold."""

    def __init__(self, message: str, conflicts: List[dict]) -> None:
        super().__init__(message)
        self.conflicts = conflicts
