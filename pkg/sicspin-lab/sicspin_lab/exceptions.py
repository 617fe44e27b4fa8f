import logging

from sicspin_analysis.exceptions import AmbiguousPairingError, FitConvergenceError
from sicspin_core.exceptions import SicSpinException

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FIT = 2
EXIT_AMBIGUOUS = 3


def exit_code_for(exc: SicSpinException) -> int:
    """Exit status for a library error escaping a subcommand."""
    if isinstance(exc, AmbiguousPairingError):
        return EXIT_AMBIGUOUS
    if isinstance(exc, FitConvergenceError):
        return EXIT_FIT
    return EXIT_USAGE
