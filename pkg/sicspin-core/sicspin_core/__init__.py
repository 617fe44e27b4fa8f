# ignore: F401

from . import __about__

from . import dirs
from . import config
from . import log
from . import exceptions

from . import models
from .models import Channel, Transition, Spectrum, RabiTrace, ResponseMatrix

from . import schema

__all__ = [
    "__about__",
    # Classes
    "Channel",
    "Transition",
    "Spectrum",
    "RabiTrace",
    "ResponseMatrix",
    # Modules
    "dirs",
    "config",
    "log",
    "exceptions",
    "models",
    "schema",
]
