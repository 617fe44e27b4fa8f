# Inspired by:
# https://github.com/pypa/pipfile/blob/master/pipfile/__about__.py


__all__ = [
    "__title__",
    "__summary__",
    "__version__",
    "__license__",
]

__title__ = "sicspin-core"
__summary__ = "Zero-field ODMR/PDMR simulation and analysis library for spin-1 defects in 4H-SiC"
__version__ = "0.1.0"

__license__ = "MPL2"
