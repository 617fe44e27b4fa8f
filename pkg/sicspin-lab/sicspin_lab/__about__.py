# Inspired by:
# https://github.com/pypa/pipfile/blob/master/pipfile/__about__.py


__all__ = [
    "__title__",
    "__summary__",
    "__version__",
    "__license__",
]

__title__ = "sicspin-lab"
__summary__ = "Command-line front end for sicspin"
__version__ = "0.1.0"

__license__ = "MPL2"
