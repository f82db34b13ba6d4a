"""Exception types shared across the package.

The CLI maps :class:`ValidationError` to exit code 2 and
:class:`InfeasibleError` to exit code 3.
"""


class LgzlabError(Exception):
    """Base class for all package errors."""


class ValidationError(LgzlabError):
    """Invalid input data or parameters."""


class InfeasibleError(LgzlabError):
    """Instance or precision request beyond desk-scale limits."""
