"""Exception hierarchy shared by every covercalc module."""


class CoverCalcError(Exception):
    """Base class for all covercalc errors."""


class InputError(CoverCalcError, ValueError):
    """Malformed or semantically invalid input."""


class UnsupportedError(InputError):
    """The request is well formed but outside what the library computes."""


class NotAHomomorphismError(InputError):
    """Generator images do not respect the surface relation."""


class ResourceError(CoverCalcError):
    """A configured size bound (ball size, group order) was exceeded."""
