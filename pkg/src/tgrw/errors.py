"""Exception hierarchy shared by the library and the command line front end."""


class TGRWError(Exception):
    """Base class for every error raised by tgrw."""


class InputError(TGRWError, ValueError):
    """Malformed or invalid input (unknown token, bad document, bad weight)."""


class DomainError(TGRWError, ValueError):
    """An operation was applied outside its mathematical domain."""


class ResourceError(TGRWError):
    """A size cap or budget was exceeded."""


class UnsupportedOperation(TGRWError):
    """The operation needs a certificate or a finite alphabet the caller lacks."""


class PreconditionError(TGRWError):
    """A spot-checked precondition (commutation, R-invariance) failed."""
