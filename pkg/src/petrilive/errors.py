"""Exception hierarchy shared by all analysis modules."""


class PetriliveError(Exception):
    """Base class for every error raised by this package."""


class InputError(PetriliveError):
    """Caller supplied something malformed (unknown id, bad dimension, ...)."""


class FiringError(PetriliveError):
    """A transition was fired in a marking that does not enable it.

    ``place`` names the first place whose token count is insufficient;
    ``index`` is the position of the failing step inside a sequence
    (``None`` for single firings).
    """

    def __init__(self, message, transition=None, place=None, index=None):
        super().__init__(message)
        self.transition = transition
        self.place = place
        self.index = index


class ParseError(PetriliveError):
    """Malformed net document. ``kind`` is a short machine-readable tag."""

    def __init__(self, message, line=None, kind="syntax"):
        self.line = line
        self.kind = kind
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class BudgetError(PetriliveError):
    """A configurable size guard was exceeded."""


class CertificateError(PetriliveError):
    """Replay of a certificate did not produce the claimed result."""

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component
