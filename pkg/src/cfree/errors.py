"""Exception hierarchy shared by the whole package.

Every error the library raises deliberately is one of these four, so the
command line layer can map them onto stable exit codes.
"""


class CFreeError(Exception):
    """Base class; exit_code is what the CLI returns for this failure."""

    exit_code = 1


class ParseError(CFreeError):
    """Malformed textual input (polynomials, rationals, JSON specs)."""

    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at byte %d)" % (message, position)
        super().__init__(message)
        self.position = position


class DomainError(CFreeError):
    """Input is well formed but outside the operation's domain."""

    exit_code = 3


class LimitError(CFreeError):
    """A guarded size limit was exceeded (partition or word length)."""

    exit_code = 3


class InternalError(CFreeError):
    """An internal invariant failed; indicates a bug, not bad input."""

    exit_code = 4
