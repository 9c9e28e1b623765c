"""Exception hierarchy shared by every bdsym module."""


class BdsymError(Exception):
    """Base class for all errors raised by bdsym."""


class DimensionMismatch(BdsymError, ValueError):
    pass


class ParseError(BdsymError, ValueError):
    """A malformed function, bijection, schedule or pair file.

    ``line`` is the 1-based line number of the offending line, or None when
    the problem concerns the file as a whole.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BadSyntax(ParseError):
    pass


class MissingRow(ParseError):
    pass


class DuplicateRow(ParseError):
    pass


class NotBijective(BdsymError, ValueError):
    pass


class LengthMismatch(BdsymError, ValueError):
    pass


class NotAnAntiOrbit(BdsymError, ValueError):
    pass


class BranchExplosion(BdsymError, RuntimeError):
    pass


class TooLarge(BdsymError, RuntimeError):
    pass


class KindMismatch(BdsymError, ValueError):
    pass


class NotAnAutomorphism(BdsymError, ValueError):
    pass
