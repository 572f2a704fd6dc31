"""Exception types shared across the package."""


class GapmmError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(GapmmError):
    pass


class DomainError(GapmmError):
    """A scalar function was applied outside its domain (e.g. sqrt of a
    negative eigenvalue)."""


class IterationLimit(GapmmError):
    """The eigensolver did not converge within its sweep budget."""


class GapTooClose(GapmmError):
    """An eigenvalue lies too close to the requested split point."""


class InsideSpectrum(GapmmError):
    """The requested point/interval intersects the spectrum."""


class NotOrthonormal(GapmmError):
    pass


class IndexOutOfRange(GapmmError):
    pass


class GraphUndefined(GapmmError):
    """The projector pair is too far apart for a graph representation."""


class NotBijective(GapmmError):
    """The compressed projector overlap is numerically singular."""


class RankDeficient(GapmmError):
    """A projected subspace lost rank."""


class NotPositiveDefinite(GapmmError):
    pass


class BudgetExceeded(GapmmError):
    """A requested problem size exceeds the configured dense budget."""


class ParseError(GapmmError):
    """Malformed input file; carries line/column information."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
