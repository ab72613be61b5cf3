"""Exception types raised across the package."""


class PersLocalError(ValueError):
    """Base class for all errors raised by this package."""


class NotSymmetric(PersLocalError):
    pass


class InvalidSimplex(PersLocalError):
    pass


class DimensionOutOfRange(PersLocalError):
    pass


class UnknownVertex(PersLocalError):
    pass


class IndexOutOfRange(PersLocalError):
    pass


class VertexNotBorn(PersLocalError):
    pass


class NonMonotoneScales(PersLocalError):
    pass


class NonNestedFiltration(PersLocalError):
    pass


class InvalidPartition(PersLocalError):
    pass


class NotAChainMap(PersLocalError):
    pass


class ParseError(PersLocalError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InconsistentDimension(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass
