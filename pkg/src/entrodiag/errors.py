"""Exception hierarchy shared by all entrodiag modules."""


class EntrodiagError(Exception):
    """Base class for all library errors."""


class InvalidInput(EntrodiagError):
    """Bad arguments or malformed data (CLI exit code 1)."""


class NumericalFailure(EntrodiagError):
    """A numerical procedure exhausted its budget (CLI exit code 2)."""


# --- invalid input -----------------------------------------------------------

class BadDimension(InvalidInput):
    pass


class BadOrder(InvalidInput):
    pass


class NotHermitian(InvalidInput):
    pass


class BadUnitary(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class BadElement(InvalidInput):
    pass


class NotSubgroup(InvalidInput):
    pass


class UnknownName(InvalidInput):
    pass


class ZeroEntry(InvalidInput):
    pass


class NotDualPair(InvalidInput):
    pass


class BoundaryOrder(InvalidInput):
    pass


class UnsupportedOrder(InvalidInput):
    pass


class BoundaryDistribution(InvalidInput):
    pass


class EmptyInput(InvalidInput):
    pass


class NoOverlap(InvalidInput):
    pass


class TooLarge(InvalidInput):
    pass


# --- numerical failures ------------------------------------------------------

class NoConvergence(NumericalFailure):
    pass


class Infeasible(NumericalFailure):
    pass


class SearchFailed(NumericalFailure):
    pass
