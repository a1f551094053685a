"""Exception hierarchy shared across the package."""


class DilatorLabError(Exception):
    """Base class; user-facing errors map to CLI exit code 1."""


class NotInField(DilatorLabError):
    def __init__(self, element, order=None):
        self.element = element
        self.order = order
        super().__init__(f"{element!r} is not in the field of {order!r}")


class NotIncreasing(DilatorLabError):
    pass


class CoverageGap(DilatorLabError):
    pass


class Trivial(DilatorLabError):
    pass


class NotMonotone(DilatorLabError):
    pass


class MonotoneHolds(DilatorLabError):
    pass


class DescentExhausted(DilatorLabError):
    pass


class GridNotChain(DilatorLabError):
    pass


class ClimaxUnresolved(DilatorLabError):
    pass


class EmptyTheory(DilatorLabError):
    pass


class BadSpec(DilatorLabError):
    def __init__(self, message, path="$"):
        self.path = path
        super().__init__(f"{path}: {message}")


class IoError(DilatorLabError):
    pass


class DuplicateName(DilatorLabError):
    pass


class UnknownVerb(DilatorLabError):
    pass


class BoundsMissing(DilatorLabError):
    pass


class InvariantError(Exception):
    """An internal consistency check failed (a bug, not bad input). CLI exit code 2."""
