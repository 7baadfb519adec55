"""Exception hierarchy shared by every cmvf module."""


class CmvfError(Exception):
    """Base class for all errors raised by the library."""


# algebra
class MixedFieldError(CmvfError):
    pass


class ZeroInverse(CmvfError, ZeroDivisionError):
    pass


class PivotZero(CmvfError):
    pass


# lefschetz
class GradingViolation(CmvfError):
    def __init__(self, x, y, message=None):
        self.x, self.y = x, y
        super().__init__(message or f"kappa({x}, {y}) != 0 but dim {x} != dim {y} + 1")


class SquareNotZero(CmvfError):
    def __init__(self, x, y, value):
        self.x, self.y, self.value = x, y, value
        super().__init__(f"sum_z kappa({x}, z) kappa(z, {y}) = {value} != 0")


class UnknownCell(CmvfError, KeyError):
    pass


class NotLocallyClosed(CmvfError):
    pass


class DuplicateSimplex(CmvfError):
    pass


class OutOfGrid(CmvfError):
    pass


class DegenerateInput(CmvfError):
    pass


# mvf
class NotPartition(CmvfError):
    pass


# dynamics / conley
class NotAnInterval(CmvfError):
    pass


class NoEssentialSolution(CmvfError):
    pass


class NotIsolatedInvariant(CmvfError):
    pass


class ReductionStalled(CmvfError):
    pass


# discretize
class VFSyntaxError(CmvfError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownVariable(CmvfError):
    pass


class ArityMismatch(CmvfError):
    pass


class EvalDomain(CmvfError, ArithmeticError):
    pass


class DegenerateGeometry(CmvfError):
    pass


# cli / plotting
class ConfigError(CmvfError):
    pass


class UnsupportedDimension(CmvfError):
    pass
