"""Exception types raised across the package."""


class PfaffEllError(Exception):
    """Base class for all package errors."""


# numerics
class NoSignChange(PfaffEllError, ValueError):
    pass


class MaxIterations(PfaffEllError, RuntimeError):
    pass


class EvaluationFailure(PfaffEllError, ArithmeticError):
    pass


# theta / elliptic
class UnsupportedOrder(PfaffEllError, ValueError):
    pass


class PoleOrZero(PfaffEllError, ArithmeticError):
    """Argument too close to a lattice zero of theta_1 or theta_4."""


# curve solving
class DomainError(PfaffEllError, ValueError):
    pass


class InconsistentData(PfaffEllError, ValueError):
    pass


# series
class ZeroLeadingCoefficient(PfaffEllError, ZeroDivisionError):
    pass


class OrderMismatch(PfaffEllError, ValueError):
    pass


class PivotFailure(PfaffEllError, ArithmeticError):
    pass


# tau models and equations
class IndexOutOfRange(PfaffEllError, IndexError):
    pass


class VariantMismatch(PfaffEllError, ValueError):
    pass


class SingularArgs(PfaffEllError, ZeroDivisionError):
    pass


class NoSolutionFound(PfaffEllError, RuntimeError):
    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class OddTimeDependence(PfaffEllError, ValueError):
    pass


class ModelFormatError(PfaffEllError, ValueError):
    """Malformed or asymmetric model file."""
