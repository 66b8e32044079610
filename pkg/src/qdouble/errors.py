"""Exception hierarchy shared by all qdouble modules."""


class QDoubleError(Exception):
    """Base class for all errors raised by qdouble."""


class InputError(QDoubleError, ValueError):
    """Malformed input data (tables, labels, parameters)."""


class MathFailure(QDoubleError, ArithmeticError):
    """A numerical procedure did not converge or a verification failed."""


# groups

class NonAssociative(InputError):
    def __init__(self, a: int, b: int, c: int):
        self.triple = (a, b, c)
        super().__init__(f"table is not associative at triple {self.triple}")


class NoIdentity(InputError):
    pass


class NoInverse(InputError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} has no two-sided inverse")


class UnsupportedParams(InputError):
    pass


class ConvergenceFailure(MathFailure):
    pass


class SplittingFailure(MathFailure):
    pass


# algebras and representations

class ActionMismatch(InputError):
    pass


class NotStabilizerIrrep(InputError):
    pass


class NotCentralizerIrrep(InputError):
    pass


class LabelMismatch(InputError):
    pass


class UnknownLabel(InputError):
    pass


class RankMismatch(InputError):
    pass


class DecompositionResidual(MathFailure):
    pass


# compact groups

class BandLimitExceeded(InputError):
    pass


class NotUnimodular(InputError):
    pass
