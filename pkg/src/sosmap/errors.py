"""Exception types raised across the package."""


class ParameterError(ValueError):
    """Base class for rejected model parameters."""


class InvalidOrder(ParameterError):
    pass


class InvalidTau(ParameterError):
    pass


class InitialConditionViolated(ParameterError):
    pass


class NonpositiveInitial(ParameterError):
    pass


class NotConstantField(ParameterError):
    pass


class InvalidFieldSpec(ParameterError):
    pass


class ParseError(ValueError):
    pass


class ConditionNotSatisfied(ValueError):
    """The invariant-set hypothesis on tau does not hold."""


class DenominatorUnderflow(ArithmeticError):
    pass


class SpinOutOfRange(ArithmeticError):
    pass


class EscapeError(OverflowError):
    """An iterate left the escape radius."""

    def __init__(self, value, bound):
        super().__init__(f"|x| = {abs(value):.3e} exceeds escape bound {bound:.1e}")
        self.value = value
        self.bound = bound
