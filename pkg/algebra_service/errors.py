"""Exceptions raised by the exact algebra engine."""


class AlgebraError(Exception):
    """Base class for every failure inside algebra_service."""


class PolynomialSyntaxError(AlgebraError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(AlgebraError):
    def __init__(self, name):
        super().__init__(f"unknown variable '{name}'")
        self.name = name


class UnboundVariable(AlgebraError):
    def __init__(self, name):
        super().__init__(f"variable '{name}' has no value at the evaluation point")
        self.name = name


class DivisionFailure(AlgebraError):
    """Exact division left a nonzero remainder."""


class SingularMatrix(AlgebraError):
    """The linear system has no unique solution."""


class ResourceLimit(AlgebraError):
    def __init__(self, budget):
        super().__init__(f"Groebner basis computation exceeded the budget of {budget} pair reductions")
        self.budget = budget


class ZeroIdeal(AlgebraError):
    """The elimination ideal is the zero ideal."""


class NonPrincipal(AlgebraError):
    def __init__(self, size):
        super().__init__(f"radical of the elimination ideal is not principal ({size} generators)")
        self.size = size


class StructureViolation(AlgebraError):
    def __init__(self, k):
        super().__init__(f"coefficient of degree {k} is not divisible by the expected power of the data sum")
        self.k = k
