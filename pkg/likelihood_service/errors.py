"""Model, configuration and pipeline errors, plus the CLI exit-code map."""
from algebra_service.errors import (
    AlgebraError,
    NonPrincipal,
    PolynomialSyntaxError,
    ResourceLimit,
    SingularMatrix,
    UnknownVariable,
    ZeroIdeal,
)


class LikelihoodError(Exception):
    """Base class for failures in likelihood_service."""


class ModelError(LikelihoodError):
    pass


class ModelFileError(ModelError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NonHomogeneousInvariant(ModelError):
    def __init__(self, invariant):
        super().__init__(f"invariant is not homogeneous in the unknowns: {invariant}")
        self.invariant = invariant


class HeavyModelRefused(ModelError):
    def __init__(self, name):
        super().__init__(f"model '{name}' is marked heavy; pass --allow-heavy to run it")
        self.name = name


class ConfigError(LikelihoodError):
    pass


class DegenerateSample(LikelihoodError):
    """A random specialization landed on a degenerate locus; resample."""


class DegreeDrop(DegenerateSample):
    pass


class UnexpectedMultiplicity(DegenerateSample):
    pass


class InconsistentDegrees(DegenerateSample):
    pass


class InconsistentStructure(DegenerateSample):
    pass


class VerificationFailed(DegenerateSample):
    pass


class NotGeneralZeroDimensional(LikelihoodError):
    pass


class AssumptionA1Violated(LikelihoodError):
    pass


# errors the retry policy answers with fresh sample points
RETRYABLE = (DegenerateSample, SingularMatrix)

EXIT_CODES = (
    (ModelError, 2),
    (ConfigError, 2),
    (PolynomialSyntaxError, 2),
    (UnknownVariable, 2),
    (ResourceLimit, 3),
    (VerificationFailed, 4),
    (DegenerateSample, 4),
    (SingularMatrix, 4),
    (NotGeneralZeroDimensional, 4),
    (AssumptionA1Violated, 4),
    (NonPrincipal, 5),
    (ZeroIdeal, 5),
    (AlgebraError, 1),
    (LikelihoodError, 1),
)


def exit_code_for(exc):
    for kind, code in EXIT_CODES:
        if isinstance(exc, kind):
            return code
    return 1
