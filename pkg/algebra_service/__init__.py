"""Exact algebra engine: polynomials over Q, Groebner bases, linear algebra, discriminants."""
from .discriminant import (
    GenericDiscriminant,
    discr_resultant,
    generic_discriminant,
    resultant,
    structured_discriminant,
    sylvester_matrix,
    tilde_coefficients,
)
from .errors import (
    AlgebraError,
    DivisionFailure,
    NonPrincipal,
    PolynomialSyntaxError,
    ResourceLimit,
    SingularMatrix,
    StructureViolation,
    UnboundVariable,
    UnknownVariable,
    ZeroIdeal,
)
from .groebner import (
    DEFAULT_PAIR_BUDGET,
    GroebnerBasis,
    MonomialOrder,
    buchberger,
    eliminate_vars,
    is_groebner_basis,
    radical_elim_generator,
    reduce_poly,
)
from .linalg import det_exact, solve_exact
from .parser import parse_poly
from .poly import (
    Poly,
    arith,
    coeff_of,
    degree,
    divmod_poly,
    eval_point,
    exquo,
    factor_multiplicity,
    gcd_poly,
    is_divisible,
    is_homogeneous,
    lcoeff,
    normalize,
    poly_pow,
    squarefree_part,
    substitute,
    total_degree,
)
