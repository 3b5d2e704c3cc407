"""Built-in models: linear toys plus the determinantal and phylogenetic benchmarks."""
from functools import lru_cache

from algebra_service import det_exact, parse_poly

from .errors import ModelError
from .models import ModelSpec, validate_model


def _model(name, unknowns, invariants, heavy=False, description=""):
    unknowns = tuple(unknowns)
    polys = tuple(parse_poly(g, unknowns) if isinstance(g, str) else g.reorder(unknowns) for g in invariants)
    model = ModelSpec(name, unknowns, polys, heavy, description)
    validate_model(model)
    return model


def _det_invariant(rows, unknowns):
    matrix = [[parse_poly(entry, unknowns) for entry in row] for row in rows]
    return det_exact(matrix).reorder(unknowns)


def _linear_change(invariant, forms, unknowns):
    """Rewrite an invariant given in q-coordinates as a polynomial in the unknowns."""
    q_names = tuple(forms)
    q = parse_poly(invariant, q_names)
    bindings = {name: parse_poly(form, unknowns) for name, form in forms.items()}
    return q.subs(bindings).reorder(unknowns)


_JUKES_CANTOR_Q = {
    "q111": "p123 + 1/3*pdis - 1/3*p12 - 1/3*p13 - 1/3*p23",
    "q110": "p123 - 1/3*pdis + p12 - 1/3*p13 - 1/3*p23",
    "q101": "p123 - 1/3*pdis - 1/3*p12 + p13 - 1/3*p23",
    "q011": "p123 - 1/3*pdis - 1/3*p12 - 1/3*p13 + p23",
    "q000": "p123 + pdis + p12 + p13 + p23",
}

_HADAMARD_Q = {
    "q1": "p1 + p2 + p3 + p4 + p5 + p6 + p7 + p8",
    "q2": "p1 - p2 + p3 - p4 + p5 - p6 + p7 - p8",
    "q3": "p1 + p2 - p3 - p4 + p5 + p6 - p7 - p8",
    "q4": "p1 - p2 - p3 + p4 + p5 - p6 - p7 + p8",
    "q5": "p1 + p2 + p3 + p4 - p5 - p6 - p7 - p8",
    "q6": "p1 - p2 + p3 - p4 - p5 + p6 - p7 + p8",
    "q7": "p1 + p2 - p3 - p4 - p5 - p6 + p7 + p8",
    "q8": "p1 - p2 - p3 + p4 - p5 + p6 + p7 - p8",
}


def _build():
    p4 = ("p0", "p1", "p2", "p3")
    zero_diag = ("p12", "p13", "p21", "p23", "p31", "p32")
    pluecker = ("p12", "p13", "p14", "p23", "p24", "p34")
    symmetric = ("p11", "p12", "p13", "p22", "p23", "p33")
    coin = ("p0", "p1", "p2", "p3", "p4")
    square = ("p00", "p01", "p02", "p10", "p11", "p12", "p20", "p21", "p22")
    jukes = ("p123", "pdis", "p12", "p13", "p23")
    eight = tuple(f"p{k}" for k in range(1, 9))

    return (
        _model("fair_coin", ("p0", "p1"), ["p0 - p1"], description="coin with equal outcome probabilities"),
        _model("die", p4, ["p0 + 2*p1 + 3*p2 - 4*p3"], description="four-sided die with a linear constraint"),
        _model(
            "random_censoring",
            ("p0", "p1", "p2", "p12"),
            ["2*p0*p1*p2 + p1^2*p2 + p1*p2^2 - p0^2*p12 + p1*p2*p12"],
            description="random censoring of two event times",
        ),
        _model(
            "zero_diagonal_3x3",
            zero_diag,
            [_det_invariant([["0", "p12", "p13"], ["p21", "0", "p23"], ["p31", "p32", "0"]], zero_diag)],
            description="singular 3x3 matrices with zero diagonal",
        ),
        _model(
            "grassmannian_2_4",
            pluecker,
            ["p12*p34 - p13*p24 + p14*p23"],
            description="Pluecker relation of lines in projective 3-space",
        ),
        _model(
            "symmetric_3x3",
            symmetric,
            [_det_invariant([["2*p11", "p12", "p13"], ["p12", "2*p22", "p23"], ["p13", "p23", "2*p33"]], symmetric)],
            heavy=True,
            description="singular symmetric 3x3 matrices",
        ),
        _model(
            "bernoulli_3x3_coin",
            coin,
            [_det_invariant([["12*p0", "3*p1", "2*p2"], ["3*p1", "2*p2", "3*p3"], ["2*p2", "3*p3", "12*p4"]], coin)],
            heavy=True,
            description="mixture of two binomials on four tosses",
        ),
        _model(
            "3x3_matrix",
            square,
            [_det_invariant([["p00", "p01", "p02"], ["p10", "p11", "p12"], ["p20", "p21", "p22"]], square)],
            heavy=True,
            description="singular 3x3 matrices",
        ),
        _model(
            "jukes_cantor",
            jukes,
            [_linear_change("q000*q111^2 - q011*q101*q110", _JUKES_CANTOR_Q, jukes)],
            heavy=True,
            description="Jukes-Cantor model on three leaves",
        ),
        _model(
            "hadamard_two_quadrics",
            eight,
            [
                _linear_change("q2*q7 - q1*q8", _HADAMARD_Q, eight),
                _linear_change("q3*q6 - q5*q4", _HADAMARD_Q, eight),
            ],
            heavy=True,
            description="two quadrics in Fourier coordinates of an eight-state tree",
        ),
        _model(
            "p_comb",
            eight,
            [
                _linear_change("q3 - q5", _HADAMARD_Q, eight),
                _linear_change("q2 - q5", _HADAMARD_Q, eight),
                _linear_change("q4 - q6", _HADAMARD_Q, eight),
                _linear_change("q5*q7 - q1*q8", _HADAMARD_Q, eight),
            ],
            heavy=True,
            description="linear and quadratic invariants of a comb tree",
        ),
    )


@lru_cache(maxsize=None)
def builtin_models():
    models = _build()
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise ModelError("duplicate built-in model name")
    return models


def get_model(name):
    for model in builtin_models():
        if model.name == name:
            return model
    known = ", ".join(m.name for m in builtin_models())
    raise ModelError(f"unknown model '{name}' (known: {known})")
