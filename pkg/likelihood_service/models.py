"""Algebraic statistical models and their likelihood equation systems."""
import logging
import re
from dataclasses import dataclass, field
from typing import Optional, Tuple

from algebra_service import Poly, det_exact, parse_poly
from algebra_service.errors import PolynomialSyntaxError, UnknownVariable

from .errors import ModelError, ModelFileError, NonHomogeneousInvariant

logger = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_RESERVED = re.compile(r"[ulxv]\d+")


@dataclass(frozen=True)
class ModelSpec:
    name: str
    unknowns: Tuple[str, ...]
    invariants: Tuple[Poly, ...]
    heavy: bool = False
    description: str = ""

    @property
    def n(self):
        return len(self.unknowns) - 1

    @property
    def s(self):
        return len(self.invariants)

    @property
    def parameters(self):
        return tuple(f"u{i}" for i in range(len(self.unknowns)))

    @property
    def multipliers(self):
        return tuple(f"l{j}" for j in range(1, self.s + 2))

    @property
    def scaled_unknowns(self):
        return tuple(f"x{i}" for i in range(len(self.unknowns)))


@dataclass(frozen=True)
class LagrangeSystem:
    """Polynomial system in parameters, unknowns and multipliers.

    data_sum is the linear form in the parameters that plays the role of
    u0 + ... + un; it defaults to exactly that sum.
    """

    equations: Tuple[Poly, ...]
    parameters: Tuple[str, ...]
    unknowns: Tuple[str, ...]
    multipliers: Tuple[str, ...] = ()
    source: Optional[ModelSpec] = field(default=None, compare=False)
    data_sum: Optional[Poly] = None

    def __post_init__(self):
        gens = self.parameters + self.unknowns + self.multipliers
        object.__setattr__(self, "equations", tuple(eq.reorder(gens) for eq in self.equations))
        if self.data_sum is None:
            total = sum((Poly.var(u, self.parameters) for u in self.parameters), Poly.zero(self.parameters))
            object.__setattr__(self, "data_sum", total)

    @property
    def first_unknown(self):
        return self.unknowns[0]

    @property
    def variables(self):
        return self.unknowns + self.multipliers

    def specialize(self, values):
        """Equations with some parameters replaced by scalars or polynomials."""
        return [eq.subs(values) for eq in self.equations]


@dataclass(frozen=True)
class ScaledSystem(LagrangeSystem):
    d: int = 1
    scaling_exponents: Tuple[int, ...] = ()


def validate_model(m):
    if not m.unknowns:
        raise ModelError(f"model '{m.name}' has no unknowns")
    if len(set(m.unknowns)) != len(m.unknowns):
        raise ModelError(f"model '{m.name}' repeats an unknown")
    for name in m.unknowns:
        if not _IDENTIFIER.fullmatch(name):
            raise ModelError(f"'{name}' is not a valid variable name")
        if _RESERVED.fullmatch(name) and not name.startswith("p"):
            raise ModelError(f"unknown '{name}' collides with a generated variable name")
    if not m.invariants:
        raise ModelError(f"model '{m.name}' needs at least one invariant")
    for g in m.invariants:
        if g.is_zero():
            raise ModelError(f"model '{m.name}' has a zero invariant")
        stray = [v for v in g.variables() if v not in m.unknowns]
        if stray:
            raise UnknownVariable(stray[0])
        if not g.is_homogeneous(m.unknowns):
            raise NonHomogeneousInvariant(str(g))


def likelihood_system(m):
    """f_i = p_i (l1 + sum_j dg_j/dp_i l_{j+1}) - u_i, then the invariants, then sum p - 1."""
    validate_model(m)
    params, ps, lams = m.parameters, m.unknowns, m.multipliers
    gens = params + ps + lams
    var = {name: Poly.var(name, gens) for name in gens}
    invariants = [g.reorder(gens) for g in m.invariants]

    equations = []
    for i, p in enumerate(ps):
        bracket = var[lams[0]]
        for j, g in enumerate(invariants):
            bracket = bracket + g.diff(p) * var[lams[j + 1]]
        equations.append(var[p] * bracket - var[params[i]])
    equations.extend(invariants)
    equations.append(sum((var[p] for p in ps), Poly.zero(gens)) - 1)
    return LagrangeSystem(tuple(equations), params, ps, lams, source=m)


def scaled_system(m):
    """Numerators of the Lagrange equations under p_j -> x_j / S(u)."""
    validate_model(m)
    params, ps, xs, lams = m.parameters, m.unknowns, m.scaled_unknowns, m.multipliers
    gens = params + xs + lams
    var = {name: Poly.var(name, gens) for name in gens}
    data_sum = sum((var[u] for u in params), Poly.zero(gens))
    to_x = {p: var[x] for p, x in zip(ps, xs)}
    degrees = [g.total_degree() for g in m.invariants]
    d = max(degrees)

    equations = []
    for i, p in enumerate(ps):
        x = var[xs[i]]
        row = data_sum ** (d - 1) * x * var[lams[0]]
        for j, g in enumerate(m.invariants):
            gradient = g.diff(p).subs(to_x)
            row = row + data_sum ** (d - degrees[j]) * x * gradient * var[lams[j + 1]]
        equations.append(row - data_sum ** d * var[params[i]])
    equations.extend(g.subs(to_x) for g in m.invariants)
    equations.append(sum((var[x] for x in xs), Poly.zero(gens)) - data_sum)
    exponents = (d,) * len(ps) + tuple(degrees) + (1,)
    return ScaledSystem(tuple(equations), params, xs, lams, source=m, d=d, scaling_exponents=exponents)


def jacobian_det(system):
    """Determinant of the Jacobian of the equations in the unknowns and multipliers."""
    variables = system.variables
    if len(variables) != len(system.equations):
        raise ModelError("Jacobian needs as many equations as unknowns and multipliers")
    matrix = [[eq.diff(v) for v in variables] for eq in system.equations]
    return det_exact(matrix)


# -- model files -----------------------------------------------------------

_ASSIGN = re.compile(r"([a-z_]+)\s*=\s*(.*)")
_STRING = re.compile(r'"([^"]*)"')
_LIST = re.compile(r"\[(.*)\]")
_STRING_LIST = re.compile(r'\s*(?:"[^"]*"\s*(?:,\s*"[^"]*"\s*)*)?')
_KEYS = ("name", "unknowns", "invariants", "heavy", "description")


def dump_model(m):
    lines = [
        f'name = "{m.name}"',
        f"unknowns = [{', '.join(m.unknowns)}]",
        "invariants = [" + ", ".join(f'"{g.reorder(m.unknowns)}"' for g in m.invariants) + "]",
        f"heavy = {'true' if m.heavy else 'false'}",
    ]
    if m.description:
        lines.append(f'description = "{m.description}"')
    return "\n".join(lines) + "\n"


def load_model(text):
    """Parse the line-oriented model format; full-line '#' comments are skipped."""
    entries = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _ASSIGN.fullmatch(line)
        if not match:
            raise ModelFileError(f"expected 'key = value', found {line!r}", lineno)
        key, value = match.group(1), match.group(2).strip()
        if key not in _KEYS:
            raise ModelFileError(f"unknown key '{key}'", lineno)
        if key in entries:
            raise ModelFileError(f"duplicate key '{key}'", lineno)
        entries[key] = (value, lineno)

    for key in ("name", "unknowns", "invariants"):
        if key not in entries:
            raise ModelFileError(f"missing key '{key}'", last_line)

    def string_value(key):
        value, lineno = entries[key]
        match = _STRING.fullmatch(value)
        if not match:
            raise ModelFileError(f"'{key}' must be a quoted string", lineno)
        return match.group(1)

    name = string_value("name")
    description = string_value("description") if "description" in entries else ""

    value, lineno = entries["unknowns"]
    match = _LIST.fullmatch(value)
    if not match:
        raise ModelFileError("'unknowns' must be a bracketed list", lineno)
    unknowns = tuple(item.strip() for item in match.group(1).split(",") if item.strip())
    for item in unknowns:
        if not _IDENTIFIER.fullmatch(item):
            raise ModelFileError(f"invalid unknown name {item!r}", lineno)

    value, lineno = entries["invariants"]
    match = _LIST.fullmatch(value)
    if not match or not _STRING_LIST.fullmatch(match.group(1)):
        raise ModelFileError("'invariants' must be a bracketed list of quoted polynomials", lineno)
    invariants = []
    for k, text_poly in enumerate(_STRING.findall(match.group(1)), start=1):
        try:
            invariants.append(parse_poly(text_poly, unknowns))
        except (PolynomialSyntaxError, UnknownVariable) as exc:
            raise ModelFileError(f"invariant {k}: {exc}", lineno) from exc

    heavy = False
    if "heavy" in entries:
        value, lineno = entries["heavy"]
        if value not in ("true", "false"):
            raise ModelFileError("'heavy' must be true or false", lineno)
        heavy = value == "true"

    model = ModelSpec(name, unknowns, tuple(invariants), heavy, description)
    validate_model(model)
    return model


def read_model_file(path):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ModelError(f"cannot read model file {path}: {exc}") from exc
    logger.info("loaded model file %s", path)
    return load_model(text)
