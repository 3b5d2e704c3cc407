"""Resultants and discriminants of polynomials in one distinguished variable."""
import logging
import threading
from dataclasses import dataclass

from .errors import DivisionFailure, StructureViolation
from .linalg import det_exact
from .poly import Poly, exquo

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenericDiscriminant:
    N: int
    poly: Poly

    @property
    def symbols(self):
        return tuple(f"c{k}" for k in range(self.N + 1))


def sylvester_matrix(p, q, v):
    m, n = p.degree(v), q.degree(v)
    if m < 0 or n < 0:
        raise ValueError("Sylvester matrix of a zero polynomial")
    size = m + n
    zero = Poly.zero(p.gens)
    p_row = [p.coeff(v, k) for k in range(m, -1, -1)]
    q_row = [q.coeff(v, k) for k in range(n, -1, -1)]
    rows = []
    for shift in range(n):
        rows.append([zero] * shift + p_row + [zero] * (size - m - 1 - shift))
    for shift in range(m):
        rows.append([zero] * shift + q_row + [zero] * (size - n - 1 - shift))
    return rows


def resultant(p, q, v):
    if p.degree(v) + q.degree(v) == 0:
        return Poly.const(1, p.gens)
    return det_exact(sylvester_matrix(p, q, v))


def discr_resultant(p, v):
    """(-1)^(N(N-1)/2) Res_v(p, dp/dv) / lcoeff(p, v)."""
    n = p.degree(v)
    if n < 1:
        raise ValueError(f"discriminant needs positive degree in {v}")
    res = resultant(p, p.diff(v), v)
    try:
        value = exquo(res, p.lcoeff(v))
    except DivisionFailure as exc:
        raise DivisionFailure("leading coefficient does not divide the resultant") from exc
    if (n * (n - 1) // 2) % 2:
        value = -value
    return value.reorder(tuple(name for name in p.gens if name != v))


def _weights_hold(n, poly):
    for exps in poly.terms:
        if sum(exps) != 2 * n - 2:
            return False
        if sum((n - k) * e for k, e in enumerate(exps)) != n * (n - 1):
            return False
    return True


_generic_cache = {}
_generic_lock = threading.Lock()


def generic_discriminant(n):
    """D_N in the symbols c0..cN, computed once per process."""
    if n < 1:
        raise ValueError("generic discriminant needs N >= 1")
    cached = _generic_cache.get(n)
    if cached is not None:
        return cached
    symbols = tuple(f"c{k}" for k in range(n + 1))
    gens = symbols + ("z",)
    z = Poly.var("z", gens)
    p = sum((Poly.var(c, gens) * z ** k for k, c in enumerate(symbols)), Poly.zero(gens))
    value = discr_resultant(p, "z").reorder(symbols)
    if not _weights_hold(n, value):
        raise ArithmeticError(f"generic discriminant of degree {n} fails the weight identities")
    with _generic_lock:
        cached = _generic_cache.setdefault(n, GenericDiscriminant(n, value))
    logger.debug("generic discriminant D_%d has %d terms", n, len(value.terms))
    return cached


def structure_excess(sc):
    return sc.t - sc.ell - sc.delta


def s_exponent(sc):
    """Power of the data sum in front of D_N(~B)."""
    return (sc.N - 2 * structure_excess(sc)) * (sc.N - 1)


def _default_data_sum(e_f, v):
    names = tuple(name for name in e_f.gens if name != v)
    return sum((Poly.var(name, names) for name in names), Poly.zero(names))


def tilde_coefficients(e_f, sc, data_sum=None, v=None):
    """~B_0..~B_N with ~B_k * S^(k - e) = coeff(E_f, v^k), e = t - l - delta.

    v defaults to the last variable of E_f, where the eliminants keep the
    first unknown. data_sum defaults to the sum of every other variable.
    """
    v = v or e_f.gens[-1]
    if data_sum is None:
        data_sum = _default_data_sum(e_f, v)
    if e_f.degree(v) != sc.N:
        raise ValueError(f"degree of E_f in {v} is {e_f.degree(v)}, expected {sc.N}")
    excess = structure_excess(sc)
    tilde = []
    for k in range(sc.N + 1):
        c = e_f.coeff(v, k)
        if k <= excess:
            tilde.append(c * data_sum ** (excess - k))
        else:
            try:
                tilde.append(exquo(c, data_sum ** (k - excess)))
            except DivisionFailure as exc:
                raise StructureViolation(k) from exc
    return tilde


def structured_discriminant(e_f, sc, data_sum=None, v=None):
    """S^((N - 2e)(N - 1)) D_N(~B_0, ..., ~B_N)."""
    v = v or e_f.gens[-1]
    if data_sum is None:
        data_sum = _default_data_sum(e_f, v)
    tilde = tilde_coefficients(e_f, sc, data_sum, v)
    generic = generic_discriminant(sc.N)
    names = tuple(name for name in e_f.gens if name != v)
    tilde = [b.reorder(names) if not b.is_zero() else Poly.zero(names) for b in tilde]
    powers = {}
    total = Poly.zero(names)
    for exps, coeff in generic.poly.terms.items():
        term = Poly.const(coeff, names)
        for k, e in enumerate(exps):
            if e:
                if (k, e) not in powers:
                    powers[(k, e)] = tilde[k] ** e
                term = term * powers[(k, e)]
        total = total + term
    exponent = s_exponent(sc)
    if exponent >= 0:
        return total * data_sum.reorder(names) ** exponent
    try:
        return exquo(total, data_sum.reorder(names) ** -exponent)
    except DivisionFailure as exc:
        raise StructureViolation(sc.N) from exc
