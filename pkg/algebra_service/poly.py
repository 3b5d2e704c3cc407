"""Sparse multivariate polynomials over Q with named variables.

A polynomial is a map from exponent tuples to nonzero Fractions together with
an ordered variable universe. Values are immutable once built; every
operation returns a new polynomial.
"""
from __future__ import annotations

import heapq
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import DivisionFailure, UnboundVariable, UnknownVariable

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


def grevlex_key(exps):
    """Sort key under which larger means larger in graded reverse lex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _heap_key(exps):
    # min-heap companion of grevlex_key
    return (-sum(exps), exps[::-1])


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _format_monomial(gens, exps):
    parts = []
    for name, e in zip(gens, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


class Poly:
    __slots__ = ("gens", "terms")

    def __init__(self, terms: Mapping[Iterable[int], Scalar] | None = None, gens: Iterable[str] = ()):
        self.gens = tuple(gens)
        width = len(self.gens)
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != width:
                raise ValueError(f"exponent vector {exps} does not match universe {self.gens}")
            if coeff:
                clean[exps] = Fraction(coeff)
        self.terms: Dict[Exponents, Fraction] = clean

    @classmethod
    def _raw(cls, terms, gens):
        poly = cls.__new__(cls)
        poly.gens = gens
        poly.terms = terms
        return poly

    @classmethod
    def var(cls, name, gens=None):
        gens = tuple(gens) if gens is not None else (name,)
        if name not in gens:
            raise UnknownVariable(name)
        exps = tuple(1 if v == name else 0 for v in gens)
        return cls._raw({exps: Fraction(1)}, gens)

    @classmethod
    def const(cls, value, gens=()):
        gens = tuple(gens)
        value = Fraction(value)
        if not value:
            return cls._raw({}, gens)
        return cls._raw({(0,) * len(gens): value}, gens)

    @classmethod
    def zero(cls, gens=()):
        return cls._raw({}, tuple(gens))

    # -- structure -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return next(iter(self.terms.values()), Fraction(0))

    def variables(self):
        """Variables that occur with a positive exponent, in universe order."""
        used = [False] * len(self.gens)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, flag in zip(self.gens, used) if flag)

    def reorder(self, gens):
        """Re-embed into another universe containing every occurring variable."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        index = {v: i for i, v in enumerate(gens)}
        moves = [(i, index.get(v)) for i, v in enumerate(self.gens)]
        width = len(gens)
        out = {}
        for exps, coeff in self.terms.items():
            new = [0] * width
            for i, j in moves:
                e = exps[i]
                if e:
                    if j is None:
                        raise UnknownVariable(self.gens[i])
                    new[j] = e
            out[tuple(new)] = coeff
        return Poly._raw(out, gens)

    def leading_monomial(self):
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def degree(self, v):
        if not self.terms:
            return -1
        if v not in self.gens:
            return 0
        i = self.gens.index(v)
        return max(exps[i] for exps in self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(exps) for exps in self.terms)

    def is_homogeneous(self, variables=None):
        names = self.gens if variables is None else tuple(variables)
        idx = [self.gens.index(v) for v in names if v in self.gens]
        degrees = {sum(exps[i] for i in idx) for exps in self.terms}
        return len(degrees) <= 1

    def coefficients_in(self, v):
        """Map k -> coefficient of v^k, each in the same universe."""
        if v not in self.gens:
            return {0: self} if self.terms else {}
        i = self.gens.index(v)
        buckets = {}
        for exps, coeff in self.terms.items():
            k = exps[i]
            buckets.setdefault(k, {})[exps[:i] + (0,) + exps[i + 1:]] = coeff
        return {k: Poly._raw(t, self.gens) for k, t in buckets.items()}

    def coeff(self, v, k):
        return self.coefficients_in(v).get(k, Poly.zero(self.gens))

    def lcoeff(self, v):
        if not self.terms:
            raise ValueError("leading coefficient of the zero polynomial")
        return self.coeff(v, self.degree(v))

    def diff(self, v):
        if v not in self.gens:
            return Poly.zero(self.gens)
        i = self.gens.index(v)
        out = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e:
                out[exps[:i] + (e - 1,) + exps[i + 1:]] = coeff * e
        return Poly._raw(out, self.gens)

    # -- substitution and evaluation -------------------------------------

    def subs(self, bindings):
        """Simultaneous substitution of polynomials or scalars for variables.

        Bound variables leave the universe; variables brought in by the bound
        values are appended after the remaining ones.
        """
        bound = {v: val for v, val in bindings.items() if v in self.gens}
        if not bound:
            return self
        keep = [i for i, v in enumerate(self.gens) if v not in bound]
        slots = [(i, bound[v]) for i, v in enumerate(self.gens) if v in bound]
        rest = tuple(self.gens[i] for i in keep)

        if all(not isinstance(val, Poly) for _, val in slots):
            cache = {}
            out = {}
            for exps, coeff in self.terms.items():
                value = coeff
                for i, val in slots:
                    e = exps[i]
                    if e:
                        key = (i, e)
                        if key not in cache:
                            cache[key] = Fraction(val) ** e
                        value *= cache[key]
                mono = tuple(exps[i] for i in keep)
                total = out.get(mono, 0) + value
                if total:
                    out[mono] = total
                else:
                    out.pop(mono, None)
            return Poly._raw(out, rest)

        extra = []
        for _, val in slots:
            if isinstance(val, Poly):
                for name in val.gens:
                    if name not in rest and name not in extra:
                        extra.append(name)
        gens = rest + tuple(extra)
        width = len(gens)
        values = []
        for i, val in slots:
            if isinstance(val, Poly):
                values.append((i, val.reorder(gens)))
            else:
                values.append((i, Poly.const(val, gens)))
        cache = {}
        out = {}
        for exps, coeff in self.terms.items():
            product = Poly.const(coeff, gens)
            for i, val in values:
                e = exps[i]
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = val ** e
                    product = product * cache[key]
            shift = tuple(exps[i] for i in keep) + (0,) * (width - len(keep))
            for mono, c in product.terms.items():
                mono = _add_exps(mono, shift)
                total = out.get(mono, 0) + c
                if total:
                    out[mono] = total
                else:
                    out.pop(mono, None)
        return Poly._raw(out, gens)

    def evaluate(self, point) -> Fraction:
        cache = {}
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            value = coeff
            for name, e in zip(self.gens, exps):
                if not e:
                    continue
                key = (name, e)
                if key not in cache:
                    if name not in point:
                        raise UnboundVariable(name)
                    cache[key] = Fraction(point[name]) ** e
                value *= cache[key]
            total += value
        return total

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return _unify(self, other)
        if isinstance(other, (int, Fraction)):
            return self, Poly.const(other, self.gens)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        out = dict(a.terms)
        for exps, coeff in b.terms.items():
            total = out.get(exps, 0) + coeff
            if total:
                out[exps] = total
            else:
                out.pop(exps, None)
        return Poly._raw(out, a.gens)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.gens)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero(self.gens)
            return Poly._raw({e: c * other for e, c in self.terms.items()}, self.gens)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = _unify(self, other)
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                exps = _add_exps(e1, e2)
                total = out.get(exps, 0) + c1 * c2
                if total:
                    out[exps] = total
                else:
                    out.pop(exps, None)
        return Poly._raw(out, a.gens)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(1, self.gens)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = _unify(self, other)
        return a.terms == b.terms

    def __hash__(self):
        named = []
        for exps, coeff in self.terms.items():
            mono = tuple((v, e) for v, e in zip(self.gens, exps) if e)
            named.append((tuple(sorted(mono)), coeff))
        return hash(frozenset(named))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, key=grevlex_key, reverse=True):
            coeff = self.terms[exps]
            mono = _format_monomial(self.gens, exps)
            magnitude = abs(coeff)
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            if not pieces:
                pieces.append(("-" if coeff < 0 else "") + body)
            else:
                pieces.append((" - " if coeff < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Poly({str(self)!r}, gens={self.gens})"


def _unify(a, b):
    if a.gens == b.gens:
        return a, b
    extra = tuple(v for v in b.gens if v not in a.gens)
    gens = a.gens + extra
    return a.reorder(gens), b.reorder(gens)


def as_poly(value, gens=()):
    if isinstance(value, Poly):
        return value
    return Poly.const(value, gens)


# -- module level API ------------------------------------------------------


def arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation '{op}'")


def poly_pow(a, k):
    return a ** k


def substitute(p, bindings):
    return p.subs(bindings)


def degree(p, v):
    return p.degree(v)


def total_degree(p):
    return p.total_degree()


def is_homogeneous(p, variables):
    return p.is_homogeneous(variables)


def coeff_of(p, v, k):
    return p.coeff(v, k)


def lcoeff(p, v):
    return p.lcoeff(v)


def eval_point(p, point):
    return p.evaluate(point)


def _reduce_by(a, b, exact):
    """Division of a by b under grevlex, yielding (quotient, remainder)."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    a, b = _unify(a, b)
    if b.is_constant():
        return a * (Fraction(1) / b.constant_value()), Poly.zero(a.gens)
    lead = b.leading_monomial()
    lead_coeff = b.terms[lead]
    rem = dict(a.terms)
    heap = [(_heap_key(e), e) for e in rem]
    heapq.heapify(heap)
    quotient = {}
    remainder = {}
    while heap:
        _, m = heapq.heappop(heap)
        if m not in rem:
            continue
        c = rem[m]
        if not _divides(lead, m):
            if exact:
                raise DivisionFailure(f"{b} does not divide the dividend")
            remainder[m] = c
            del rem[m]
            continue
        shift = tuple(x - y for x, y in zip(m, lead))
        q = c / lead_coeff
        quotient[shift] = q
        for exps, bc in b.terms.items():
            t = _add_exps(exps, shift)
            fresh = t not in rem
            total = rem.get(t, 0) - q * bc
            if total:
                rem[t] = total
                if fresh:
                    heapq.heappush(heap, (_heap_key(t), t))
            else:
                rem.pop(t, None)
    return Poly._raw(quotient, a.gens), Poly._raw(remainder, a.gens)


def divmod_poly(a, b):
    return _reduce_by(a, b, exact=False)


def exquo(a, b):
    """Exact quotient a / b; raises DivisionFailure on a nonzero remainder."""
    return _reduce_by(a, b, exact=True)[0]


def is_divisible(a, b):
    try:
        exquo(a, b)
    except DivisionFailure:
        return False
    return True


def normalize(p):
    """Primitive over Z with positive leading coefficient under grevlex."""
    if not p.terms:
        return p
    coeffs = list(p.terms.values())
    den = lcm(*(c.denominator for c in coeffs))
    num = gcd(*(int(c * den) for c in coeffs))
    scale = Fraction(den, num)
    if p.leading_coefficient() < 0:
        scale = -scale
    return p * scale


def content_in(p, v):
    """Gcd of the coefficients of p viewed as a polynomial in v."""
    coeffs = [c for _, c in sorted(p.coefficients_in(v).items())]
    if not coeffs:
        return Poly.zero(p.gens)
    content = normalize(coeffs[0])
    for c in coeffs[1:]:
        if content.is_constant():
            break
        content = gcd_poly(content, c)
    if content.is_constant():
        return Poly.const(1, p.gens)
    return content.reorder(p.gens)


def primitive_part_in(p, v):
    return exquo(p, content_in(p, v))


def _prem(a, b, v):
    db = b.degree(v)
    lead = b.lcoeff(v)
    x = Poly.var(v, a.gens)
    r = a
    while r.terms and r.degree(v) >= db:
        r = r * lead - r.lcoeff(v) * x ** (r.degree(v) - db) * b
    return r


def _gcd_nonzero(a, b):
    if a.is_constant() or b.is_constant():
        return Poly.const(1, a.gens)
    occurring = [v for v in a.gens if a.degree(v) > 0 or b.degree(v) > 0]
    x = min(occurring, key=lambda v: max(a.degree(v), b.degree(v)))
    ca = content_in(a, x)
    cb = content_in(b, x)
    c = gcd_poly(ca, cb)
    pa = exquo(a, ca)
    pb = exquo(b, cb)
    if pa.degree(x) < pb.degree(x):
        pa, pb = pb, pa
    while pb.degree(x) > 0:
        r = _prem(pa, pb, x)
        if r.is_zero():
            break
        if r.degree(x) == 0:
            pb = Poly.const(1, a.gens)
            break
        pa, pb = pb, primitive_part_in(r, x)
    if pb.degree(x) <= 0:
        pb = Poly.const(1, a.gens)
    return c * pb


def gcd_poly(a, b):
    """Greatest common divisor by primitive pseudo-remainder sequences.

    The main variable at every level is the one of lowest max degree. The
    result is normalized; gcd(a, 0) is normalized a.
    """
    a, b = _unify(a, b)
    if a.is_zero():
        return normalize(b)
    if b.is_zero():
        return normalize(a)
    return normalize(_gcd_nonzero(a, b))


def squarefree_part(p):
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    g = p
    for v in p.variables():
        g = gcd_poly(g, p.diff(v))
        if g.is_constant():
            break
    return normalize(exquo(p, g))


def factor_multiplicity(p, f):
    """Largest k with f^k | p, and the cofactor p / f^k."""
    if f.is_constant():
        raise ValueError("multiplicity of a constant factor")
    if p.is_zero():
        raise ValueError("multiplicity inside the zero polynomial")
    k = 0
    cofactor = p
    while True:
        try:
            cofactor_next = exquo(cofactor, f)
        except DivisionFailure:
            return k, cofactor
        k += 1
        cofactor = cofactor_next
