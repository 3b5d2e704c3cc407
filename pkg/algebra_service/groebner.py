"""Groebner bases by Buchberger's algorithm, elimination and radical generators.

Polynomials are carried internally as dicts of exponent tuples to integer
coefficients over one fixed universe; reductions are fraction free and the
content is removed as they go. Pairs are selected by the normal strategy
(smallest lcm first) and pruned with the Gebauer-Moeller criteria.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Tuple

from .errors import NonPrincipal, ResourceLimit, ZeroIdeal
from .poly import Poly, exquo, gcd_poly, grevlex_key, squarefree_part

logger = logging.getLogger(__name__)

DEFAULT_PAIR_BUDGET = 200_000


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or a block elimination order.

    ranking lists variables from highest to lowest; variables it omits follow
    in universe order. For block orders, `low` is the block kept lowest and
    grevlex is used inside each block.
    """

    kind: str = "grevlex"
    ranking: Tuple[str, ...] = ()
    low: Tuple[str, ...] = ()

    @classmethod
    def lex(cls, ranking=()):
        return cls("lex", tuple(ranking))

    @classmethod
    def grevlex(cls, ranking=()):
        return cls("grevlex", tuple(ranking))

    @classmethod
    def block(cls, low, ranking=()):
        return cls("block", tuple(ranking), tuple(low))

    def arrange(self, names):
        ranked = [v for v in self.ranking if v in names]
        return tuple(ranked + [v for v in names if v not in ranked])

    def key_for(self, gens):
        if self.kind == "lex":
            return tuple
        if self.kind == "grevlex":
            return grevlex_key
        if self.kind == "block":
            high = [i for i, v in enumerate(gens) if v not in self.low]
            low = [i for i, v in enumerate(gens) if v in self.low]

            def key(exps):
                return (grevlex_key(tuple(exps[i] for i in high)), grevlex_key(tuple(exps[i] for i in low)))

            return key
        raise ValueError(f"unknown monomial order '{self.kind}'")


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[Poly, ...]
    order: MonomialOrder
    reduced: bool = True

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def _negate(key):
    if isinstance(key, int):
        return -key
    return tuple(_negate(k) for k in key)


def _lcm_exps(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _mul_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _div_exps(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _remove_content(*parts):
    values = [v for part in parts for v in part.values()]
    if not values:
        return
    g = gcd(*values)
    if g > 1:
        for part in parts:
            for e in part:
                part[e] //= g


def _integer_terms(poly):
    den = lcm(*(c.denominator for c in poly.terms.values()))
    terms = {e: int(c * den) for e, c in poly.terms.items()}
    _remove_content(terms)
    return terms


class _Engine:
    """Monomial bookkeeping for one universe and one order."""

    def __init__(self, gens, order):
        self.gens = gens
        self._base = order.key_for(gens)
        self._keys = {}
        self._heap_keys = {}

    def key(self, exps):
        k = self._keys.get(exps)
        if k is None:
            k = self._keys[exps] = self._base(exps)
        return k

    def heap_key(self, exps):
        k = self._heap_keys.get(exps)
        if k is None:
            k = self._heap_keys[exps] = _negate(self.key(exps))
        return k

    def lm(self, f):
        return max(f, key=self.key)

    def spoly(self, f, g, lf, lg):
        top = _lcm_exps(lf, lg)
        cf, cg = f[lf], g[lg]
        k = gcd(cf, cg)
        a, b = cg // k, cf // k
        mf, mg = _div_exps(top, lf), _div_exps(top, lg)
        s = {_mul_exps(e, mf): a * c for e, c in f.items()}
        for e, c in g.items():
            t = _mul_exps(e, mg)
            total = s.get(t, 0) - b * c
            if total:
                s[t] = total
            else:
                s.pop(t, None)
        return s

    def reduce(self, f, basis, lms):
        """Full reduction of f; the remainder is returned up to a unit of Z[...]."""
        f = dict(f)
        heap = [(self.heap_key(e), e) for e in f]
        heapq.heapify(heap)
        rem = {}
        while heap:
            _, m = heapq.heappop(heap)
            if m not in f:
                continue
            c = f[m]
            for g, lg in zip(basis, lms):
                if _divides(lg, m):
                    break
            else:
                rem[m] = c
                del f[m]
                continue
            cg = g[lg]
            k = gcd(c, cg)
            a, b = cg // k, c // k
            if a < 0:
                a, b = -a, -b
            if a != 1:
                for e in f:
                    f[e] *= a
                for e in rem:
                    rem[e] *= a
            shift = _div_exps(m, lg)
            for e, v in g.items():
                t = _mul_exps(e, shift)
                fresh = t not in f
                total = f.get(t, 0) - b * v
                if total:
                    f[t] = total
                    if fresh:
                        heapq.heappush(heap, (self.heap_key(t), t))
                else:
                    f.pop(t, None)
            if a != 1:
                _remove_content(f, rem)
        _remove_content(rem)
        return rem

    def update(self, basis, lms, pairs, h):
        lh = self.lm(h)
        for pair in list(pairs):
            i, j = pair
            top = pairs[pair]
            if _divides(lh, top) and top != _lcm_exps(lms[i], lh) and top != _lcm_exps(lms[j], lh):
                del pairs[pair]
        groups = {}
        for i, lg in enumerate(lms):
            groups.setdefault(_lcm_exps(lg, lh), []).append(i)
        minimal = []
        for top in sorted(groups, key=self.key):
            if all(not _divides(kept, top) for kept in minimal):
                minimal.append(top)
        new = len(basis)
        for top in minimal:
            members = groups[top]
            if any(top == _mul_exps(lms[i], lh) for i in members):
                continue
            pairs[(min(members), new)] = top
        basis.append(h)
        lms.append(lh)

    def minimalize(self, basis, lms):
        ranked = sorted(range(len(basis)), key=lambda i: (self.key(lms[i]), i))
        kept = []
        for i in ranked:
            if all(not _divides(lms[k], lms[i]) for k in kept):
                kept.append(i)
        return [basis[i] for i in kept], [lms[i] for i in kept]

    def interreduce(self, basis, lms):
        reduced = []
        for i, g in enumerate(basis):
            others = basis[:i] + basis[i + 1:]
            other_lms = lms[:i] + lms[i + 1:]
            reduced.append(self.reduce(g, others, other_lms))
        return reduced

    def to_monic(self, terms):
        lead = terms[self.lm(terms)]
        return Poly._raw({e: Fraction(c, lead) for e, c in terms.items()}, self.gens)


def _universe(polys, order):
    names = []
    for p in polys:
        for v in p.gens:
            if v not in names:
                names.append(v)
    return order.arrange(names)


def buchberger(gens, order=None, budget=DEFAULT_PAIR_BUDGET):
    """Reduced Groebner basis of the ideal generated by gens under order."""
    order = order or MonomialOrder.grevlex()
    polys = [g for g in gens if not g.is_zero()]
    if not polys:
        raise ValueError("buchberger needs at least one nonzero generator")
    universe = _universe(gens, order)
    engine = _Engine(universe, order)
    basis, lms, pairs = [], [], {}
    for p in polys:
        engine.update(basis, lms, pairs, _integer_terms(p.reorder(universe)))

    processed = 0
    while pairs:
        pair = min(pairs, key=lambda p: (engine.key(pairs[p]), p))
        del pairs[pair]
        processed += 1
        if processed > budget:
            raise ResourceLimit(budget)
        i, j = pair
        s = engine.spoly(basis[i], basis[j], lms[i], lms[j])
        h = engine.reduce(s, basis, lms)
        if h:
            engine.update(basis, lms, pairs, h)

    basis, lms = engine.minimalize(basis, lms)
    reduced = [engine.to_monic(t) for t in engine.interreduce(basis, lms)]
    reduced.sort(key=lambda p: engine.key(engine.lm(p.terms)), reverse=True)
    logger.debug("buchberger: %d pairs reduced, %d generators", processed, len(reduced))
    return GroebnerBasis(tuple(reduced), order, True)


def reduce_poly(f, basis, order=None):
    """Normal form of f modulo basis, up to a nonzero rational factor."""
    order = order or MonomialOrder.grevlex()
    polys = [g for g in basis if not g.is_zero()]
    universe = _universe([f] + polys, order)
    engine = _Engine(universe, order)
    divisors = [_integer_terms(g.reorder(universe)) for g in polys]
    lms = [engine.lm(g) for g in divisors]
    if f.is_zero():
        return Poly.zero(universe)
    rem = engine.reduce(_integer_terms(f.reorder(universe)), divisors, lms)
    return Poly._raw({e: Fraction(c) for e, c in rem.items()}, universe)


def is_groebner_basis(basis, order=None):
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    order = order or MonomialOrder.grevlex()
    polys = [g for g in basis if not g.is_zero()]
    if not polys:
        return True
    universe = _universe(polys, order)
    engine = _Engine(universe, order)
    terms = [_integer_terms(g.reorder(universe)) for g in polys]
    lms = [engine.lm(t) for t in terms]
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            s = engine.spoly(terms[i], terms[j], lms[i], lms[j])
            if engine.reduce(s, terms, lms):
                return False
    return True


def eliminate_vars(gens, keep, budget=DEFAULT_PAIR_BUDGET):
    """Groebner basis of the ideal intersected with Q[keep]."""
    keep = tuple(keep)
    names = _universe(gens, MonomialOrder())
    eliminated = tuple(v for v in names if v not in keep)
    order = MonomialOrder.block(low=keep, ranking=eliminated + keep)
    basis = buchberger(gens, order, budget)
    return [g.reorder(keep) for g in basis if all(v in keep for v in g.variables())]


def _fresh_name(names):
    candidate = "aux"
    while candidate in names:
        candidate += "_"
    return candidate


def _principal_radical(polys, budget):
    """Generator of the radical of <polys> when that radical is principal.

    With G the gcd of the polys and K the ideal of cofactors, the radical is
    <sqf(G)> iff G lies in the radical of K.
    """
    common = polys[0]
    for h in polys[1:]:
        common = gcd_poly(common, h)
    if common.is_constant():
        raise NonPrincipal(len(polys))
    cofactors = [exquo(h, common) for h in polys]
    z = _fresh_name(set(common.gens))
    z_var = Poly.var(z, common.gens + (z,))
    test = buchberger(cofactors + [1 - z_var * common], MonomialOrder.grevlex(), budget)
    if not (len(test) == 1 and test.generators[0].is_constant()):
        raise NonPrincipal(len(polys))
    logger.debug("elimination ideal has %d generators but a principal radical", len(polys))
    return common


def radical_elim_generator(gens, keep, budget=DEFAULT_PAIR_BUDGET):
    """Squarefree normalized generator of the radical of <gens> ∩ Q[keep].

    Univariate results are made monic.
    """
    keep = tuple(keep)
    eliminated = eliminate_vars(gens, keep, budget)
    if not eliminated:
        raise ZeroIdeal(f"elimination ideal in Q[{', '.join(keep)}] is zero")
    if len(eliminated) == 1:
        generator = eliminated[0]
    else:
        generator = _principal_radical(eliminated, budget)
    result = squarefree_part(generator).reorder(keep)
    if len(keep) == 1 and not result.is_zero():
        result = result / result.leading_coefficient()
    return result
