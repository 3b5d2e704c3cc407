"""Probabilistic interpolation of the radical eliminant E_f.

The pipeline runs in stages: degree profile, leading coefficient, the
remaining coefficients, then one verification sample. Each stage draws fresh
points from a seeded SampleStream and is retried when a point turns out to
be degenerate. Sample eliminations inside a stage are independent and may be
fanned out to worker threads; their results are joined by index.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Tuple

from algebra_service import (
    Poly,
    exquo,
    factor_multiplicity,
    is_divisible,
    radical_elim_generator,
    solve_exact,
)
from algebra_service.errors import DivisionFailure
from algebra_service.poly import grevlex_key

from .config import PipelineSettings
from .errors import (
    RETRYABLE,
    AssumptionA1Violated,
    DegenerateSample,
    DegreeDrop,
    InconsistentDegrees,
    InconsistentStructure,
    NotGeneralZeroDimensional,
    UnexpectedMultiplicity,
    VerificationFailed,
)
from .models import LagrangeSystem, likelihood_system, scaled_system
from .sampling import SampleStream
from .worker import assign_samples_to_workers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeProfile:
    N: int
    alpha: Tuple[int, ...]
    L: Tuple[int, ...]
    Omega: Tuple[Tuple[int, ...], ...]
    lc_total_degree: Optional[int] = None

    def as_dict(self):
        return {
            "N": self.N,
            "alpha": list(self.alpha),
            "L": list(self.L),
            "Omega": [list(row) for row in self.Omega],
            "lc_total_degree": self.lc_total_degree,
        }


@dataclass(frozen=True)
class StructureConstants:
    N: int
    t: int
    ell: int
    delta: int
    C_spec: Optional[Poly] = field(default=None, compare=False)

    def as_dict(self):
        return {"N": self.N, "t": self.t, "l": self.ell, "delta": self.delta}


@dataclass(frozen=True)
class EliminationResult:
    E_f: Poly
    profile: DegreeProfile
    seed: Optional[int]
    samples_used: int
    verified: bool
    method: str = "interpolate"


@dataclass(frozen=True)
class CostEstimate:
    lc_slots: Tuple[int, ...]
    coefficient_slots: Tuple[int, ...]
    unstructured_slots: Tuple[int, ...]
    sample_ms: Optional[float] = None

    @property
    def lc_samples(self):
        return max(self.lc_slots, default=0)

    @property
    def coefficient_samples(self):
        return max(self.coefficient_slots, default=0)

    @property
    def unstructured_samples(self):
        return max(self.unstructured_slots, default=0)

    def as_dict(self):
        return {
            "lc_slots": list(self.lc_slots),
            "coefficient_slots": list(self.coefficient_slots),
            "unstructured_slots": list(self.unstructured_slots),
            "lc_samples": self.lc_samples,
            "coefficient_samples": self.coefficient_samples,
            "unstructured_samples": self.unstructured_samples,
            "sample_ms": self.sample_ms,
        }


def enumerate_monomials(total, bounds):
    """Exponent vectors of the given total degree under per-variable bounds, grevlex-descending."""
    if not bounds:
        return [()] if total == 0 else []
    out = []

    def extend(i, remaining, prefix):
        if i == len(bounds) - 1:
            if remaining <= bounds[i]:
                out.append(prefix + (remaining,))
            return
        for e in range(min(remaining, bounds[i]), -1, -1):
            extend(i + 1, remaining - e, prefix + (e,))

    extend(0, total, ())
    out.sort(key=grevlex_key, reverse=True)
    return out


def _monomial_value(exps, values):
    value = 1
    for b, e in zip(values, exps):
        if e:
            value *= b ** e
    return value


def _monomial_poly(exps, names, gens):
    full = tuple(exps[names.index(v)] if v in names else 0 for v in gens)
    return Poly({full: 1}, gens)


def ensure_assumption_a1(profile):
    """L(1) must equal the total degree of the leading coefficient."""
    if profile.lc_total_degree is None:
        return True
    return profile.L[0] == profile.lc_total_degree


def normalize_a2(e_f, parameters, p0):
    """Scale E_f so the u0^D p0^N coefficient is 1, D the total degree of lcoeff."""
    gens = tuple(parameters) + (p0,)
    e_f = e_f.reorder(gens)
    lc = e_f.lcoeff(p0).reorder(parameters)
    top = lc.coeff(parameters[0], lc.total_degree())
    if not top.is_zero() and top.is_constant():
        scale = top.constant_value()
    else:
        scale = lc.leading_coefficient()
    return e_f / scale


def profile_from_generator(e_f, system):
    """Read the degree profile off a known eliminant."""
    p0, params = system.first_unknown, system.parameters
    n_deg = e_f.degree(p0)
    if n_deg < 1:
        raise NotGeneralZeroDimensional(f"eliminant has degree {n_deg} in {p0}")
    data_sum = system.data_sum.reorder(e_f.gens)
    coeffs = [e_f.coeff(p0, i) for i in range(n_deg + 1)]
    alpha = tuple(factor_multiplicity(c, data_sum)[0] if not c.is_zero() else 0 for c in coeffs)
    return DegreeProfile(
        N=n_deg,
        alpha=alpha,
        L=tuple(coeffs[n_deg].degree(u) for u in params),
        Omega=tuple(tuple(coeffs[i].degree(u) for u in params) for i in range(n_deg)),
        lc_total_degree=coeffs[n_deg].total_degree(),
    )


class InterpolationPipeline:
    """Owns one system, one sample stream and the running sample count."""

    def __init__(self, system: LagrangeSystem, stream: SampleStream, settings: Optional[PipelineSettings] = None):
        self.system = system
        self.stream = stream
        self.settings = settings or PipelineSettings()
        self.samples = 0
        self.N = None

    @property
    def parameters(self):
        return self.system.parameters

    @property
    def p0(self):
        return self.system.first_unknown

    def _eliminate(self, equations, keep):
        return radical_elim_generator(equations, keep, self.settings.gb_budget)

    def _fan_out(self, task, points):
        results = assign_samples_to_workers(task, points, self.settings.workers)
        self.samples += len(points)
        return results

    def _retry(self, stage, action):
        attempts = self.settings.retries + 1
        for attempt in range(1, attempts + 1):
            try:
                return action()
            except RETRYABLE as exc:
                if attempt == attempts:
                    logger.error("%s: giving up after %d attempts: %s", stage, attempts, exc)
                    raise
                logger.warning("%s: degenerate sample (%s), resampling (%d/%d)", stage, exc, attempt, attempts - 1)

    # -- single-sample eliminations ---------------------------------------

    def intersect_for_lc(self, b, alpha_n):
        """Monic R_N(u0, b) from the bivariate eliminant with u1..un fixed at b."""
        u0, p0 = self.parameters[0], self.p0
        binding = dict(zip(self.parameters[1:], b))
        g = self._eliminate(self.system.specialize(binding), (u0, p0))
        if self.N is not None and g.degree(p0) != self.N:
            raise DegreeDrop(f"degree {g.degree(p0)} in {p0} at {b}, expected {self.N}")
        s_spec = self.system.data_sum.subs(binding).reorder((u0, p0))
        try:
            q = exquo(g.lcoeff(p0), s_spec ** alpha_n)
        except DivisionFailure:
            raise UnexpectedMultiplicity(f"data sum to the power {alpha_n} does not divide the leading coefficient at {b}") from None
        q = q.reorder((u0,))
        return q / q.lcoeff(u0).constant_value()

    def intersect(self, b):
        """Monic eliminant in Q[p0] with every parameter fixed at b."""
        binding = dict(zip(self.parameters, b))
        g = self._eliminate(self.system.specialize(binding), (self.p0,))
        if self.N is not None and g.degree(self.p0) != self.N:
            raise DegreeDrop(f"degree {g.degree(self.p0)} in {self.p0} at {b}, expected {self.N}")
        return g

    # -- stages ----------------------------------------------------------

    def degrees(self):
        params, p0 = self.parameters, self.p0
        logger.info("degrees: %d parameter runs", len(params))
        n_deg, alpha = None, None
        L, columns = [], []
        for uj in params:
            others = tuple(v for v in params if v != uj)
            binding = dict(zip(others, self.stream.point(len(others))))
            g = self._eliminate(self.system.specialize(binding), (uj, p0))
            self.samples += 1
            deg = g.degree(p0)
            if deg < 1:
                raise DegreeDrop(f"eliminant has degree {deg} in {p0} when only {uj} is free")
            s_spec = self.system.data_sum.subs(binding).reorder((uj, p0))
            if s_spec.is_constant():
                raise DegenerateSample(f"data sum does not involve {uj} after specialization")
            coeffs = [g.coeff(p0, i) for i in range(deg + 1)]
            alpha_j = tuple(factor_multiplicity(c, s_spec)[0] if not c.is_zero() else 0 for c in coeffs)
            if n_deg is None:
                n_deg, alpha = deg, alpha_j
            elif (deg, alpha_j) != (n_deg, alpha):
                raise InconsistentDegrees(f"run for {uj} gives N={deg}, alpha={alpha_j}; expected N={n_deg}, alpha={alpha}")
            L.append(coeffs[deg].degree(uj))
            columns.append([coeffs[i].degree(uj) for i in range(deg)])
            logger.debug("degrees: %s -> N=%d L=%d", uj, deg, L[-1])

        omega = tuple(tuple(col[i] for col in columns) for i in range(n_deg))
        lc_total = self._lc_total_degree(n_deg)
        self.N = n_deg
        return DegreeProfile(n_deg, alpha, tuple(L), omega, lc_total)

    def _lc_total_degree(self, n_deg):
        """Degree of A_N along a generic line u = c + tau d."""
        params, p0 = self.parameters, self.p0
        taken = set(params) | set(self.system.variables)
        tau = "tau"
        while tau in taken:
            tau += "_"
        line = Poly.var(tau, (tau,))
        c = self.stream.point(len(params))
        d = self.stream.point(len(params))
        binding = {u: line * dj + cj for u, cj, dj in zip(params, c, d)}
        g = self._eliminate(self.system.specialize(binding), (tau, p0))
        self.samples += 1
        if g.degree(p0) != n_deg:
            raise DegreeDrop(f"line probe has degree {g.degree(p0)} in {p0}, expected {n_deg}")
        return g.lcoeff(p0).degree(tau)

    def leading_coefficient(self, alpha_n, L):
        params = self.parameters
        u0, rest = params[0], params[1:]
        d = L[0] - alpha_n
        bounds = [L[j] - alpha_n for j in range(1, len(params))]
        if d < 0 or any(bound < 0 for bound in bounds):
            raise InconsistentDegrees(f"degree bounds {L} below the multiplicity {alpha_n}")
        u0_var = Poly.var(u0, params)
        factor = self.system.data_sum.reorder(params) ** alpha_n
        slots = {i: enumerate_monomials(d - i, bounds) for i in range(d)}
        t = max((len(monos) for monos in slots.values()), default=0)
        logger.info("leading coefficient: d=%d, %d samples", d, t)

        def attempt():
            remainder = u0_var ** d
            if t == 0:
                return remainder
            points = self.stream.points(t, len(rest))
            quotients = self._fan_out(lambda b: self.intersect_for_lc(b, alpha_n), points)
            for b, q in zip(points, quotients):
                if q.degree(u0) != d:
                    raise DegreeDrop(f"leading coefficient has degree {q.degree(u0)} in {u0} at {b}, expected {d}")
            for i, monos in slots.items():
                if not monos:
                    continue
                size = len(monos)
                matrix = [[_monomial_value(m, b) for m in monos] for b in points[:size]]
                rhs = [q.coeff(u0, i).constant_value() for q in quotients[:size]]
                solution = solve_exact(matrix, rhs)
                for c, m in zip(solution, monos):
                    remainder = remainder + u0_var ** i * _monomial_poly(m, rest, params) * c
            return remainder

        return factor * self._retry("leading coefficient", attempt)

    def coefficients(self, a_n, alpha, omega):
        params, p0 = self.parameters, self.p0
        a_n = a_n.reorder(params)
        data_sum = self.system.data_sum.reorder(params)
        total = a_n.total_degree()
        slots = {}
        for i, row in enumerate(omega):
            if any(w < 0 for w in row):
                continue
            if total - alpha[i] < 0:
                raise InconsistentDegrees(f"coefficient {i} has multiplicity {alpha[i]} above degree {total}")
            slots[i] = enumerate_monomials(total - alpha[i], [w - alpha[i] for w in row])
        t = max((len(monos) for monos in slots.values()), default=0)
        logger.info("coefficients: %d samples", t)

        def usable(b):
            point = dict(zip(params, b))
            return data_sum.evaluate(point) != 0 and a_n.evaluate(point) != 0

        def attempt():
            coeffs = [Poly.zero(params) for _ in range(len(omega))]
            if t == 0:
                return coeffs
            points = self.stream.points(t, len(params), accept=usable)
            eliminants = self._fan_out(self.intersect, points)
            for i, monos in slots.items():
                if not monos:
                    continue
                size = len(monos)
                matrix, rhs = [], []
                for b, g in zip(points[:size], eliminants[:size]):
                    point = dict(zip(params, b))
                    scale = data_sum.evaluate(point) ** alpha[i] / a_n.evaluate(point)
                    matrix.append([_monomial_value(m, b) * scale for m in monos])
                    rhs.append(g.coeff(p0, i).constant_value())
                solution = solve_exact(matrix, rhs)
                reduced = Poly.zero(params)
                for c, m in zip(solution, monos):
                    reduced = reduced + _monomial_poly(m, params, params) * c
                coeffs[i] = data_sum ** alpha[i] * reduced
            return coeffs

        return self._retry("coefficients", attempt)

    def verify(self, e_f, a_n):
        params, p0 = self.parameters, self.p0

        def usable(b):
            point = dict(zip(params, b))
            return self.system.data_sum.evaluate(point) != 0 and a_n.evaluate(point) != 0

        b = self.stream.points(1, len(params), accept=usable)[0]
        g = self.intersect(b)
        self.samples += 1
        binding = dict(zip(params, b))
        expected = e_f.subs(binding).reorder((p0,)) / a_n.evaluate(binding)
        if expected != g.reorder((p0,)):
            raise VerificationFailed(f"interpolated eliminant disagrees with the sample at {b}")
        logger.info("verification sample at %s agrees", b)

    def solve(self, profile):
        """Leading coefficient, coefficients and verification for a known profile."""
        params, p0 = self.parameters, self.p0
        self.N = profile.N
        gens = params + (p0,)
        p0_var = Poly.var(p0, gens)
        attempts = self.settings.retries + 1
        for attempt in range(1, attempts + 1):
            a_n = self.leading_coefficient(profile.alpha[-1], profile.L)
            lower = self.coefficients(a_n, profile.alpha, profile.Omega)
            e_f = a_n.reorder(gens) * p0_var ** profile.N
            for i, a_i in enumerate(lower):
                e_f = e_f + a_i.reorder(gens) * p0_var ** i
            try:
                self.verify(e_f, a_n)
                return e_f
            except VerificationFailed as exc:
                if attempt == attempts:
                    raise
                logger.warning("%s; restarting with fresh samples (%d/%d)", exc, attempt, attempts - 1)

    def estimate(self, profile):
        alpha_n = profile.alpha[-1]
        d = profile.L[0] - alpha_n
        lc_bounds = [w - alpha_n for w in profile.L[1:]]
        lc_slots = tuple(len(enumerate_monomials(d - i, lc_bounds)) for i in range(max(d, 0)))
        total = profile.lc_total_degree if profile.lc_total_degree is not None else profile.L[0]
        structured, unstructured = [], []
        for i, row in enumerate(profile.Omega):
            if any(w < 0 for w in row):
                structured.append(0)
                unstructured.append(0)
                continue
            structured.append(len(enumerate_monomials(total - profile.alpha[i], [w - profile.alpha[i] for w in row])))
            unstructured.append(len(enumerate_monomials(total, list(row))))
        self.N = profile.N
        started = time.perf_counter()
        self.intersect(self.stream.point(len(self.parameters)))
        self.samples += 1
        elapsed = (time.perf_counter() - started) * 1000.0
        return CostEstimate(lc_slots, tuple(structured), tuple(unstructured), elapsed)


# -- module-level operations ---------------------------------------------------


def degrees(system, stream, settings=None):
    pipeline = InterpolationPipeline(system, stream, settings)
    return pipeline._retry("degrees", pipeline.degrees)


def _single_sample(system, settings, n_deg):
    pipeline = InterpolationPipeline(system, SampleStream(), settings)
    pipeline.N = n_deg
    return pipeline


def intersect_for_lc(system, b, alpha_n, settings=None, N=None):
    """DegreeDrop is only checked when the expected degree N is given."""
    return _single_sample(system, settings, N).intersect_for_lc(b, alpha_n)


def intersect(system, b, settings=None, N=None):
    """DegreeDrop is only checked when the expected degree N is given."""
    return _single_sample(system, settings, N).intersect(b)


def leading_coefficient(system, alpha_n, L, stream, settings=None):
    return InterpolationPipeline(system, stream, settings).leading_coefficient(alpha_n, L)


def coefficients(system, a_n, alpha, omega, stream, settings=None):
    return InterpolationPipeline(system, stream, settings).coefficients(a_n, alpha, omega)


def reparameterize(system, stream=None, scales=None):
    """v0 = u0, v_j = b_j u_j + u0; returns the moved system and the map back to u."""
    params = system.parameters
    if scales is None:
        scales = stream.point(len(params) - 1)
    if any(b == 0 for b in scales):
        raise ValueError("reparameterization scales must be nonzero")
    taken = set(params) | set(system.variables)
    prefix = "v"
    while any(f"{prefix}{j}" in taken for j in range(len(params))):
        prefix += "v"
    moved = tuple(f"{prefix}{j}" for j in range(len(params)))
    v = [Poly.var(name, moved) for name in moved]
    u = [Poly.var(name, params) for name in params]

    forward = {params[0]: v[0]}
    back = {moved[0]: u[0]}
    for j in range(1, len(params)):
        forward[params[j]] = (v[j] - v[0]) / scales[j - 1]
        back[moved[j]] = u[j] * scales[j - 1] + u[0]

    equations = tuple(eq.subs(forward) for eq in system.equations)
    data_sum = system.data_sum.subs(forward).reorder(moved)
    logger.info("reparameterized with scales %s", tuple(scales))
    return (
        LagrangeSystem(equations, moved, system.unknowns, system.multipliers, source=system.source, data_sum=data_sum),
        back,
    )


def eliminate_interpolate(system, seed=0, settings=None, stream=None):
    settings = settings or PipelineSettings()
    stream = stream or SampleStream(seed)
    pipeline = InterpolationPipeline(system, stream, settings)
    params, p0 = system.parameters, system.first_unknown
    profile = degrees_with_fallback(pipeline)

    if ensure_assumption_a1(profile):
        e_f = normalize_a2(pipeline.solve(profile), params, p0)
        return EliminationResult(e_f, profile, seed, pipeline.samples, True)

    logger.warning("leading coefficient lacks a pure u0 power (L(1)=%d, total degree %d); reparameterizing",
                   profile.L[0], profile.lc_total_degree)
    used = pipeline.samples
    for attempt in range(settings.retries + 1):
        moved, back = reparameterize(system, stream)
        inner = InterpolationPipeline(moved, stream, settings)
        moved_profile = degrees_with_fallback(inner)
        if ensure_assumption_a1(moved_profile):
            e_v = inner.solve(moved_profile)
            used += inner.samples
            gens = params + (p0,)
            e_f = normalize_a2(e_v.subs(back).reorder(gens), params, p0)
            return EliminationResult(e_f, profile_from_generator(e_f, system), seed, used, True)
        used += inner.samples
    raise AssumptionA1Violated(f"no reparameterization in {settings.retries + 1} attempts puts a pure u0 power in the leading coefficient")


def degrees_with_fallback(pipeline):
    try:
        return pipeline._retry("degrees", pipeline.degrees)
    except InconsistentDegrees as exc:
        raise NotGeneralZeroDimensional(f"degree profile never stabilized: {exc}") from exc


def eliminate_groebner(system, settings=None):
    """Direct radical elimination of the full symbolic system."""
    settings = settings or PipelineSettings()
    params, p0 = system.parameters, system.first_unknown
    g = radical_elim_generator(system.equations, params + (p0,), settings.gb_budget)
    if g.degree(p0) < 1:
        raise NotGeneralZeroDimensional(f"eliminant does not involve {p0}")
    e_f = normalize_a2(g, params, p0)
    return EliminationResult(e_f, profile_from_generator(e_f, system), None, 0, True, "groebner")


def estimate_cost(system, profile, stream, settings=None):
    return InterpolationPipeline(system, stream, settings).estimate(profile)


def structure_constants(model, stream, settings=None):
    """(N, t, l, delta) from the f- and F-eliminants at two independent points."""
    settings = settings or PipelineSettings()
    f_system = likelihood_system(model)
    scaled = scaled_system(model)
    params = f_system.parameters
    u0, p0, x0 = params[0], f_system.first_unknown, scaled.first_unknown

    def probe():
        b = stream.point(len(params) - 1)
        binding = dict(zip(params[1:], b))
        g = radical_elim_generator(f_system.specialize(binding), (u0, p0), settings.gb_budget)
        big = radical_elim_generator(scaled.specialize(binding), (u0, x0), settings.gb_budget)
        n_deg = g.degree(p0)
        if n_deg < 1:
            raise DegreeDrop(f"eliminant has degree {n_deg} in {p0} at {b}")
        s_p = Poly.var(u0, (u0, p0)) + sum(b)
        s_x = Poly.var(u0, (u0, x0)) + sum(b)
        moved = big.subs({x0: s_p * Poly.var(p0, (u0, p0))}).reorder((u0, p0))
        try:
            quotient = exquo(moved, g)
        except DivisionFailure:
            raise InconsistentStructure(f"substituted F-eliminant is not a multiple of the f-eliminant at {b}") from None
        k, cofactor = factor_multiplicity(quotient, s_p)
        ell = int(is_divisible(g, s_p))
        delta = int(is_divisible(big, s_x))
        if k + ell < 1:
            raise InconsistentStructure(f"no positive power of the data sum at {b}")
        return StructureConstants(n_deg, k + ell, ell, delta, cofactor.reorder((u0,)))

    def agree():
        first, second = probe(), probe()
        if first != second:
            raise InconsistentStructure(f"structure constants differ between samples: {first.as_dict()} vs {second.as_dict()}")
        return first

    pipeline = InterpolationPipeline(f_system, stream, settings)
    result = pipeline._retry("structure", agree)
    if result.C_spec is not None and result.C_spec.degree(u0) > 0:
        logger.warning("specialized cofactor %s has positive degree in %s", result.C_spec, u0)
    return result
