"""Integration tests for the interpolation pipeline on the die, the coin and planted systems."""
from fractions import Fraction

import pytest

from algebra_service import exquo, is_divisible, parse_poly, radical_elim_generator, substitute
from algebra_service.errors import ResourceLimit, SingularMatrix
from likelihood_service.config import PipelineSettings
from likelihood_service.corpus import get_model
from likelihood_service.errors import DegreeDrop
from likelihood_service.interpolate import (
    DegreeProfile,
    InterpolationPipeline,
    StructureConstants,
    coefficients,
    degrees,
    eliminate_groebner,
    eliminate_interpolate,
    ensure_assumption_a1,
    enumerate_monomials,
    estimate_cost,
    intersect,
    intersect_for_lc,
    leading_coefficient,
    normalize_a2,
    profile_from_generator,
    reparameterize,
    structure_constants,
)
from likelihood_service.models import LagrangeSystem, likelihood_system, scaled_system
from likelihood_service.sampling import SampleStream

DIE_PROFILE = DegreeProfile(
    N=3,
    alpha=(0, 0, 1, 2),
    L=(2, 2, 2, 2),
    Omega=((2, 0, 0, 0), (2, 1, 1, 1), (2, 2, 2, 2)),
    lc_total_degree=2,
)


def die_sum():
    return parse_poly("u0 + u1 + u2 + u3", ("u0", "u1", "u2", "u3"))


@pytest.mark.unit
class TestMonomials:
    def test_bounded_enumeration(self):
        monos = enumerate_monomials(2, [2, 1, 1, 1])
        assert len(monos) == 7
        assert monos[0] == (2, 0, 0, 0)
        assert (0, 2, 0, 0) not in monos

    def test_unstructured_count(self):
        assert len(enumerate_monomials(2, [2, 2, 2, 2])) == 10

    def test_edge_cases(self):
        assert enumerate_monomials(0, []) == [()]
        assert enumerate_monomials(1, []) == []
        assert enumerate_monomials(3, [1, 1]) == []


@pytest.mark.unit
class TestNormalization:
    def test_pure_u0_power_scaled_to_one(self):
        gens = ("u0", "u1", "p0")
        e = parse_poly("10*(u0 + u1)^2*p0 - 3*u0^2", gens)
        assert normalize_a2(e, ("u0", "u1"), "p0") == parse_poly("(u0 + u1)^2*p0 - 3/10*u0^2", gens)

    def test_fallback_without_u0_power(self):
        gens = ("u0", "u1", "p0")
        e = parse_poly("4*u1^2*p0 - u0^2", gens)
        assert normalize_a2(e, ("u0", "u1"), "p0") == parse_poly("u1^2*p0 - 1/4*u0^2", gens)

    def test_profile_read_off_eliminant(self, die_system, die_eliminant):
        assert profile_from_generator(die_eliminant, die_system) == DIE_PROFILE
        assert ensure_assumption_a1(DIE_PROFILE)


@pytest.mark.integration
class TestDieStages:
    def test_degrees(self, die_system):
        assert degrees(die_system, SampleStream(7)) == DIE_PROFILE

    def test_intersect_at_known_point(self, die_system):
        g = intersect(die_system, (5, 6, 11, 32))
        assert g == parse_poly("p0^3 - 7/5*p0^2 + 481/1458*p0 - 5/243", ("p0",))

    def test_intersect_matches_eliminant(self, die_system, die_eliminant):
        b = (11, 2, 3, 8)
        point = dict(zip(die_system.parameters, b))
        expected = die_eliminant.subs(point)
        assert intersect(die_system, b) == expected / expected.leading_coefficient()
        assert intersect(die_system, b).coeff("p0", 2) == Fraction(-311, 120)

    def test_expected_degree_is_checked_when_given(self, die_system):
        assert intersect(die_system, (5, 6, 11, 32), N=3).degree("p0") == 3
        with pytest.raises(DegreeDrop):
            intersect(die_system, (5, 6, 11, 32), N=4)
        with pytest.raises(DegreeDrop):
            intersect_for_lc(die_system, (2, 12, 7), 2, N=4)

    def test_intersect_for_lc_pure_power(self, die_system):
        assert intersect_for_lc(die_system, (2, 12, 7), 2) == 1

    def test_leading_coefficient_without_interpolation(self, die_system):
        a_n = leading_coefficient(die_system, 2, DIE_PROFILE.L, SampleStream(1))
        assert a_n == die_sum() ** 2

    def test_coefficients(self, die_system, die_eliminant):
        lower = coefficients(die_system, die_sum() ** 2, DIE_PROFILE.alpha, DIE_PROFILE.Omega, SampleStream(3))
        assert lower == [die_eliminant.coeff("p0", i) for i in range(3)]
        assert lower[2] == -die_sum() * parse_poly("43/10*u0 + 2*u1 + 3/2*u2 + 4/5*u3", die_sum().gens)

    def test_estimate(self, die_system):
        cost = estimate_cost(die_system, DIE_PROFILE, SampleStream(0))
        assert cost.lc_slots == ()
        assert cost.coefficient_slots == (1, 7, 4)
        assert cost.unstructured_slots == (1, 7, 10)
        assert cost.coefficient_samples == 7
        assert cost.sample_ms >= 0


@pytest.mark.integration
class TestEliminateInterpolate:
    def test_die(self, die_system, die_eliminant):
        result = eliminate_interpolate(die_system, seed=7)
        assert result.E_f == die_eliminant
        assert result.profile == DIE_PROFILE
        assert result.verified
        assert result.samples_used == 13
        for i, alpha in enumerate(result.profile.alpha):
            assert is_divisible(result.E_f.coeff("p0", i), die_sum() ** alpha)

    def test_deterministic_across_worker_counts(self, die_system):
        one = eliminate_interpolate(die_system, seed=11, settings=PipelineSettings(workers=1))
        three = eliminate_interpolate(die_system, seed=11, settings=PipelineSettings(workers=3))
        assert str(one.E_f) == str(three.E_f)
        assert one.samples_used == three.samples_used

    def test_fair_coin(self, coin_model):
        result = eliminate_interpolate(likelihood_system(coin_model), seed=0)
        assert result.E_f == parse_poly("p0 - 1/2", ("p0",))
        assert result.profile.N == 1

    def test_planted_leading_coefficient(self, planted_system):
        result = eliminate_interpolate(planted_system, seed=5)
        assert result.E_f == parse_poly("(u0 + u1)^2*(u0 + 2*u1)*p0 - u0^3", ("u0", "u1", "p0"))
        assert result.profile.alpha == (0, 2)
        assert result.samples_used == 6

    def test_groebner_route_agrees_on_coin(self, coin_model):
        system = likelihood_system(coin_model)
        assert eliminate_groebner(system).E_f == eliminate_interpolate(system, seed=2).E_f


@pytest.mark.integration
class TestAssumptionA1:
    def test_violation_detected_and_repaired(self):
        gens = ("u0", "u1", "p0")
        system = LagrangeSystem((parse_poly("u1^2*p0 - u0^2", gens),), ("u0", "u1"), ("p0",))
        profile = degrees(system, SampleStream(4))
        assert profile.L == (0, 2)
        assert profile.lc_total_degree == 2
        assert not ensure_assumption_a1(profile)

        moved, _ = reparameterize(system, scales=(3,))
        assert ensure_assumption_a1(degrees(moved, SampleStream(4)))

        result = eliminate_interpolate(system, seed=4)
        assert result.E_f == parse_poly("u1^2*p0 - u0^2", gens)
        assert result.verified

    def test_identity_reparameterization_round_trip(self, die_system):
        moved, back = reparameterize(die_system, scales=(1, 1, 1))
        assert moved.parameters == ("v0", "v1", "v2", "v3")
        assert [substitute(eq, back) for eq in moved.equations] == list(die_system.equations)
        assert moved.data_sum.subs(back) == die_system.data_sum


@pytest.mark.integration
class TestStructure:
    def test_die(self, die_model):
        assert structure_constants(die_model, SampleStream(0)) == StructureConstants(3, 2, 0, 1)

    def test_fair_coin(self, coin_model):
        sc = structure_constants(coin_model, SampleStream(0))
        assert (sc.N, sc.t, sc.ell, sc.delta) == (1, 1, 0, 0)
        assert sc.C_spec.is_constant()

    def test_coin_scaling_identity(self, coin_model):
        scaled = scaled_system(coin_model)
        big = radical_elim_generator(scaled.equations, ("u0", "u1", "x0"))
        expected = parse_poly("2*x0 - u0 - u1", ("u0", "u1", "x0"))
        assert big in (expected, -expected)
        gens = ("u0", "u1", "p0")
        moved = expected.subs({"x0": parse_poly("(u0 + u1)*p0", gens)})
        quotient = exquo(moved, parse_poly("p0 - 1/2", gens))
        assert quotient == parse_poly("2*(u0 + u1)", gens)


@pytest.mark.unit
class TestRetries:
    def test_degenerate_stage_is_resampled(self, die_system):
        pipeline = InterpolationPipeline(die_system, SampleStream(0), PipelineSettings(retries=2))
        calls = []

        def flaky():
            calls.append(1)
            if len(calls) < 3:
                raise SingularMatrix("unlucky sample")
            return "done"

        assert pipeline._retry("test", flaky) == "done"
        assert len(calls) == 3

    def test_retry_budget_exhausted(self, die_system):
        pipeline = InterpolationPipeline(die_system, SampleStream(0), PipelineSettings(retries=1))

        def always():
            raise DegreeDrop("still degenerate")

        with pytest.raises(DegreeDrop):
            pipeline._retry("test", always)

    def test_resource_limit_is_not_retried(self, die_system):
        with pytest.raises(ResourceLimit):
            degrees(die_system, SampleStream(0), PipelineSettings(gb_budget=1))


@pytest.mark.slow
class TestOracleEquivalence:
    @pytest.mark.parametrize("name, ml_degree", [
        ("random_censoring", 3),
        ("zero_diagonal_3x3", 2),
        ("grassmannian_2_4", 4),
    ])
    def test_interpolation_matches_direct_elimination(self, name, ml_degree):
        system = likelihood_system(get_model(name))
        interpolated = eliminate_interpolate(system, seed=0)
        assert interpolated.profile.N == ml_degree
        direct = eliminate_groebner(system)
        assert direct.E_f == interpolated.E_f

    def test_die_direct_elimination(self, die_system, die_eliminant):
        assert eliminate_groebner(die_system).E_f == die_eliminant

    def test_random_censoring_structure(self):
        sc = structure_constants(get_model("random_censoring"), SampleStream(0))
        assert (sc.N, sc.t, sc.ell, sc.delta) == (3, 2, 0, 1)
