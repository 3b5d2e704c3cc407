from fractions import Fraction

import pytest
import sympy

from algebra_service import det_exact, parse_poly, solve_exact
from algebra_service.errors import SingularMatrix
from tests.conftest import to_sympy


@pytest.mark.unit
class TestSolveExact:
    def test_die_coefficient_system(self):
        # rows are monomial values over S(b), right-hand sides the sampled p0^2 coefficients
        rows = [
            [Fraction(v, 54) for v in (5, 6, 11, 32)],
            [Fraction(v, 24) for v in (11, 2, 3, 8)],
            [Fraction(v, 23) for v in (7, 2, 5, 9)],
            [Fraction(v, 44) for v in (7, 3, 13, 21)],
        ]
        rhs = [Fraction(-7, 5), Fraction(-311, 120), Fraction(-244, 115), Fraction(-181, 110)]
        assert solve_exact(rows, rhs) == [Fraction(-43, 10), Fraction(-2), Fraction(-3, 2), Fraction(-4, 5)]

    def test_zero_pivot_needs_row_swap(self):
        assert solve_exact([[0, 1], [1, 0]], [3, 4]) == [4, 3]

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            solve_exact([[1, 2], [2, 4]], [1, 2])

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            solve_exact([[1, 2]], [1])


@pytest.mark.unit
class TestDetExact:
    def test_scalar_determinants(self):
        assert det_exact([[1, 2], [3, 4]]) == -2
        assert det_exact([[0, 1], [1, 0]]) == -1
        assert det_exact([]) == 1
        assert det_exact([[1, 2], [2, 4]]) == 0

    def test_binomial_mixture_matrix(self):
        gens = ("p0", "p1", "p2", "p3", "p4")
        rows = [["12*p0", "3*p1", "2*p2"], ["3*p1", "2*p2", "3*p3"], ["2*p2", "3*p3", "12*p4"]]
        det = det_exact([[parse_poly(e, gens) for e in row] for row in rows])
        expected = parse_poly("288*p0*p2*p4 - 108*p0*p3^2 - 108*p1^2*p4 + 36*p1*p2*p3 - 8*p2^3", gens)
        assert det == expected

    def test_symbolic_matrix_agrees_with_sympy(self):
        gens = ("a", "b", "c", "d")
        texts = [["a", "b + 1", "0", "c"], ["0", "a*d", "b", "1"], ["c - d", "2", "a", "0"], ["1", "0", "d^2", "b"]]
        ours = det_exact([[parse_poly(e, gens) for e in row] for row in texts])
        theirs = sympy.Matrix([[sympy.sympify(e.replace("^", "**")) for e in row] for row in texts]).det()
        assert sympy.expand(to_sympy(ours) - theirs) == 0
