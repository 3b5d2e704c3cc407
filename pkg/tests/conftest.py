"""Shared fixtures for the algebra and likelihood test suites."""
import pytest
import sympy
from click.testing import CliRunner

from algebra_service import parse_poly
from likelihood_service import create_app
from likelihood_service.corpus import get_model
from likelihood_service.models import LagrangeSystem, likelihood_system

DIE_PARAMS = ("u0", "u1", "u2", "u3")
DIE_E_F = (
    "(u0 + u1 + u2 + u3)^2*p0^3"
    " - 1/10*(u0 + u1 + u2 + u3)*(43*u0 + 20*u1 + 15*u2 + 8*u3)*p0^2"
    " + 1/5*u0*(29*u0 + 23*u1 + 21*u2 + 14*u3)*p0"
    " - 12/5*u0^2"
)


def to_sympy(poly):
    """Convert a Poly to a sympy expression through its printed form."""
    symbols = {name: sympy.Symbol(name) for name in poly.gens}
    return sympy.sympify(str(poly).replace("^", "**"), locals=symbols)


@pytest.fixture
def die_model():
    return get_model("die")


@pytest.fixture
def coin_model():
    return get_model("fair_coin")


@pytest.fixture
def die_system(die_model):
    return likelihood_system(die_model)


@pytest.fixture
def die_eliminant():
    return parse_poly(DIE_E_F, DIE_PARAMS + ("p0",))


@pytest.fixture
def planted_system():
    """One equation whose eliminant has leading coefficient S(u)^2 (u0 + 2 u1)."""
    gens = ("u0", "u1", "p0")
    eq = parse_poly("(u0 + u1)^2*(u0 + 2*u1)*p0 - u0^3", gens)
    return LagrangeSystem((eq,), ("u0", "u1"), ("p0",))


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def cli():
    return create_app()
