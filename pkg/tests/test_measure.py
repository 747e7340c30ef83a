import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cantor_recursive, cantor_riemann_stieltjes, cantor_second_moment
from poisson_stieltjes import (
    AccuracyError,
    AngularMeasure,
    Atom,
    DomainError,
    ParameterError,
    cantor_eval,
    cantor_function,
    derivative_a_e,
    poisson_kernel,
    stieltjes_integrate,
    total_variation,
)
from poisson_stieltjes._cantor import cantor_moments, gauss_cantor_rule

TWO_PI = 2 * math.pi


@pytest.mark.parametrize("depth", [1, 5, 40])
def test_cantor_endpoints_and_plateau(depth):
    assert cantor_function(0.0, depth) == 0.0
    assert cantor_function(0.5, depth) == 0.5
    assert cantor_function(1.0, depth) == 1.0


def test_cantor_quarter_is_one_third():
    assert abs(cantor_function(0.25, 40) - 1 / 3) <= 2.0**-40
    assert abs(cantor_recursive(0.25, 40) - 1 / 3) <= 2.0**-40


def test_cantor_eval_reports_bound():
    ev = cantor_eval(0.1, 12)
    assert ev.guaranteed_error == 2.0**-12
    assert abs(ev.value - cantor_recursive(0.1, 30)) <= ev.guaranteed_error + 2.0**-30


def test_cantor_errors():
    with pytest.raises(DomainError):
        cantor_function(1.5, 10)
    with pytest.raises(DomainError):
        cantor_function(-0.1, 10)
    with pytest.raises(ParameterError):
        cantor_function(0.3, 0)


@given(st.floats(0, 1), st.integers(1, 45))
def test_cantor_matches_recursive_definition(x, depth):
    exact = cantor_recursive(x, 60)
    assert abs(cantor_function(x, depth) - exact) <= 2.0**-depth + 2.0**-55


@given(st.floats(0, 1), st.floats(0, 1), st.integers(1, 40))
def test_cantor_monotone(x, y, depth):
    x, y = min(x, y), max(x, y)
    assert cantor_function(x, depth) <= cantor_function(y, depth) + 2 * 2.0**-depth


@given(st.floats(0, 1), st.integers(1, 40))
def test_cantor_symmetry(x, depth):
    # 1 - y is exact for y in [1/2, 1], so (1 - y, y) is a true complementary pair
    y = max(x, 1 - x)
    total = cantor_function(1 - y, depth) + cantor_function(y, depth)
    assert abs(total - 1) <= 2 * 2.0**-depth


def test_atom_canonical_form():
    mu = AngularMeasure(atoms=(Atom(7.0, 1.0), Atom(7.0 - TWO_PI, 2.0), Atom(1.0, 0.0)))
    assert len(mu.atoms) == 1
    assert mu.atoms[0].position == pytest.approx(7.0 - TWO_PI, abs=1e-15)
    assert mu.atoms[0].weight == 3.0
    assert AngularMeasure.atom(TWO_PI, 1.0).atoms[0].position == 0.0


def test_density_validation():
    with pytest.raises(DomainError):
        AngularMeasure.density([(0.0, 2.0, 1.0), (1.0, 3.0, 1.0)])
    with pytest.raises(DomainError):
        AngularMeasure.density([(-1.0, 2.0, 1.0)])
    with pytest.raises(DomainError):
        AngularMeasure.density([(2.0, 1.0, 1.0)])


def test_total_variation_examples():
    assert total_variation(AngularMeasure.atom(0.3, TWO_PI)) == TWO_PI
    assert total_variation(AngularMeasure()) == 0.0
    mu = AngularMeasure(atoms=((1.0, 1.0), (2.0, -1.0)), cantor_weight=1.0)
    assert total_variation(mu) == 3.0
    assert total_variation(AngularMeasure.density([(0, 2, -0.5)])) == 1.0


@given(st.floats(-5, 5, allow_nan=False))
def test_total_variation_scales(alpha):
    mu = AngularMeasure(atoms=((1.0, 1.5), (2.0, -0.25)), cantor_weight=-2.0,
                        density_pieces=((0.5, 1.0, 3.0),))
    assert total_variation(alpha * mu) == pytest.approx(abs(alpha) * total_variation(mu), rel=1e-15)


def test_total_mass_is_sum_of_components():
    mu = AngularMeasure(atoms=((1.0, 1.0),), cantor_weight=2.0, density_pieces=((0, 1, 3.0),))
    assert mu.total_mass == 6.0


def test_derivative_ae():
    assert derivative_a_e(AngularMeasure.atom(1.0, 2.0)).is_zero()
    assert derivative_a_e(AngularMeasure.cantor(1.0)).is_zero()
    d = derivative_a_e(AngularMeasure.density([(0, TWO_PI, 1.0)]))
    assert np.all(d(np.linspace(0, TWO_PI, 11, endpoint=False)) == 1.0)


def test_gauss_cantor_rule_exact_on_moments():
    x, w = gauss_cantor_rule(10)
    moments = cantor_moments(20)
    for k in range(20):
        assert math.isclose(float(w @ x**k), float(moments[k]), rel_tol=1e-14)


def test_stieltjes_atom_gives_kernel():
    theta0, r, th = 1.2, 0.7, 2.9
    mu = AngularMeasure.atom(theta0, TWO_PI)
    val = stieltjes_integrate(mu, lambda t: poisson_kernel(r, th - t) / TWO_PI, 1e-12)
    assert val == pytest.approx(poisson_kernel(r, th - theta0), rel=1e-15)


def test_stieltjes_cantor_moments():
    mu = AngularMeasure.cantor(1.0)
    assert stieltjes_integrate(mu, lambda t: np.ones_like(t), 1e-12) == pytest.approx(1.0, abs=1e-12)
    assert stieltjes_integrate(mu, lambda t: t / TWO_PI, 1e-12) == pytest.approx(0.5, abs=1e-12)
    m2 = stieltjes_integrate(mu, lambda t: (t / TWO_PI) ** 2, 1e-12)
    assert abs(m2 - float(cantor_second_moment())) <= 1e-10


def test_stieltjes_accepts_scalar_only_functions():
    val = stieltjes_integrate(AngularMeasure.cantor(1.0), math.cos, 1e-10)
    ref = cantor_riemann_stieltjes(lambda x: np.cos(TWO_PI * x), 16)
    assert val == pytest.approx(ref, abs=1e-9)


def test_stieltjes_cantor_against_riemann_sums():
    f = lambda t: np.exp(np.sin(t))  # noqa: E731
    val = stieltjes_integrate(AngularMeasure.cantor(1.0), f, 1e-11)
    ref = cantor_riemann_stieltjes(lambda x: f(TWO_PI * x), 16)
    assert val == pytest.approx(ref, abs=1e-10)


def test_stieltjes_density_piece():
    mu = AngularMeasure.density([(1.0, 2.0, 3.0)])
    val = stieltjes_integrate(mu, np.sin, 1e-12)
    assert val == pytest.approx(3 * (math.cos(1) - math.cos(2)), abs=1e-12)


def test_stieltjes_bad_tol():
    with pytest.raises(ParameterError):
        stieltjes_integrate(AngularMeasure.cantor(1.0), np.sin, 0.0)


def test_stieltjes_accuracy_error_on_rough_integrand():
    # oscillates far below double-precision resolution of t: refinement never settles
    with pytest.raises(AccuracyError) as info:
        stieltjes_integrate(AngularMeasure.cantor(1.0), lambda t: np.sin(1e9 * t), 1e-14)
    assert info.value.achieved is not None


def _smooth_family():
    return [
        np.sin, np.cos, np.exp,
        lambda t: t**3,
        lambda t: 1 / (2 + np.cos(t)),
        lambda t: np.exp(-((t - 2) ** 2)),
        lambda t: np.arctan(t - 3),
        lambda t: np.sqrt(1 + t * t),
        lambda t: poisson_kernel(0.6, 1.0 - t),
        lambda t: np.log(5 + np.sin(3 * t)),
    ]


@pytest.mark.parametrize("f", _smooth_family())
def test_self_similarity(f):
    tol = 1e-10
    mu = AngularMeasure.cantor(1.0)
    whole = stieltjes_integrate(mu, f, tol)
    low = stieltjes_integrate(mu, lambda t: f(t / 3), tol)
    high = stieltjes_integrate(mu, lambda t: f((t + 2 * TWO_PI) / 3), tol)
    assert abs(whole - 0.5 * low - 0.5 * high) <= 3 * tol


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(alpha, beta):
    tol = 1e-10
    mu = AngularMeasure(atoms=((1.0, 2.0),), cantor_weight=1.0)
    nu = AngularMeasure(atoms=((4.0, -1.0),), cantor_weight=0.5, density_pieces=((2.0, 3.0, 1.0),))
    f = lambda t: np.cos(t) + t  # noqa: E731
    combo = alpha * mu + beta * nu
    lhs = stieltjes_integrate(combo, f, tol)
    rhs = alpha * stieltjes_integrate(mu, f, tol) + beta * stieltjes_integrate(nu, f, tol)
    assert abs(lhs - rhs) <= 2 * tol * max(1.0, abs(alpha) + abs(beta))
