import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_stieltjes import (
    AngularMeasure,
    CoefficientSequence,
    DiskPoint,
    DomainError,
    ParameterError,
    SeriesSolution,
    SolutionEvaluator,
    StolzSector,
    basis_angle,
    estimate_limit,
    evaluate_series,
    sample_path,
    verify_sector_bound,
)
from poisson_stieltjes.family import basis_function
from poisson_stieltjes.measure import wrap_angle

TWO_PI = 2 * math.pi


def test_path_radii():
    pts, truncated = sample_path(StolzSector(math.pi / 4, 1.0, 0.5), 4)
    assert [p.r for p in pts[:3]] == [0.5, 0.75, 0.875]
    assert all(p.theta == math.pi / 4 for p in pts)
    assert not truncated


def test_zigzag_alternates_and_halves():
    sector = StolzSector(math.pi / 4, 1.0, 0.5)
    pts, _ = sample_path(sector, 8, zigzag=True)
    offsets = [wrap_angle(p.theta - sector.boundary_angle) for p in pts]
    for k, off in enumerate(offsets):
        assert math.copysign(1, off) == (-1) ** k
    for a, b in zip(offsets, offsets[1:]):
        assert abs(b) == pytest.approx(abs(a) / 2, rel=1e-12)


@given(st.floats(0, TWO_PI), st.floats(0.01, 5), st.floats(0.01, 0.99), st.booleans())
def test_path_points_inside_sector(theta, c, r0, zigzag):
    sector = StolzSector(theta, c, r0)
    pts, _ = sample_path(sector, 20, zigzag)
    for p in pts:
        assert abs(wrap_angle(p.theta - sector.boundary_angle)) < c * (1 - p.r)


def test_path_truncates_at_cutoff():
    pts, truncated = sample_path(StolzSector(1.0), 60)
    assert truncated
    assert len(pts) < 60
    assert all(p.r <= 1 - 1e-12 for p in pts)


def test_path_needs_four_points():
    with pytest.raises(ParameterError):
        sample_path(StolzSector(1.0), 3)


def test_limit_of_atomic_solution_off_the_atom():
    ev = SolutionEvaluator(AngularMeasure.atom(1.0, TWO_PI))
    for Theta in (1.1, 2.0, 4.0, 0.9):
        rep = estimate_limit(ev, StolzSector(Theta), 24)
        assert abs(rep.limit_estimate) <= 1e-6
        assert 0.9 <= rep.decay_exponent <= 1.1
        assert rep.samples_used == 24
        assert rep.max_abs_tail >= 0


def test_limit_zigzag_path():
    ev = SolutionEvaluator(AngularMeasure.atom(1.0, TWO_PI))
    rep = estimate_limit(ev, StolzSector(2.5, 1.0), 24, zigzag=True)
    assert abs(rep.limit_estimate) <= 1e-6
    assert 0.9 <= rep.decay_exponent <= 1.1


def test_limit_of_constant():
    ev = SolutionEvaluator(AngularMeasure.density([(0, TWO_PI, 1.0)]))
    rep = estimate_limit(ev, StolzSector(3.0), 16)
    assert rep.limit_estimate == pytest.approx(1.0, abs=1e-12)
    assert rep.decay_exponent == math.inf


def test_limit_of_cantor_in_middle_gap():
    ev = SolutionEvaluator(AngularMeasure.cantor(1.0), 1e-12)
    rep = estimate_limit(ev, StolzSector(math.pi), 20)
    assert abs(rep.limit_estimate) <= 1e-8
    assert all(b < a for a, b in zip(rep.values, rep.values[1:]))


def test_limit_needs_eight_samples():
    with pytest.raises(ParameterError):
        estimate_limit(SolutionEvaluator(AngularMeasure()), StolzSector(1.0), 6)


def test_sector_bound_example():
    res = verify_sector_bound(1, StolzSector(math.pi / 4, 1.0), [0.9, 0.99, 0.999])
    assert res.holds
    assert res.worst_ratio <= 1 + 1e-12
    assert np.isfinite(res.max_decay_ratio)


def test_sector_bound_direct_evaluation():
    # recompute both sides for the example without going through the library check
    Theta, n = math.pi / 4, 1
    for r in (0.9, 0.99, 0.999):
        for frac in np.linspace(-0.9, 0.9, 7):
            theta = Theta + frac * (1 - r)
            lhs = (1 - r * r) / (1 - 2 * r * math.cos(theta - basis_angle(n)) + r * r)
            rhs = (1 - r * r) / (4 * r * math.sin((Theta - basis_angle(n)) / 4) ** 2)
            assert lhs <= rhs


def test_sector_linear_decay_constant():
    sector = StolzSector(math.pi / 4, 1.0)
    ratios = []
    for r in (0.9, 0.99, 0.999, 0.9999):
        ratios.append(verify_sector_bound(1, sector, [r]).max_decay_ratio)
    assert max(ratios) / min(ratios) < 1.5


def test_sector_bound_degenerate():
    with pytest.raises(DomainError):
        verify_sector_bound(2, StolzSector(basis_angle(2)), [0.9])


@pytest.mark.parametrize("n", range(1, 9))
def test_sector_bound_many_configurations(n):
    for Theta in np.linspace(0, TWO_PI, 41):
        if abs(wrap_angle(Theta - basis_angle(n))) < 0.1:
            continue
        assert verify_sector_bound(n, StolzSector(Theta, 1.0), [0.9, 0.95, 0.99, 0.999]).holds


@settings(max_examples=20, deadline=None)
@given(st.floats(0, TWO_PI))
def test_series_ratio_bounded_along_path(Theta):
    s = SeriesSolution(CoefficientSequence.finite([1.0, -0.5, 0.25, 0.125]))
    excluded = [basis_angle(n) for n in range(1, 5)] + [math.pi]
    if min(abs(wrap_angle(Theta - e)) for e in excluded) < 0.05:
        return
    pts, _ = sample_path(StolzSector(Theta, 1.0, 0.5), 24)
    for p in pts:
        # kernel denominator >= 4 r sin^2(alpha/2), so each term is O(1 - r) off its atom
        bound = sum(abs(g) * (1 + p.r) / (4 * p.r * math.sin(wrap_angle(p.theta - basis_angle(n)) / 2) ** 2)
                    for n, g in enumerate(s.coefficients.entries, start=1))
        assert abs(evaluate_series(s, p, 1e-14)[0]) / (1 - p.r) <= bound * (1 + 1e-12)


def test_sector_contains():
    sector = StolzSector(0.1, 1.0)
    assert sector.contains(DiskPoint(0.9, 0.15))
    assert not sector.contains(DiskPoint(0.9, 0.25))
    assert StolzSector(0.05, 1.0).contains(DiskPoint(0.9, TWO_PI - 0.04))
    assert basis_function(1, DiskPoint(0.0, 0.0)) == 1.0
