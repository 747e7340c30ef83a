"""Numerical verification suite behind ``poisson-stieltjes verify``.

Every check returns a :class:`CheckResult` holding the worst measured value,
the threshold it is compared against and the parameters used, so a summary
file describes its own run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .boundary import StolzSector, estimate_limit, verify_sector_bound
from .family import (
    CoefficientSequence,
    SeriesSolution,
    basis_angle,
    evaluate_series,
    independence_witness,
)
from .hp import growth_slope, integral_mean
from .measure import TWO_PI, AngularMeasure, total_variation, wrap_angle
from .poisson import DiskPoint, SolutionEvaluator, atomic_closed_form, mean_value_residual, poisson_kernel

SUITES = ("kernel", "harmonic", "sector", "remainder", "independence", "hp")

DEFAULT_TOL = 1e-9
DEFAULT_RADII = (0.5, 0.9, 0.99, 0.999)
DEFAULT_APERTURE = 1.0
EXAMPLE_ONE = AngularMeasure.atom(math.pi / 2, TWO_PI)


@dataclass
class CheckResult:
    check: str
    worst_value: float
    threshold: float
    passed: bool
    parameters: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "worst_value": self.worst_value,
            "threshold": self.threshold,
            "pass": self.passed,
            "parameters": self.parameters,
        }


def _le(name, worst, threshold, **params) -> CheckResult:
    return CheckResult(name, float(worst), float(threshold), bool(worst <= threshold), params)


def _ge(name, worst, threshold, **params) -> CheckResult:
    return CheckResult(name, float(worst), float(threshold), bool(worst >= threshold), params)


def measure_classes(atomic: AngularMeasure = EXAMPLE_ONE) -> dict[str, AngularMeasure]:
    """One representative boundary datum per measure class."""
    return {
        "atomic": atomic,
        "cantor": AngularMeasure.cantor(1.0),
        "density": AngularMeasure.density([(0.5, 2.0, 1.0), (3.0, 5.5, 0.25)]),
        "mixed": AngularMeasure(
            atoms=((1.0, 1.0), (4.0, 2.0)),
            cantor_weight=TWO_PI,
            density_pieces=((2.0, 3.5, 0.5),),
        ),
    }


def check_kernel_normalization(kernel=poisson_kernel, radii=(0.5, 0.9, 0.99),
                               threshold=1e-10) -> CheckResult:
    worst = 0.0
    for r in radii:
        k, prev = 4, None
        while True:
            n = 2**k
            cur = math.fsum(kernel(r, TWO_PI * np.arange(n) / n)) / n
            if prev is not None and abs(cur - prev) <= 1e-15:
                break
            if k > 22:
                break
            prev, k = cur, k + 1
        worst = max(worst, abs(cur - 1.0))
    return _le("kernel_normalization", worst, threshold, radii=list(radii))


def check_closed_form(rng, kernel=poisson_kernel, samples=10_000, threshold=1e-13) -> CheckResult:
    worst = 0.0
    for _ in range(samples):
        theta0 = rng.uniform(0.0, TWO_PI)
        z = DiskPoint(rng.uniform(0.0, 1.0), rng.uniform(0.0, TWO_PI))
        a = atomic_closed_form(theta0, z)
        b = kernel(z.r, z.theta - theta0)
        worst = max(worst, abs(a - b) / abs(b))
    return _le("closed_form_equivalence", worst, threshold, samples=samples)


def check_stability(rng, samples=10_000, threshold=4.0) -> CheckResult:
    # stable denominator vs the textbook one, in ulps, away from cancellation
    worst = 0.0
    for _ in range(samples):
        r = rng.uniform(0.0, 0.5)
        th = rng.uniform(-math.pi, math.pi)
        stable = (1 - r) ** 2 + 4 * r * math.sin(th / 2) ** 2
        naive = 1 - 2 * r * math.cos(th) + r * r
        worst = max(worst, abs(stable - naive) / math.ulp(naive))
    return _le("kernel_stability_ulps", worst, threshold, samples=samples, r_max=0.5)


def random_circle(rng):
    """Random z0 and rho with rho/(1 - |z0|) <= 0.6, well inside the margin."""
    r0 = rng.uniform(0.0, 0.8)
    z0 = DiskPoint(r0, rng.uniform(0.0, TWO_PI))
    rho = (1.0 - r0) * rng.uniform(0.05, 0.6)
    return z0, rho


def check_mean_value(rng, measures, tol=DEFAULT_TOL, circles=100, nodes=128) -> list[CheckResult]:
    out = []
    for name, mu in measures.items():
        ev = SolutionEvaluator(mu, tol)
        worst = 0.0
        for _ in range(circles):
            z0, rho = random_circle(rng)
            worst = max(worst, mean_value_residual(ev, z0, rho, nodes))
        out.append(_le(f"mean_value[{name}]", worst, 10 * tol,
                       tol=tol, circles=circles, nodes=nodes))
    return out


def sector_angles(theta0, count=20, separation=0.1):
    """``count`` boundary angles spread over the circle, each >= separation from theta0."""
    span = TWO_PI - 2 * separation
    return [theta0 + separation + span * (k + 0.5) / count for k in range(count)]


def check_fatou(measure=EXAMPLE_ONE, tol=DEFAULT_TOL, aperture=DEFAULT_APERTURE,
                count=24) -> list[CheckResult]:
    theta0 = measure.atoms[0].position
    ev = SolutionEvaluator(measure, tol)
    worst_limit, worst_dev = 0.0, 0.0
    for Theta in sector_angles(theta0):
        rep = estimate_limit(ev, StolzSector(Theta, aperture), count)
        worst_limit = max(worst_limit, abs(rep.limit_estimate))
        worst_dev = max(worst_dev, abs(rep.decay_exponent - 1.0))
    params = dict(sectors=20, separation=0.1, aperture=aperture, count=count)
    return [
        _le("fatou_limit", worst_limit, 1e-6, **params),
        _le("fatou_decay_exponent_deviation", worst_dev, 0.1, **params),
    ]


def check_sector_bound(radii=(0.9, 0.99, 0.999), aperture=DEFAULT_APERTURE,
                       n_max=8, separation=0.1) -> CheckResult:
    worst = 0.0
    for n in range(1, n_max + 1):
        for Theta in sector_angles(basis_angle(n), 24, separation):
            res = verify_sector_bound(n, StolzSector(Theta, aperture), radii)
            worst = max(worst, res.worst_ratio)
    return _le("sector_bound_ratio", worst, 1.0 + 1e-12,
               n_max=n_max, separation=separation, radii=list(radii), aperture=aperture)


def remainder_grid(size=20, r_max=0.9):
    radii = np.linspace(0.0, r_max, size)
    angles = TWO_PI * np.arange(size) / size
    return [DiskPoint(r, t) for r in radii for t in angles]


def check_remainder(ms=(2, 5, 10), size=20, r_max=0.9) -> CheckResult:
    series = SeriesSolution(CoefficientSequence.geometric(0.5, 1.0))
    worst = 0.0
    for z in remainder_grid(size, r_max):
        full, _ = evaluate_series(series, z, 1e-15)
        factor = (1 + z.r) / (1 - z.r)
        for m in ms:
            err = abs(full - series.partial_sum(z, m))
            worst = max(worst, err / (factor * 2.0**-m))
    return _le("remainder_bound_ratio", worst, 1.0, ms=list(ms), grid=f"{size}x{size}", r_max=r_max)


def check_independence(gamma=(1.0, 0.5, 0.25),
                       radii=(0.9, 0.95, 0.99, 0.995, 0.999)) -> list[CheckResult]:
    s = SeriesSolution(CoefficientSequence.finite(gamma))
    dominance, spread = math.inf, 0.0
    for n, g in enumerate(gamma, 1):
        if g == 0.0:
            continue
        rep = independence_witness(s, n, radii)
        r = radii[-1]
        dominance = min(dominance, rep.u_values[-1] / (abs(g) * (1 + r) / (1 - r)))
        if not rep.monotone_growth:
            dominance = min(dominance, 0.0)
        med = float(np.median(rep.tilde_bound_ratios))
        spread = max(spread, max(rep.tilde_bound_ratios) / med, med / min(rep.tilde_bound_ratios))
    params = dict(gamma=list(gamma), radii=list(radii))
    return [
        _ge("independence_growth_dominance", dominance, 0.99, **params),
        _le("independence_remainder_spread", spread, 2.0, **params),
    ]


def check_hp(measures, tol=DEFAULT_TOL, radii=DEFAULT_RADII) -> list[CheckResult]:
    worst = -math.inf
    for mu in measures.values():
        ev = SolutionEvaluator(mu, tol)
        bound = total_variation(mu) / TWO_PI
        for r in radii:
            worst = max(worst, integral_mean(ev, 1.0, r) - bound)
    out = [_le("hp_m1_minus_tv_bound", worst, 1e-8, radii=list(radii))]

    ev = SolutionEvaluator(EXAMPLE_ONE, tol)
    parseval_radii = (0.5, 0.9, 0.99)
    means = [integral_mean(ev, 2.0, r) for r in parseval_radii]
    rel = max(abs(m / math.sqrt((1 + r * r) / (1 - r * r)) - 1.0)
              for m, r in zip(means, parseval_radii))
    out.append(_le("hp_m2_parseval_rel_error", rel, 1e-6, radii=list(parseval_radii)))
    out.append(_ge("hp_m2_growth_slope", growth_slope(parseval_radii, means), 0.4,
                   radii=list(parseval_radii)))
    return out


def run_suite(suite: str = "all", measure: AngularMeasure | None = None,
              tol: float = DEFAULT_TOL, aperture: float = DEFAULT_APERTURE,
              seed: int = 0, kernel: Callable = poisson_kernel) -> list[CheckResult]:
    """Run one suite (or all of them) and return the check results in a fixed order.

    ``kernel`` replaces the Poisson kernel in the kernel checks; the CLI's
    negative control passes a corrupted one.
    """
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    wanted = SUITES if suite == "all" else (suite,)
    atomic = measure if measure is not None else EXAMPLE_ONE
    classes = measure_classes(EXAMPLE_ONE)
    if measure is not None:
        classes["user"] = measure
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    if "kernel" in wanted:
        results.append(check_kernel_normalization(kernel))
        results.append(check_closed_form(rng, kernel))
        results.append(check_stability(rng))
    if "harmonic" in wanted:
        results.extend(check_mean_value(rng, classes, tol))
    if "sector" in wanted:
        fatou_measure = atomic if len(atomic.atoms) == 1 and atomic.is_nonnegative() else EXAMPLE_ONE
        results.extend(check_fatou(fatou_measure, tol, aperture))
        results.append(check_sector_bound(aperture=aperture))
    if "remainder" in wanted:
        results.append(check_remainder())
    if "independence" in wanted:
        results.extend(check_independence())
    if "hp" in wanted:
        results.extend(check_hp(classes, tol))
    return results
