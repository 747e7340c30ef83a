"""Integral means M_p(u, r) and h^p diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AccuracyError, DomainError, ParameterError
from .measure import TWO_PI, total_variation
from .poisson import SolutionEvaluator

NODE_CAP = 2**20
REL_TOL = 1e-8
BOUNDED_SLOPE = 0.1


def _power_mean(values: np.ndarray, p: float) -> float:
    return math.fsum(np.abs(values) ** p) / values.size


def integral_mean(ev: SolutionEvaluator, p: float, r: float, nodes: int = 64) -> float:
    """((1/2pi) integral |u(r e^{i theta})|^p d theta)^(1/p) by the trapezoidal rule.

    Nodes are doubled (reusing earlier samples) until two successive values
    agree to 1e-8 relative; the finer value is returned.
    """
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p!r}")
    if not (0.0 < r < 1.0):
        raise DomainError(f"r must lie in (0, 1), got {r!r}")
    if nodes < 16 or nodes & (nodes - 1):
        raise ParameterError(f"nodes must be a power of two >= 16, got {nodes}")
    theta = TWO_PI * np.arange(nodes) / nodes
    samples = ev.evaluate(np.full(nodes, r), theta)
    prev = _power_mean(samples, p) ** (1.0 / p)
    while nodes < NODE_CAP:
        mids = TWO_PI * (np.arange(nodes) + 0.5) / nodes
        new = ev.evaluate(np.full(nodes, r), mids)
        merged = np.empty(2 * nodes)
        merged[0::2], merged[1::2] = samples, new
        samples, nodes = merged, 2 * nodes
        cur = _power_mean(samples, p) ** (1.0 / p)
        if abs(cur - prev) <= REL_TOL * abs(cur):
            return cur
        prev = cur
    raise AccuracyError(
        f"M_{p} at r={r} did not settle within {NODE_CAP} nodes", achieved=(prev, cur)
    )


@dataclass(frozen=True)
class MeanProfile:
    p: float
    radii: tuple[float, ...]
    means: tuple[float, ...]
    growth_slope: float
    verdict: str  # "bounded", "unbounded-trend" or "inconclusive"


def growth_slope(radii: Sequence[float], means: Sequence[float]) -> float:
    """Least-squares slope of log M against -log(1 - r)."""
    x = -np.log1p(-np.asarray(radii, dtype=float))
    y = np.log(np.asarray(means, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def hp_diagnostic(ev: SolutionEvaluator, p: float, radii: Sequence[float]) -> MeanProfile:
    radii = tuple(float(r) for r in radii)
    if len(radii) < 2:
        raise ParameterError("need at least two radii")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ParameterError("radii must be strictly increasing")
    if radii[-1] >= 1.0 - 1e-6 or radii[0] <= 0.0:
        raise DomainError("radii must lie in (0, 1 - 1e-6)")
    means = tuple(integral_mean(ev, p, r) for r in radii)
    if any(m == 0.0 for m in means):
        slope = 0.0
    else:
        slope = growth_slope(radii, means)
    tv_bound = total_variation(ev.measure) / TWO_PI
    monotone = all(b >= a - 10 * ev.tol for a, b in zip(means, means[1:]))
    if (p == 1 and means[-1] <= tv_bound + ev.tol) or slope < BOUNDED_SLOPE:
        verdict = "bounded"
    elif monotone:
        verdict = "unbounded-trend"
    else:
        verdict = "inconclusive"
    return MeanProfile(p, radii, means, slope, verdict)
