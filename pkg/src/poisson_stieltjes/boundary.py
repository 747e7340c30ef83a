"""Nontangential approach to the boundary.

Points are sampled inside Stolz sectors |theta - Theta| < c (1 - r) on a
schedule geometric in 1 - r, and the boundary value and decay rate of u are
fitted from those samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError
from .family import basis_angle, basis_function
from .measure import normalize_angle, wrap_angle
from .poisson import R_CUTOFF, DiskPoint, SolutionEvaluator


@dataclass(frozen=True)
class StolzSector:
    boundary_angle: float
    aperture: float = 1.0
    r_start: float = 0.5

    def __post_init__(self):
        if not self.aperture > 0:
            raise ParameterError(f"aperture must be positive, got {self.aperture!r}")
        if not (0.0 < self.r_start < 1.0):
            raise ParameterError(f"r_start must lie in (0, 1), got {self.r_start!r}")
        object.__setattr__(self, "boundary_angle", normalize_angle(self.boundary_angle))

    def contains(self, z: DiskPoint) -> bool:
        return abs(wrap_angle(z.theta - self.boundary_angle)) < self.aperture * (1.0 - z.r)


def sample_path(sector: StolzSector, count: int, zigzag: bool = False) -> tuple[list[DiskPoint], bool]:
    """Radii 1 - (1 - r_start) 2**-k, k = 0..count-1, inside the sector.

    With ``zigzag`` the angle alternates Theta +/- (c/2)(1 - r_k).  Returns
    the points and a flag that is True when the list was cut short at the
    near-boundary cutoff.
    """
    if count < 4:
        raise ParameterError(f"count must be >= 4, got {count}")
    pts = []
    truncated = False
    for k in range(count):
        gap = math.ldexp(1.0 - sector.r_start, -k)
        r = 1.0 - gap
        if r > R_CUTOFF:
            truncated = True
            break
        theta = sector.boundary_angle
        if zigzag:
            theta += (-1) ** k * 0.5 * sector.aperture * gap
        z = DiskPoint(r, theta)
        assert sector.contains(z)
        pts.append(z)
    return pts, truncated


@dataclass(frozen=True)
class LimitReport:
    limit_estimate: float
    decay_exponent: float
    max_abs_tail: float
    samples_used: int
    radii: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    truncated: bool = False


def estimate_limit(ev: SolutionEvaluator, sector: StolzSector, count: int = 24,
                   zigzag: bool = False) -> LimitReport:
    """Fit u ~ L + A (1 - r) along a nontangential path.

    L comes from least squares over the last half of the samples.  The
    decay exponent is the slope of log|u - L| against log(1 - r) over the
    same samples, with L replaced by 0 when |L| < ev.tol.
    """
    if count < 8:
        raise ParameterError(f"count must be >= 8, got {count}")
    pts, truncated = sample_path(sector, count, zigzag)
    if len(pts) < 8:
        raise DomainError("fewer than 8 samples before the near-boundary cutoff")
    r = np.array([p.r for p in pts])
    th = np.array([p.theta for p in pts])
    u = ev.evaluate(r, th)
    gap = 1.0 - r
    half = slice(len(pts) // 2, None)
    design = np.column_stack([np.ones(gap[half].size), gap[half]])
    (limit, _slope), *_ = np.linalg.lstsq(design, u[half], rcond=None)
    base = 0.0 if abs(limit) < ev.tol else limit
    resid = np.abs(u[half] - base)
    noise = 64 * np.finfo(float).eps * max(1.0, float(np.abs(u[half]).max()))
    keep = resid > noise
    if keep.sum() < 2:
        exponent = math.inf
    else:
        exponent = float(np.polyfit(np.log(gap[half][keep]), np.log(resid[keep]), 1)[0])
    quart = max(1, len(pts) // 4)
    return LimitReport(
        limit_estimate=float(limit),
        decay_exponent=exponent,
        max_abs_tail=float(np.abs(u[-quart:]).max()),
        samples_used=len(pts),
        radii=tuple(r.tolist()),
        values=tuple(u.tolist()),
        truncated=truncated,
    )


@dataclass(frozen=True)
class SectorCheck:
    holds: bool
    worst_ratio: float
    max_decay_ratio: float  # max of u_n(z)/(1 - r) over the tested points


def sector_bound(r: float, theta_gap: float) -> float:
    """(1 - r^2) / (4 r sin^2(gap/4)) with the gap on the principal branch."""
    s = math.sin(wrap_angle(theta_gap) / 4.0)
    return (1.0 - r * r) / (4.0 * r * s * s)


def verify_sector_bound(n: int, sector: StolzSector, r_grid: Sequence[float],
                        angles_per_radius: int = 9) -> SectorCheck:
    """Check u_n(z) <= (1 - r^2)/(4 r sin^2((Theta - theta_n)/4)) inside the sector.

    At every grid radius the test points spread evenly across the open
    sector cross-section.
    """
    gap = wrap_angle(sector.boundary_angle - basis_angle(n))
    if abs(gap) < 1e-15:
        raise DomainError(f"sector vertex coincides with theta_{n}; the bound degenerates")
    worst = 0.0
    decay = 0.0
    fracs = np.linspace(-1.0, 1.0, angles_per_radius + 2)[1:-1]
    for r in r_grid:
        if not (0.0 < r < 1.0):
            raise DomainError(f"grid radius {r!r} outside (0, 1)")
        half_width = sector.aperture * (1.0 - r)
        rhs = sector_bound(r, gap)
        for f in fracs:
            z = DiskPoint(r, sector.boundary_angle + f * half_width)
            if not sector.contains(z):
                continue
            un = basis_function(n, z)
            worst = max(worst, un / rhs)
            decay = max(decay, un / (1.0 - r))
    return SectorCheck(worst <= 1.0 + 1e-12, worst, decay)
