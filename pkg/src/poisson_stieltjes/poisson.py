"""Poisson kernel and Poisson-Stieltjes solutions on the unit disk."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _cantor
from .errors import DomainError, ParameterError
from .measure import TWO_PI, AngularMeasure, normalize_angle, wrap_angle

# Evaluations closer than this to the unit circle are refused.
R_CUTOFF = 1.0 - 1e-12
MEAN_VALUE_MARGIN = 1e-3
# Cantor cylinders are accepted only when their half-width is at most this
# fraction of the distance to the kernel's complex pole.
_POLE_RATIO = 0.5


@dataclass(frozen=True)
class DiskPoint:
    """Interior point ``z = r e^{i theta}`` of the unit disk."""

    r: float
    theta: float

    def __post_init__(self):
        r = float(self.r)
        if not (0.0 <= r <= R_CUTOFF):
            raise DomainError(f"r must lie in [0, 1 - 1e-12], got {r!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(abs(z), math.atan2(z.imag, z.real))

    @property
    def z(self) -> complex:
        return complex(self.r * math.cos(self.theta), self.r * math.sin(self.theta))


def poisson_kernel(r, theta):
    """P_r(theta) = (1 - r^2) / ((1 - r)^2 + 4 r sin^2(theta/2)).

    Same value as (1 - r^2)/(1 - 2r cos(theta) + r^2) without the
    cancellation near r = 1, theta = 0.  Broadcasts over arrays.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r >= 1.0) or np.any(r < 0.0):
        raise DomainError("poisson_kernel needs 0 <= r < 1")
    half = np.sin(wrap_angle(theta) / 2.0)
    out = (1.0 - r) * (1.0 + r) / ((1.0 - r) ** 2 + 4.0 * r * half * half)
    return float(out) if np.ndim(out) == 0 else out


def atomic_closed_form(theta0: float, z: DiskPoint) -> float:
    """Re((zeta0 + z)/(zeta0 - z)) with zeta0 = e^{i theta0}.

    Rotating by conj(zeta0) gives w = z conj(zeta0) = r e^{i alpha} and
    u = Re((1 + w)/(1 - w)) = (1 - |w|^2)/|1 - w|^2.  The real part of 1 - w
    is formed as (1 - r) + 2 r sin^2(alpha/2) so it never cancels near the pole.
    """
    alpha = wrap_angle(z.theta - theta0)
    r = z.r
    s = math.sin(alpha / 2.0)
    re = (1.0 - r) + 2.0 * r * s * s
    im = r * math.sin(alpha)
    return (1.0 - r) * (1.0 + r) / (re * re + im * im)


def arc_harmonic_measure(a: float, b: float, r, theta):
    """(1/2pi) * integral_a^b P_r(theta - t) dt for 0 <= b - a < 2pi.

    Closed form via the angle subtended at z by the arc's endpoints:
    omega = angle/pi - (b - a)/(2pi), with the angle taken in (0, 2pi).
    """
    z = np.asarray(r) * np.exp(1j * np.asarray(theta))
    ratio = (np.exp(1j * b) - z) / (np.exp(1j * a) - z)
    angle = np.remainder(np.angle(ratio), TWO_PI)
    return angle / math.pi - (b - a) / TWO_PI


@dataclass(frozen=True)
class SolutionEvaluator:
    """u(z) = (1/2pi) integral P_r(theta - t) dPhi(t) for a fixed measure."""

    measure: AngularMeasure
    tol: float = 1e-9

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol!r}")

    def __call__(self, z: DiskPoint) -> float:
        return evaluate_solution(self, z)

    def evaluate(self, r, theta) -> np.ndarray:
        """Vectorized evaluation on arrays of polar coordinates."""
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        shape = r.shape
        r, theta = r.ravel(), theta.ravel()
        if np.any(r < 0.0) or np.any(r > R_CUTOFF):
            raise DomainError("evaluation radius outside [0, 1 - 1e-12]")
        mu = self.measure
        u = np.zeros(r.shape)
        for atom in mu.atoms:
            u += atom.weight / TWO_PI * poisson_kernel(r, theta - atom.position)
        for p in mu.density_pieces:
            u += p.value * _arc(p.start, p.stop, r, theta)
        if mu.cantor_weight != 0.0:
            u += mu.cantor_weight * _cantor_poisson(
                r, theta, self.tol / 2.0 / abs(mu.cantor_weight)
            )
        return u.reshape(shape)


def _arc(a, b, r, theta):
    # split long arcs so that each call stays well inside the formula's range
    if b - a > math.pi:
        mid = 0.5 * (a + b)
        return arc_harmonic_measure(a, mid, r, theta) + arc_harmonic_measure(mid, b, r, theta)
    return arc_harmonic_measure(a, b, r, theta)


def _cantor_poisson(r: np.ndarray, theta: np.ndarray, tol: float) -> np.ndarray:
    # (1/2pi) integral P_r(theta - 2 pi x) dmu_Cantor(x), one value per point
    with np.errstate(divide="ignore"):
        pole = np.where(r > 0.0, -np.log(np.where(r > 0.0, r, 1.0)), np.inf)
    rr = r[:, None]
    th = theta[:, None]

    def integrand(idx, x):
        return poisson_kernel(rr[idx], th[idx] - TWO_PI * x[None, :]) / TWO_PI

    def admissible(idx, left, width):
        half = math.pi * width
        centre = TWO_PI * left + half
        gap = np.maximum(np.abs(wrap_angle(theta[idx] - centre)) - half, 0.0)
        return half <= _POLE_RATIO * np.hypot(gap, pole[idx])

    vals, _ = _cantor.cantor_batch_integrate(integrand, r.size, tol, admissible=admissible)
    return vals


def evaluate_solution(ev: SolutionEvaluator, z: DiskPoint) -> float:
    return float(ev.evaluate(z.r, z.theta))


def mean_value_residual(ev: SolutionEvaluator, z0: DiskPoint, rho: float, nodes: int) -> float:
    """|u(z0) - mean of u over the circle |z - z0| = rho| with equispaced nodes."""
    if nodes < 8:
        raise ParameterError(f"nodes must be >= 8, got {nodes}")
    if not rho > 0:
        raise ParameterError(f"rho must be positive, got {rho!r}")
    if z0.r + rho > 1.0 - MEAN_VALUE_MARGIN:
        raise DomainError("mean-value circle reaches the boundary margin")
    phi = TWO_PI * np.arange(nodes) / nodes
    pts = z0.z + rho * np.exp(1j * phi)
    ring = ev.evaluate(np.abs(pts), np.angle(pts))
    centre = ev.evaluate(z0.r, z0.theta)
    return abs(float(centre) - math.fsum(ring) / nodes)
