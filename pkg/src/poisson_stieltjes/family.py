"""The singular family u_n and l1 series built from it.

u_n is the Poisson kernel with its pole at zeta_n = e^{i theta_n}, where
theta_n = pi (1 - 2**-n) increases to pi.  Series u = sum gamma_n u_n with
gamma in l1 are harmonic, vanish nontangentially off {theta_n} U {pi}, and
are truncated with the certified tail bound

    |u(z) - u*_m(z)| <= (1 + r)/(1 - r) * sum_{n > m} |gamma_n|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AccuracyError, DomainError, ParameterError
from .measure import TWO_PI, AngularMeasure, Atom
from .poisson import R_CUTOFF, DiskPoint, atomic_closed_form, poisson_kernel

MAX_TERMS = 10**6


def basis_angle(n: int) -> float:
    if n < 1:
        raise ParameterError(f"basis index must be >= 1, got {n}")
    return math.pi - math.ldexp(math.pi, -n)


def basis_function(n: int, z: DiskPoint) -> float:
    return atomic_closed_form(basis_angle(n), z)


@dataclass(frozen=True)
class CoefficientSequence:
    """l1 coefficients, either a finite list or gamma_n = scale * ratio**n."""

    entries: tuple[float, ...] | None = None
    ratio: float | None = None
    scale: float | None = None

    def __post_init__(self):
        if (self.entries is None) == (self.ratio is None):
            raise ParameterError("give either entries or a geometric ratio/scale")
        if self.entries is not None:
            vals = tuple(float(e) for e in self.entries)
            if not all(math.isfinite(v) for v in vals):
                raise DomainError("coefficients must be finite")
            object.__setattr__(self, "entries", vals)
        else:
            if not (0.0 < self.ratio < 1.0):
                raise DomainError(f"geometric ratio must lie in (0, 1), got {self.ratio!r}")
            scale = 1.0 if self.scale is None else float(self.scale)
            if not math.isfinite(scale):
                raise DomainError("geometric scale must be finite")
            object.__setattr__(self, "scale", scale)

    @classmethod
    def finite(cls, entries: Sequence[float]) -> "CoefficientSequence":
        return cls(entries=tuple(entries))

    @classmethod
    def geometric(cls, ratio: float, scale: float = 1.0) -> "CoefficientSequence":
        return cls(ratio=ratio, scale=scale)

    @property
    def is_finite(self) -> bool:
        return self.entries is not None

    @property
    def support_length(self) -> int | None:
        """Index of the last nonzero entry (None for generators)."""
        if self.entries is None:
            return None
        nz = [i for i, v in enumerate(self.entries, 1) if v != 0.0]
        return nz[-1] if nz else 0

    def __getitem__(self, n: int) -> float:
        if n < 1:
            raise ParameterError("coefficients are indexed from 1")
        if self.entries is not None:
            return self.entries[n - 1] if n <= len(self.entries) else 0.0
        return self.scale * self.ratio**n

    def head(self, m: int) -> np.ndarray:
        return np.array([self[n] for n in range(1, m + 1)])

    @property
    def norm_l1(self) -> float:
        if self.entries is not None:
            return math.fsum(abs(v) for v in self.entries)
        return abs(self.scale) * self.ratio / (1.0 - self.ratio)

    def tail(self, m: int) -> float:
        """sum_{n > m} |gamma_n|, exact for generators."""
        if self.entries is not None:
            return math.fsum(abs(v) for v in self.entries[m:])
        return abs(self.scale) * self.ratio ** (m + 1) / (1.0 - self.ratio)

    def truncation_index(self, factor: float, tol: float) -> int:
        """Smallest m with factor * tail(m) <= tol."""
        if self.entries is not None:
            for m in range(len(self.entries) + 1):
                if factor * self.tail(m) <= tol:
                    return m
            return len(self.entries)
        if self.scale == 0.0:
            return 0
        target = tol * (1.0 - self.ratio) / (factor * abs(self.scale))
        m = max(0, math.ceil(math.log(target) / math.log(self.ratio)) - 1)
        # guard against rounding in the logarithms
        while m > 0 and factor * self.tail(m - 1) <= tol:
            m -= 1
        while factor * self.tail(m) > tol:
            m += 1
            if m > MAX_TERMS:
                break
        return m


@dataclass(frozen=True)
class SeriesSolution:
    coefficients: CoefficientSequence

    def angles(self, m: int) -> np.ndarray:
        return np.array([basis_angle(n) for n in range(1, m + 1)])

    def partial_sum(self, z: DiskPoint, m: int) -> float:
        """u*_m(z) = sum_{n <= m} gamma_n u_n(z), summed in ascending n."""
        if m == 0:
            return 0.0
        gam = self.coefficients.head(m)
        terms = gam * poisson_kernel(z.r, z.theta - self.angles(m))
        return math.fsum(terms)


def evaluate_series(s: SeriesSolution, z: DiskPoint, tol: float) -> tuple[float, int]:
    """Truncated series value and the number of terms used.

    The truncation m is the smallest index for which the remainder bound
    ((1 + r)/(1 - r)) * sum_{n > m} |gamma_n| is at most ``tol``.
    """
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol!r}")
    factor = (1.0 + z.r) / (1.0 - z.r)
    m = s.coefficients.truncation_index(factor, tol)
    if m > MAX_TERMS:
        raise AccuracyError(
            f"series truncation needs more than {MAX_TERMS} terms",
            achieved=factor * s.coefficients.tail(MAX_TERMS),
        )
    return s.partial_sum(z, m), m


@dataclass(frozen=True)
class WitnessReport:
    n: int
    radii: tuple[float, ...]
    u_values: tuple[float, ...]
    tilde_values: tuple[float, ...]
    tilde_bound_ratios: tuple[float, ...]

    @property
    def fitted_constant(self) -> float:
        return max(self.tilde_bound_ratios)

    @property
    def monotone_growth(self) -> bool:
        return all(b > a for a, b in zip(self.u_values, self.u_values[1:]))


def independence_witness(s: SeriesSolution, n: int, r_grid: Sequence[float]) -> WitnessReport:
    """Growth of u along the radius to e^{i theta_n} and decay of u - gamma_n u_n.

    u(r e^{i theta_n}) blows up like gamma_n (1 + r)/(1 - r), while the rest
    of the series stays below C ||gamma|| (1 - r); the reported ratios
    |u~|/((1 - r) ||gamma||) estimate C along the grid.
    """
    coeffs = s.coefficients
    if not coeffs.is_finite:
        raise ParameterError("independence witness needs a finitely supported series")
    if coeffs[n] == 0.0:
        raise ParameterError(f"gamma_{n} is zero; u_{n} is not present in the series")
    radii = tuple(float(r) for r in r_grid)
    if any(not (0.0 < r <= R_CUTOFF) for r in radii):
        raise DomainError("witness radii must lie in (0, 1 - 1e-12]")
    m = coeffs.support_length
    theta = basis_angle(n)
    gn = coeffs[n]
    norm = coeffs.norm_l1
    u_vals, tilde, ratios = [], [], []
    for r in radii:
        z = DiskPoint(r, theta)
        total = s.partial_sum(z, m)
        others = math.fsum(
            coeffs[k] * basis_function(k, z) for k in range(1, m + 1) if k != n
        )
        u_vals.append(total)
        tilde.append(others)
        ratios.append(abs(others) / ((1.0 - r) * norm))
    return WitnessReport(n, radii, tuple(u_vals), tuple(tilde), tuple(ratios))


def singular_boundary_data(s: SeriesSolution, m: int) -> AngularMeasure:
    """Atomic datum sum_{n <= m} gamma_n Phi_{theta_n}: a 2pi gamma_n jump at each theta_n."""
    coeffs = s.coefficients
    if m < 0:
        raise ParameterError("truncation must be nonnegative")
    if coeffs.is_finite and m > len(coeffs.entries):
        raise ParameterError(f"m={m} exceeds the {len(coeffs.entries)} stored coefficients")
    return AngularMeasure(
        atoms=tuple(Atom(basis_angle(n), TWO_PI * coeffs[n]) for n in range(1, m + 1))
    )
