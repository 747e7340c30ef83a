"""Boundary data of bounded variation on the circle.

A boundary datum is stored as the signed measure ``dPhi`` it induces on
[0, 2pi]: finitely many atoms (jumps of Phi), a multiple of the Cantor
distribution rescaled by ``t = 2 pi x``, and a piecewise-constant density
(the absolutely continuous part, i.e. the a.e. derivative Phi').
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from . import _cantor
from .errors import AccuracyError, DomainError, ParameterError

TWO_PI = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Reduce an angle into [0, 2pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a value just below a multiple of 2pi can round up to 2pi
    if t >= TWO_PI:
        t = 0.0
    return t


def wrap_angle(delta):
    """Principal-branch reduction of an angle difference into (-pi, pi]."""
    delta = np.asarray(delta, dtype=float)
    reduced = np.remainder(delta + math.pi, TWO_PI) - math.pi
    reduced = np.where(reduced == -math.pi, math.pi, reduced)
    # leave in-range values untouched: adding pi would cost small angles their digits
    d = np.where((delta > -math.pi) & (delta <= math.pi), delta, reduced)
    return float(d) if d.ndim == 0 else d


@dataclass(frozen=True)
class Atom:
    """A jump of Phi: point mass ``weight`` at ``position``."""

    position: float
    weight: float

    def __post_init__(self):
        if not math.isfinite(self.weight) or not math.isfinite(self.position):
            raise DomainError(f"atom must be finite, got {self.position!r}, {self.weight!r}")
        object.__setattr__(self, "position", normalize_angle(float(self.position)))
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class DensityPiece:
    start: float
    stop: float
    value: float

    @property
    def length(self) -> float:
        return self.stop - self.start


@dataclass(frozen=True)
class PiecewiseConstant:
    """A step function on [0, 2pi]; zero outside its pieces."""

    pieces: tuple[DensityPiece, ...] = ()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for p in self.pieces:
            out = np.where((t >= p.start) & (t < p.stop), p.value, out)
        return float(out) if out.ndim == 0 else out

    def is_zero(self) -> bool:
        return all(p.value == 0.0 for p in self.pieces)


@dataclass(frozen=True)
class AngularMeasure:
    """Signed measure dPhi = atoms + cantor_weight * Cantor + density dt.

    Construction canonicalizes: atom positions are reduced into [0, 2pi),
    atoms sharing a position are merged, zero-weight atoms are dropped and
    the atoms are sorted by position.  Density pieces must be disjoint
    subintervals of [0, 2pi] with ``start < stop``.
    """

    atoms: tuple[Atom, ...] = ()
    cantor_weight: float = 0.0
    density_pieces: tuple[DensityPiece, ...] = field(default=())

    def __post_init__(self):
        merged: dict[float, float] = {}
        for a in self.atoms:
            if not isinstance(a, Atom):
                a = Atom(*a)
            merged[a.position] = merged.get(a.position, 0.0) + a.weight
        atoms = tuple(Atom(p, w) for p, w in sorted(merged.items()) if w != 0.0)
        object.__setattr__(self, "atoms", atoms)

        cw = float(self.cantor_weight)
        if not math.isfinite(cw):
            raise DomainError("cantor_weight must be finite")
        object.__setattr__(self, "cantor_weight", cw)

        pieces = []
        for p in self.density_pieces:
            if not isinstance(p, DensityPiece):
                p = DensityPiece(*map(float, p))
            if not (0.0 <= p.start < p.stop <= TWO_PI):
                raise DomainError(f"density interval [{p.start}, {p.stop}] not inside [0, 2pi]")
            if not math.isfinite(p.value):
                raise DomainError("density value must be finite")
            if p.value != 0.0:
                pieces.append(p)
        pieces.sort(key=lambda p: p.start)
        for a, b in zip(pieces, pieces[1:]):
            if b.start < a.stop:
                raise DomainError(f"density intervals overlap at {b.start}")
        object.__setattr__(self, "density_pieces", tuple(pieces))

    @classmethod
    def atom(cls, theta0: float, weight: float) -> "AngularMeasure":
        """Step datum with one jump; ``weight=2pi`` gives the Poisson kernel itself."""
        return cls(atoms=(Atom(theta0, weight),))

    @classmethod
    def cantor(cls, weight: float) -> "AngularMeasure":
        """``weight`` times the Cantor distribution; 1 and 2pi are both common normalizations."""
        return cls(cantor_weight=weight)

    @classmethod
    def density(cls, pieces: Sequence[tuple[float, float, float]]) -> "AngularMeasure":
        return cls(density_pieces=tuple(DensityPiece(*map(float, p)) for p in pieces))

    def __add__(self, other: "AngularMeasure") -> "AngularMeasure":
        # density pieces of the two operands must not overlap
        return AngularMeasure(
            atoms=self.atoms + other.atoms,
            cantor_weight=self.cantor_weight + other.cantor_weight,
            density_pieces=self.density_pieces + other.density_pieces,
        )

    def scaled(self, alpha: float) -> "AngularMeasure":
        return AngularMeasure(
            atoms=tuple(Atom(a.position, alpha * a.weight) for a in self.atoms),
            cantor_weight=alpha * self.cantor_weight,
            density_pieces=tuple(
                DensityPiece(p.start, p.stop, alpha * p.value) for p in self.density_pieces
            ),
        )

    __rmul__ = scaled

    @property
    def total_mass(self) -> float:
        """Signed mass of the whole circle."""
        return math.fsum(
            [a.weight for a in self.atoms]
            + [self.cantor_weight]
            + [p.value * p.length for p in self.density_pieces]
        )

    def is_nonnegative(self) -> bool:
        return (
            all(a.weight > 0 for a in self.atoms)
            and self.cantor_weight >= 0
            and all(p.value > 0 for p in self.density_pieces)
        )


@dataclass(frozen=True)
class CantorEval:
    value: float
    depth: int

    @property
    def guaranteed_error(self) -> float:
        return math.ldexp(1.0, -self.depth)


def cantor_eval(x: float, depth: int) -> CantorEval:
    """Cantor function with its a priori error bound.

    Ternary digits of ``x`` are read in exact rational arithmetic, so the
    bound ``2**-depth`` is rigorous for the floating-point input as given.
    """
    if not isinstance(depth, (int, np.integer)) or depth < 1:
        raise ParameterError(f"depth must be a positive integer, got {depth!r}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if x == 1.0:
        return CantorEval(1.0, depth)
    rem = Fraction(x)
    value = Fraction(0)
    half = Fraction(1, 2)
    for _ in range(depth):
        rem *= 3
        if rem >= 2:
            value += half
            rem -= 2
        elif rem >= 1:
            # middle third: phi is constant there
            value += half
            return CantorEval(float(value), depth)
        half /= 2
    return CantorEval(float(value), depth)


def cantor_function(x: float, depth: int = 53) -> float:
    """Cantor function value within absolute error ``2**-depth``."""
    return cantor_eval(x, depth).value


def total_variation(mu: AngularMeasure) -> float:
    return math.fsum(
        [abs(a.weight) for a in mu.atoms]
        + [abs(mu.cantor_weight)]
        + [abs(p.value) * p.length for p in mu.density_pieces]
    )


def derivative_a_e(mu: AngularMeasure) -> PiecewiseConstant:
    """The a.e. derivative Phi': the density part; singular parts contribute 0."""
    return PiecewiseConstant(mu.density_pieces)


def _as_vectorized(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def g(t):
        try:
            vals = np.asarray(f(t), dtype=float)
            if vals.shape == t.shape:
                return vals
        except (TypeError, ValueError):
            pass
        return np.array([f(float(s)) for s in t], dtype=float)

    return g


def stieltjes_integrate(mu: AngularMeasure, f: Callable, tol: float = 1e-10) -> float:
    """Integral of ``f`` over [0, 2pi] against dPhi, within ``tol``.

    Atoms are summed exactly.  The Cantor component is integrated by
    self-similar subdivision with a Gauss rule on each cylinder.  Each density
    piece goes through adaptive Gauss-Kronrod quadrature.  The tolerance is
    split evenly between the Cantor part and the density part.
    """
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol!r}")
    g = _as_vectorized(f)
    parts = []
    if mu.atoms:
        pos = np.array([a.position for a in mu.atoms])
        w = np.array([a.weight for a in mu.atoms])
        parts.extend(w * g(pos))

    if mu.cantor_weight != 0.0:
        cw = mu.cantor_weight
        budget = tol / 2.0 / abs(cw)
        vals, _ = _cantor.cantor_batch_integrate(
            lambda idx, x: g(TWO_PI * x)[None, :], 1, budget, min_depth=2
        )
        parts.append(cw * vals[0])

    if mu.density_pieces:
        share = tol / 2.0 / len(mu.density_pieces)
        for p in mu.density_pieces:
            val, abserr = integrate.quad(
                lambda s: float(g(np.array([s]))[0]), p.start, p.stop,
                epsabs=share / max(abs(p.value), 1e-300), epsrel=0.0, limit=500,
            )
            if abserr * abs(p.value) > share:
                raise AccuracyError(
                    f"density quadrature on [{p.start}, {p.stop}] stalled",
                    achieved=abserr * abs(p.value),
                )
            parts.append(p.value * val)
    return math.fsum(parts)
