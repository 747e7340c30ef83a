"""Gauss rules and adaptive quadrature for the Cantor distribution.

The Cantor distribution ``mu`` on [0, 1] is self-similar:

    mu = 1/2 mu o S0^-1 + 1/2 mu o S1^-1,   S0(x) = x/3,  S1(x) = (x + 2)/3.

Its moments therefore satisfy an exact rational recursion, which we use to
build an n-point Gauss rule (Chebyshev algorithm in exact arithmetic, then
Golub-Welsch).  On a level-k cylinder the restricted measure is the same
distribution scaled into an interval of length 3**-k with mass 2**-k, so one
rule serves every cylinder.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .errors import AccuracyError

DEFAULT_NODES = 10
MAX_DEPTH = 60
# total cylinders visited per call; a hard stop for integrands that never settle
MAX_CYLINDERS = 200_000


@lru_cache(maxsize=None)
def cantor_moments(count: int) -> tuple[Fraction, ...]:
    """Exact moments E[x**k], k = 0..count-1, of the Cantor distribution."""
    moments = [Fraction(1)]
    for k in range(1, count):
        # ((x+2)/3)^k contains m_k itself; move it to the left-hand side.
        lower = sum(comb(k, j) * 2 ** (k - j) * moments[j] for j in range(k))
        scale = Fraction(1, 3**k)
        moments.append(scale * Fraction(1, 2) * lower / (1 - scale))
    return tuple(moments)


def _recurrence(n: int) -> tuple[list[Fraction], list[Fraction]]:
    # Monic recurrence coefficients of the Cantor distribution mapped to
    # y = 2x - 1 on [-1, 1], via the Chebyshev algorithm on exact moments.
    xm = cantor_moments(2 * n)
    mom = [
        sum(comb(k, j) * 2**j * xm[j] * (-1) ** (k - j) for j in range(k + 1))
        for k in range(2 * n)
    ]
    alpha = [mom[1] / mom[0]]
    beta = [mom[0]]
    prev = [Fraction(0)] * (2 * n)
    cur = list(mom)
    for k in range(1, n):
        nxt = [Fraction(0)] * (2 * n)
        for ell in range(k, 2 * n - k):
            nxt[ell] = cur[ell + 1] - alpha[k - 1] * cur[ell] - beta[k - 1] * prev[ell]
        alpha.append(nxt[k + 1] / nxt[k] - cur[k] / cur[k - 1])
        beta.append(nxt[k] / cur[k - 1])
        prev, cur = cur, nxt
    return alpha, beta


@lru_cache(maxsize=None)
def gauss_cantor_rule(n: int = DEFAULT_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Nodes in [0, 1] and weights (summing to 1) of the n-point Gauss rule.

    The rule integrates polynomials of degree <= 2n - 1 exactly against the
    Cantor distribution.
    """
    alpha, beta = _recurrence(n)
    jac = np.diag([float(a) for a in alpha])
    off = np.sqrt([float(b) for b in beta[1:]])
    jac += np.diag(off, 1) + np.diag(off, -1)
    y, vecs = np.linalg.eigh(jac)
    weights = float(beta[0]) * vecs[0] ** 2
    weights /= weights.sum()
    nodes = (y + 1.0) / 2.0
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def cantor_batch_integrate(integrand, npoints, tol, admissible=None,
                           min_depth=0, max_depth=MAX_DEPTH,
                           n=DEFAULT_NODES, max_cylinders=MAX_CYLINDERS):
    """Integrate ``npoints`` functions against the Cantor distribution.

    ``integrand(idx, x)`` returns an array of shape ``(len(idx), len(x))``
    holding the values of functions ``idx`` at points ``x`` of [0, 1].
    ``admissible(idx, left, width)`` may veto acceptance of a cylinder for
    some functions (a priori resolution test).

    Recursion follows the self-similar splitting.  Each cylinder carries an
    error budget; children get half of the parent's.  A cylinder is accepted
    for a function once the parent rule and the two-child rule differ by at
    most the budget, and the two-child value is kept.  Returns the values and
    the summed error estimates.
    """
    nodes, weights = gauss_cantor_rule(n)
    out = np.zeros(npoints)
    err = np.zeros(npoints)
    if npoints == 0:
        return out, err

    def rule(idx, left, width, mass):
        vals = integrand(idx, left + width * nodes)
        return mass * (vals @ weights)

    all_idx = np.arange(npoints)
    stack = [(0.0, 1.0, 1.0, 0, all_idx, rule(all_idx, 0.0, 1.0, 1.0), tol)]
    unresolved = 0.0
    visited = 0
    while stack:
        visited += 1
        if visited > max_cylinders:
            pending = sum(float(np.max(np.abs(item[5]))) for item in stack) + unresolved
            raise AccuracyError(
                f"Cantor quadrature exceeded {max_cylinders} cylinders before reaching tol={tol:g}",
                achieved=float(err.max()) + pending,
            )
        left, width, mass, depth, idx, parent, budget = stack.pop()
        w3, m2 = width / 3.0, mass / 2.0
        right_left = left + 2.0 * w3
        q_left = rule(idx, left, w3, m2)
        q_right = rule(idx, right_left, w3, m2)
        refined = q_left + q_right
        est = np.abs(parent - refined)
        ok = est <= budget
        if depth < min_depth:
            ok[:] = False
        elif admissible is not None:
            ok &= admissible(idx, left, width)
        if ok.any():
            out[idx[ok]] += refined[ok]
            err[idx[ok]] += est[ok]
        rest = ~ok
        if not rest.any():
            continue
        if depth + 1 >= max_depth:
            out[idx[rest]] += refined[rest]
            err[idx[rest]] += est[rest]
            unresolved = max(unresolved, float(est[rest].max()))
            continue
        sub = idx[rest]
        stack.append((right_left, w3, m2, depth + 1, sub, q_right[rest], budget / 2))
        stack.append((left, w3, m2, depth + 1, sub, q_left[rest], budget / 2))
    if unresolved > 0.0:
        raise AccuracyError(
            f"Cantor quadrature hit depth {max_depth} before reaching tol={tol:g}",
            achieved=float(err.max()),
        )
    return out, err
