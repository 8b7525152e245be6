"""Optimal ancillae for general system states.

Stationarity of the particle entanglement under the normalization constraint
requires the per-index quantity returned by :func:`lagrange_residual` to be
the same for every ancilla index. This module also solves the two tractable
special cases (one particle in both system and ancilla; a shared-phase system
with ``N = M``) and bounds the entanglement recovered by a large uniform
ancilla.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import InvalidInputError, NoRootError
from .fock_core import (
    TwoModeState,
    modal_entanglement,
    uniform_state,
)


@dataclass(frozen=True)
class GeneralSolution:
    M: int
    probs: np.ndarray = field(repr=False)
    shots: int
    max_stationarity_residual: float

    def state(self):
        return TwoModeState.from_probs(self.probs)


def lagrange_residual(system, ancilla, m):
    """Multiplier value implied by stationarity at ancilla index ``m``.

    ``sum_n |d_n|^2 [log2 p_{n+m} - log2 |d_n c_m|^2]``. Returns ``inf`` when
    ``|c_m|^2`` is zero (the log diverges there).
    """
    c = ancilla.probs
    d = system.probs
    if not 0 <= m <= ancilla.total:
        raise InvalidInputError(f"index {m} outside 0..{ancilla.total}")
    if c[m] <= 0:
        return math.inf
    p = np.convolve(d, c)
    total = 0.0
    for n, dn in enumerate(d):
        if dn > 0:
            total += dn * (math.log2(p[n + m]) - math.log2(dn * c[m]))
    return total


def lagrange_residuals(system, ancilla):
    return np.array([lagrange_residual(system, ancilla, m) for m in range(ancilla.total + 1)])


def stationarity_spread(system, ancilla):
    """``max_m - min_m`` of :func:`lagrange_residual`; zero at a stationary point."""
    values = lagrange_residuals(system, ancilla)
    return float(values.max() - values.min())


# --- N = M = 1 ----------------------------------------------------------------


def _check_pair(d0_sq, d1_sq):
    if not (d0_sq > 0 and d1_sq > 0):
        raise InvalidInputError("both system probabilities must be positive")
    if abs(d0_sq + d1_sq - 1) > 1e-12:
        raise InvalidInputError("system probabilities must sum to 1")


def _expanding_root(f, lo=1.0):
    """Root of an increasing ``f`` on ``(0, inf)`` by geometric bracketing."""
    a, b = lo, lo
    while f(a) > 0:
        a /= 2
        if a < 1e-300:
            raise NoRootError("could not bracket root from below", bracket=(a, lo))
    while f(b) < 0:
        b *= 2
        if b > 1e300:
            raise NoRootError("could not bracket root from above", bracket=(lo, b))
    if f(a) == 0:
        return a
    if f(b) == 0:
        return b
    return brentq(f, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def solve_n1m1(d0_sq, d1_sq):
    """Optimal ``x = |c_1/c_0|^2`` for one shared particle in system and ancilla.

    With ``r = d0_sq/d1_sq`` and ``y = r x`` the two stationarity conditions
    are equal when ``ln(1 + y) = r ln(1 + 1/y)``. The left side minus the right
    side increases from ``-inf`` to ``inf``, so the root is unique for every
    ``r > 0``.
    """
    _check_pair(d0_sq, d1_sq)
    r = d0_sq / d1_sq
    y = _expanding_root(lambda y: math.log1p(y) - r * math.log1p(1 / y))
    return y / r


def n1m1_ancilla(d0_sq, d1_sq):
    x = solve_n1m1(d0_sq, d1_sq)
    return TwoModeState.from_probs([1.0, x])


def ratio_relation_root(ratio):
    """Solve ``(2**x - 1)/x = ratio`` for ``x > 0``.

    The left side increases from ``ln 2`` (as ``x -> 0``) without bound, so
    ``ratio <= ln 2`` has no solution. Kept for comparison with
    :func:`solve_n1m1`; the two agree only at ``ratio = 1``.
    """
    if not ratio > math.log(2):
        raise NoRootError(f"(2^x - 1)/x > ln 2 for all x > 0; ratio {ratio!r} unreachable",
                          bracket=(0.0, math.inf))

    def f(x):
        return math.expm1(x * math.log(2)) / x - ratio

    return _expanding_root(f)


# --- shared-phase system with N = M ------------------------------------------


def _shoot_shared(M, c0):
    """Forward iteration of the sequential relation from ``|c_0|^2 = c0``.

    Returns ``(probs, total)``; ``probs`` is None if the partial sum reaches 1
    before the last index.
    """
    probs = np.empty(M + 1)
    probs[0] = c0
    partial = c0
    power = 1.0 / (M + 1)
    for m in range(M):
        if partial >= 1.0:
            return None, partial
        probs[m + 1] = probs[m] * ((1.0 - partial) / partial) ** power
        partial += probs[m + 1]
    return probs, partial


def solve_shared_phase(M, tol=1e-14):
    """Optimal ancilla for the ``N = M`` shared-phase system.

    Shoots on ``|c_0|^2`` within ``(1e-15, 1/(M+1)]``: too small a start leaves
    the total below one, too large a start overshoots.
    """
    if int(M) != M or M < 1:
        raise InvalidInputError("M must be a positive integer")
    M = int(M)

    def excess(c0):
        probs, total = _shoot_shared(M, c0)
        return 1.0 if probs is None else total - 1.0

    lo, hi = 1e-15, 1.0 / (M + 1)
    if not (excess(lo) < 0 <= excess(hi)):
        lo, hi = _scan_bracket(excess, lo, hi)
    shots = 2
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        shots += 1
        value = excess(mid)
        if value == 0.0:
            lo = hi = mid
            break
        if value > 0:
            hi = mid
        else:
            lo = mid

    candidates = []
    for c0 in {lo, hi}:
        probs, total = _shoot_shared(M, c0)
        if probs is not None:
            candidates.append((abs(total - 1.0), c0, probs))
    if not candidates:
        raise NoRootError(f"shared-phase shooting failed for M={M}", bracket=(lo, hi))
    err, _, probs = min(candidates, key=lambda t: t[0])
    if err > tol:
        raise NoRootError(
            f"shared-phase shooting reached |sum - 1| = {err:.3g} > {tol} for M={M}",
            bracket=(lo, hi),
        )
    probs = probs / probs.sum()
    spread = stationarity_spread(uniform_state(M), TwoModeState.from_probs(probs))
    return GeneralSolution(M, probs, shots, spread)


def _scan_bracket(f, lo, hi, points=2000):
    grid = np.geomspace(lo, hi, points)
    values = [f(x) for x in grid]
    for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if fa < 0 <= fb:
            return a, b
    raise NoRootError("no sign change of the shooting objective", bracket=(lo, hi))


# --- trial-state fit ----------------------------------------------------------


def trial_probs(M, A, epsilon):
    """Normalized ansatz-form distribution, or None if not admissible."""
    L = M + 2 * epsilon
    if L <= 0:
        return None
    n = np.arange(M + 1)
    q = A - np.cos(2 * math.pi * (n + epsilon) / L)
    if np.any(q < 0) or not q.sum() > 0:
        return None
    return q / q.sum()


def amplitude_overlap(p, q):
    """``sum sqrt(p q)``: inner product of real nonnegative amplitude vectors."""
    return float(np.sum(np.sqrt(np.asarray(p) * np.asarray(q))))


def fit_trial_state(M, target, start=(1.0, 1.5)):
    """Fit ``(A, eps)`` of the ansatz form to ``target`` by maximizing overlap.

    Nelder-Mead local search; parameter pairs giving a negative entry score
    ``-inf`` and are never returned.
    """
    target = np.asarray(target, dtype=float)
    if target.size != M + 1:
        raise InvalidInputError("target must have M + 1 entries")
    if abs(target.sum() - 1) > 1e-10 or np.any(target < 0):
        raise InvalidInputError("target must be a normalized distribution")

    def loss(x):
        q = trial_probs(M, x[0], x[1])
        if q is None:
            return math.inf
        return -amplitude_overlap(target, q)

    best = None
    x0 = np.asarray(start, dtype=float)
    for _ in range(4):
        res = minimize(loss, x0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 20000, "maxfev": 40000})
        if best is None or res.fun < best.fun - 1e-16:
            best = res
            x0 = res.x
        else:
            break
    if not math.isfinite(best.fun):
        raise NoRootError("no admissible trial state found from the start point")
    A, eps = (float(v) for v in best.x)
    return A, eps, -float(best.fun)


# --- infinite-ancilla bounds --------------------------------------------------


def infinite_ancilla_bounds(system, M):
    """``(X, X + Y)`` bracketing the particle entanglement with a uniform ancilla.

    ``X = (M+1-N)/(M+1) E_M`` comes from the sectors with ``N <= k <= M``;
    the remaining ``2N`` sectors add at most ``Y = 2N/(M+1) E_M``.
    """
    N = system.total
    if M < N:
        raise InvalidInputError(f"bounds need M >= N (got M={M}, N={N})")
    em = modal_entanglement(system)
    lower = (M + 1 - N) / (M + 1) * em
    upper = lower + 2 * N / (M + 1) * em
    return lower, upper
