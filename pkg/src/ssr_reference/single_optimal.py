"""Optimal M-particle reference state for one equally shared particle.

Three routes to the same distribution ``|c_n|^2``:

* :func:`solve_recurrence` iterates the stationarity recurrence from
  ``|c_0|^2`` and bisects on the Lagrange parameter ``beta`` until the upper
  boundary value ``|c_{M+1}|^2`` vanishes.
* :func:`solve_ansatz_exact` fixes the parameters of the trigonometric form
  ``|c_n|^2 = (A - cos[2 pi (n + eps)/(M + 2 eps)]) / B``.
* :func:`polynomial_table` builds the exact polynomials ``P_n(beta)`` with
  ``|c_n|^2 = P_n(beta) |c_0|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from scipy.optimize import brentq

from .errors import DegenerateInputError, InvalidInputError, NoRootError
from .fock_core import TwoModeState, particle_entanglement_single

BETA_BRACKET = (1.0 + 1e-9, 4.0)
BETA_SCAN_STEP = 0.25
BETA_SCAN_MAX = 8.0
MAX_POLY_M = 64


@dataclass(frozen=True)
class RecurrenceSolution:
    M: int
    probs: np.ndarray = field(repr=False)
    beta: float
    boundary_residual: float

    def state(self):
        return TwoModeState.from_probs(self.probs)


def recurrence_step(prev, curr, beta):
    """Next ``|c_{n+1}|^2`` from ``|c_{n-1}|^2`` and ``|c_n|^2``.

    The result may be negative, which means ``beta`` is infeasible.
    """
    denom = curr + prev
    if denom == 0:
        raise DegenerateInputError("recurrence step needs curr + prev > 0")
    return ((beta - 1.0) * curr * curr - curr * prev) / denom


def _shoot(M, beta):
    """Iterate from ``|c'_0|^2 = 1``.

    Returns ``(values, residual)`` where ``values`` holds ``|c'_0..M|^2`` and
    ``residual`` is ``|c'_{M+1}|^2``. If a coefficient at index ``<= M`` turns
    negative the trial is infeasible and ``values`` is None.
    """
    values = [1.0]
    prev, curr = 0.0, 1.0
    for n in range(M + 1):
        nxt = recurrence_step(prev, curr, beta)
        if n < M:
            if nxt <= 0.0:
                return None, -1.0
            values.append(nxt)
        prev, curr = curr, nxt
    return np.array(values), curr


def _boundary_sign(M, beta):
    values, residual = _shoot(M, beta)
    if values is None:
        return -1.0
    return residual


def _bracket(M):
    lo, hi = BETA_BRACKET
    if _boundary_sign(M, lo) < 0 < _boundary_sign(M, hi):
        return lo, hi
    beta = lo
    prev_sign = _boundary_sign(M, beta)
    while beta < BETA_SCAN_MAX:
        nxt = min(beta + BETA_SCAN_STEP, BETA_SCAN_MAX)
        sign = _boundary_sign(M, nxt)
        if prev_sign < 0 < sign:
            return beta, nxt
        beta, prev_sign = nxt, sign
    raise NoRootError(
        f"no sign change of the boundary residual for beta in [{lo}, {BETA_SCAN_MAX}]",
        bracket=(lo, BETA_SCAN_MAX),
    )


def solve_recurrence(M, tol=1e-12):
    """Optimal ancilla probabilities by shooting on ``beta``.

    Bisection runs until the bracket collapses to adjacent floats; the end
    with the smaller boundary residual is kept and must satisfy
    ``|c'_{M+1}|^2 < tol`` (relative to ``|c_0|^2``).
    """
    if int(M) != M or M < 0:
        raise InvalidInputError(f"M must be a nonnegative integer, got {M!r}")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    M = int(M)
    if M == 0:
        # no interior index, so beta is not determined
        return RecurrenceSolution(0, np.array([1.0]), math.nan, 0.0)

    lo, hi = _bracket(M)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _boundary_sign(M, mid) > 0:
            hi = mid
        else:
            lo = mid

    best = None
    for beta in (lo, hi):
        values, residual = _shoot(M, beta)
        if values is None:
            continue
        if best is None or abs(residual) < abs(best[2]):
            best = (beta, values, residual)
    if best is None or abs(best[2]) >= tol:
        raise NoRootError(
            f"bisection on beta did not reach |c_(M+1)|^2 < {tol} for M={M}",
            bracket=(lo, hi),
        )
    beta, values, residual = best
    total = values.sum()
    return RecurrenceSolution(M, values / total, beta, residual / total)


def recurrence_residuals(probs, beta):
    """Residual of the stationarity recurrence at each ``n``, scaled by ``|c_n|^4``."""
    c = np.concatenate(([0.0], np.asarray(probs, dtype=float), [0.0]))
    prev, cur, nxt = c[:-2], c[1:-1], c[2:]
    lhs = beta * cur**2
    rhs = cur**2 + prev * nxt + cur * (prev + nxt)
    return (lhs - rhs) / cur**2


# --- trigonometric ansatz -------------------------------------------------


@dataclass(frozen=True)
class AnsatzParams:
    """Parameters of ``|c_n|^2 = (A - cos[xi n + theta]) / B``."""

    M: int
    A: float
    B: float
    epsilon: float
    xi: float
    beta: float

    @classmethod
    def from_shape(cls, M, A, epsilon, B=None):
        """Fill in ``xi`` and ``beta``; ``B`` defaults to the normalizing sum."""
        xi = 2 * math.pi / (M + 2 * epsilon)
        if B is None:
            n = np.arange(M + 1)
            B = float(np.sum(A - np.cos(2 * math.pi * (n + epsilon) / (M + 2 * epsilon))))
        return cls(int(M), float(A), float(B), float(epsilon), xi, 4 * A * A)

    @property
    def theta(self):
        return 2 * math.pi * self.epsilon / (self.M + 2 * self.epsilon)

    def consistency(self):
        """Residuals of the three conditions tying ``A``, ``eps``, ``xi``, ``beta``."""
        return {
            "beta_xi": abs((self.beta - 1) - (2 * math.cos(self.xi) + 1)),
            "beta_A": abs(self.beta - 4 * self.A**2),
            "A_eps": abs(self.A - _lower_boundary_A(self.M, self.epsilon)),
        }


def ansatz_coefficients(params):
    """Evaluate the ansatz with the given ``B`` (no renormalization)."""
    if not params.B > 0:
        raise InvalidInputError("B must be positive")
    n = np.arange(params.M + 1)
    L = params.M + 2 * params.epsilon
    probs = (params.A - np.cos(2 * math.pi * (n + params.epsilon) / L)) / params.B
    if np.any(probs < 0):
        raise InvalidInputError(f"ansatz gives a negative probability for {params}")
    return probs


def _lower_boundary_A(M, eps):
    # |c_{-1}|^2 = 0
    return math.cos(2 * math.pi * (eps - 1) / (M + 2 * eps))


def _first_step_mismatch(eps, M):
    # |c_1|^2 = (beta - 1)|c_0|^2 with beta = 4 A^2 and A from the lower boundary
    L = M + 2 * eps
    A = _lower_boundary_A(M, eps)
    return (A - math.cos(2 * math.pi * (1 + eps) / L)) - (
        A - math.cos(2 * math.pi * eps / L)
    ) * (4 * A * A - 1)


def _first_step_mismatch_mp(eps, M):
    L = M + 2 * eps
    A = mpmath.cos(2 * mpmath.pi * (eps - 1) / L)
    return (A - mpmath.cos(2 * mpmath.pi * (1 + eps) / L)) - (
        A - mpmath.cos(2 * mpmath.pi * eps / L)
    ) * (4 * A * A - 1)


def _polish_touching_root(eps0, M):
    # double roots have no sign change; modified Newton in extended precision
    with mpmath.workdps(40):
        try:
            root = mpmath.findroot(lambda e: _first_step_mismatch_mp(e, M), eps0, solver="mnewton")
        except (ValueError, ZeroDivisionError):
            return None
        return float(root)


def ansatz_roots(M, tol=1e-12, grid=None):
    """All ``eps`` in ``(0, M/2 + 2)`` solving both boundary conditions.

    Sign changes of the mismatch are refined with Brent's method; local minima
    of its modulus without a sign change are checked for touching (double)
    roots. Returns a list of :class:`AnsatzParams`, including roots whose
    ansatz has negative entries (those are not admissible states).
    """
    if M < 1:
        raise InvalidInputError("the ansatz needs M >= 1")
    upper = M / 2 + 2
    if grid is None:
        grid = 4000 + 100 * M
    eps = np.linspace(0.0, upper, grid + 1)[1:-1]
    vals = np.array([_first_step_mismatch(e, M) for e in eps])
    found = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        found.append(brentq(_first_step_mismatch, eps[i], eps[i + 1], args=(M,), xtol=1e-15, rtol=1e-15))
    mags = np.abs(vals)
    for i in range(1, eps.size - 1):
        if mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]:
            if vals[i] == 0:
                found.append(eps[i])
            elif np.sign(vals[i - 1]) == np.sign(vals[i]) == np.sign(vals[i + 1]):
                root = _polish_touching_root(eps[i], M)
                if root is not None and eps[i - 1] <= root <= eps[i + 1]:
                    found.append(root)
    roots = []
    for root in sorted(found):
        if roots and abs(root - roots[-1].epsilon) < 1e-9:
            continue
        if abs(_first_step_mismatch(root, M)) < tol:
            roots.append(AnsatzParams.from_shape(M, _lower_boundary_A(M, root), root))
    return roots


def solve_ansatz_exact(M, tol=1e-12):
    """Ansatz parameters for the optimal state.

    Only roots with nonnegative probabilities are admissible. Roots that also
    satisfy ``beta - 1 = 2 cos(xi) + 1`` (so the ansatz solves the full
    recurrence, not just its two first rows) are preferred; ties are broken by
    the larger particle entanglement.
    """
    best, best_key = None, None
    for params in ansatz_roots(M, tol):
        if not params.B > 0:
            continue
        try:
            probs = ansatz_coefficients(params)
        except InvalidInputError:
            continue
        consistent = max(params.consistency().values()) < 1e-8
        ep = particle_entanglement_single(TwoModeState.from_probs(probs))
        key = (consistent, ep)
        if best_key is None or key > best_key:
            best, best_key = params, key
    if best is None:
        raise NoRootError(
            f"no admissible ansatz root for M={M} in eps window (0, {M / 2 + 2})",
            bracket=(0.0, M / 2 + 2),
        )
    return best


def ansatz_large_M(M):
    """Large-M form ``(2/(M+1)) sin^2[pi (n + 3/2)/(M + 3)]``, renormalized."""
    if M < 1:
        raise InvalidInputError("M must be at least 1")
    n = np.arange(M + 1)
    probs = 2 / (M + 1) * np.sin(math.pi * (n + 1.5) / (M + 3)) ** 2
    return probs / probs.sum()


def optimal_state(M, tol=1e-12):
    return solve_recurrence(M, tol).state()


def optimal_entanglement(M, tol=1e-12):
    return particle_entanglement_single(optimal_state(M, tol))


# --- exact polynomial series ------------------------------------------------

BETA = sympy.Symbol("beta")


@dataclass(frozen=True)
class PolynomialTable:
    M: int
    polys: tuple

    def coefficients(self, n):
        """Integer coefficients of ``P_n``, highest degree first."""
        return [int(a) for a in self.polys[n].all_coeffs()]

    def evaluate(self, n, beta):
        """``P_n(beta)`` evaluated exactly at the binary value of ``beta``."""
        x = Fraction(beta)
        acc = Fraction(0)
        for a in self.coefficients(n):
            acc = acc * x + a
        return float(acc)


def polynomial_table(M):
    """``P_0 .. P_M`` by exact iteration of the upward recurrence."""
    if int(M) != M or M < 0:
        raise InvalidInputError("M must be a nonnegative integer")
    if M > MAX_POLY_M:
        raise InvalidInputError(f"polynomial table limited to M <= {MAX_POLY_M}")
    prev = sympy.Poly(0, BETA, domain="ZZ")
    curr = sympy.Poly(1, BETA, domain="ZZ")
    polys = [curr]
    for _ in range(M):
        numer = (BETA - 1) * curr**2 - curr * prev
        quot, rem = sympy.div(numer, curr + prev)
        if not rem.is_zero:
            raise ArithmeticError("recurrence polynomial division is not exact")
        prev, curr = curr, sympy.Poly(quot, BETA, domain="ZZ")
        polys.append(curr)
    return PolynomialTable(int(M), tuple(polys))
