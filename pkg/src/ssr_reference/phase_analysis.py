"""Phase-difference densities and the Kerr phase-shift decomposition.

For a two-mode state with a fixed total number the joint phase density of the
two modes factorizes into a uniform marginal ``1/2pi`` times a density of the
phase difference ``delta``::

    density(delta) = |sum_n amps[n] exp(i n delta)|^2 / (2 pi)

The particle entanglement depends only on ``|amps|``, whereas this density
depends on the phases too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .fock_core import TwoModeState

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class PhaseDensity:
    grid: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)

    def integral(self):
        # periodic trapezoid on a uniform grid
        return float(np.sum(self.density) * TWO_PI / self.density.size)

    def peak(self):
        i = int(np.argmax(self.density))
        return float(self.grid[i]), float(self.density[i])

    def value_at(self, delta):
        i = int(round((delta % TWO_PI) / TWO_PI * self.grid.size)) % self.grid.size
        return float(self.density[i])


def _grid(points):
    return np.arange(points) * (TWO_PI / points)


def _phase_sums(amps, points):
    """``sum_n amps[n] exp(i n delta_k)`` for ``delta_k = 2 pi k / points``."""
    padded = np.zeros(points, dtype=complex)
    padded[: amps.size] = amps
    return np.fft.ifft(padded) * points


def phase_difference_density(ancilla, points):
    """Sample the phase-difference density on ``points`` uniform nodes."""
    if points < 4 * (ancilla.total + 1):
        raise InvalidInputError(
            f"need at least {4 * (ancilla.total + 1)} points for M={ancilla.total}, got {points}"
        )
    sums = _phase_sums(ancilla.amps, points)
    return PhaseDensity(_grid(points), np.abs(sums) ** 2 / TWO_PI)


@dataclass(frozen=True)
class JointPhaseDensity:
    """Joint density ``P(theta_A, theta_B) = uniform_marginal * difference(theta_A - theta_B)``."""

    ancilla: TwoModeState
    uniform_marginal: float
    difference_density: PhaseDensity

    def joint(self, theta_a, theta_b):
        """Direct evaluation of the joint density from the Fock amplitudes."""
        M = self.ancilla.total
        n = np.arange(M + 1)
        s = np.sum(self.ancilla.amps * np.exp(1j * (n * theta_a + (M - n) * theta_b)))
        return float(abs(s) ** 2 / TWO_PI**2)

    def factorized(self, theta_a, theta_b):
        n = np.arange(self.ancilla.total + 1)
        s = np.sum(self.ancilla.amps * np.exp(1j * n * (theta_a - theta_b)))
        return self.uniform_marginal * float(abs(s) ** 2 / TWO_PI)


def joint_phase_density_factor(ancilla, points=None):
    if points is None:
        points = 4 * (ancilla.total + 1)
    return JointPhaseDensity(ancilla, 1 / TWO_PI, phase_difference_density(ancilla, points))


def phase_assignment(M, kind, seed=0):
    """Phases ``theta_n`` for the demo assignments ``zero``, ``linear`` and ``random``."""
    n = np.arange(M + 1)
    if kind == "zero":
        return np.zeros(M + 1)
    if kind == "linear":
        return math.pi * n
    if kind == "random":
        return np.random.default_rng(seed).uniform(0.0, TWO_PI, M + 1)
    raise InvalidInputError(f"unknown phase assignment {kind!r}")


# --- Kerr decomposition -------------------------------------------------------


@dataclass(frozen=True)
class KerrDecomposition:
    """``exp(-i vartheta n(n-1)) = sum_k coeffs[k] exp(i n phi[k])`` for all ``n >= 0``."""

    J: int
    K: int
    vartheta: float
    phi: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    def reconstruct(self, n):
        n = np.asarray(n)
        return np.exp(1j * np.multiply.outer(n, self.phi)) @ self.coeffs

    def target(self, n):
        n = np.asarray(n)
        return np.exp(-1j * self.vartheta * n * (n - 1))

    def max_error(self, n_max=None):
        if n_max is None:
            n_max = 4 * self.K
        n = np.arange(n_max + 1)
        return float(np.max(np.abs(self.reconstruct(n) - self.target(n))))


def kerr_decomposition(J, K):
    """Phase-shift expansion of the Kerr factor for ``vartheta = pi J / K``.

    ``coeffs[j] = (1/K) sum_{n<K} exp(-i vartheta n(n-1)) exp(-i n phi_j)``;
    the choice of ``phi_0`` makes the Kerr factor times ``exp(-i n phi_0)``
    periodic in ``n`` with period ``K``, so this inverse DFT is exact.
    """
    if int(J) != J or int(K) != K or J < 1 or K < 1:
        raise InvalidInputError("J and K must be positive integers")
    J, K = int(J), int(K)
    if math.gcd(J, K) != 1:
        raise InvalidInputError(f"J={J} and K={K} share a common factor")
    vartheta = math.pi * J / K
    phi0 = ((J * (K - 1)) % 2) * math.pi / K
    phi = phi0 + TWO_PI * np.arange(K) / K
    n = np.arange(K)
    kerr = np.exp(-1j * vartheta * n * (n - 1))
    coeffs = np.exp(-1j * np.outer(phi, n)) @ kerr / K
    return KerrDecomposition(J, K, vartheta, phi, coeffs)


def apply_kerr(state, vartheta):
    """Multiply ``amps[n]`` by ``exp(-i vartheta n(n-1))``."""
    n = np.arange(state.total + 1)
    return TwoModeState(state.total, state.amps * np.exp(-1j * vartheta * n * (n - 1)))


def kerr_superposed_density(state, J, K, points):
    """Density of the Kerr-evolved state built as a sum of phase-shifted copies.

    Each term ``coeffs[k] exp(i N phi_k)`` shifts the phase sum of ``state`` by
    ``phi_k``; the copies are added coherently before squaring.
    """
    if points < 4 * (state.total + 1):
        raise InvalidInputError("grid too coarse for this state")
    dec = kerr_decomposition(J, K)
    n = np.arange(state.total + 1)
    grid = _grid(points)
    total = np.zeros(points, dtype=complex)
    for ck, phik in zip(dec.coeffs, dec.phi):
        total += ck * (np.exp(1j * np.outer(grid + phik, n)) @ state.amps)
    return PhaseDensity(grid, np.abs(total) ** 2 / TWO_PI)
