"""Comparison reference states and the figure of merit D.

``D = (E_opt - E) / E_opt`` measures how far a reference state falls short of
the optimal M-particle reference for one equally shared particle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import InvalidInputError, UndefinedMeritError
from .fock_core import TwoModeState, particle_entanglement_single, uniform_state
from .single_optimal import solve_recurrence

SUMMY_PEGG_EPSILON = 0.84


def _check_M(M):
    if int(M) != M or M < 0:
        raise InvalidInputError(f"M must be a nonnegative integer, got {M!r}")
    return int(M)


def sine_state(M, epsilon):
    """``amps[n] ~ sin[pi (n + eps)/(M + 2 eps)]``, real and normalized."""
    M = _check_M(M)
    n = np.arange(M + 1)
    return TwoModeState.from_amplitudes(np.sin(math.pi * (n + epsilon) / (M + 2 * epsilon)))


def berry_wiseman(M):
    return sine_state(M, 1.0)


def summy_pegg(M):
    # eps = 0.84 is tuned for M >~ 10 and used unchanged below that
    return sine_state(M, SUMMY_PEGG_EPSILON)


def two_mode_coherent(M):
    """``amps[n] ~ sqrt((M/2)^n / n!)`` truncated to ``n <= M``."""
    M = _check_M(M)
    if M == 0:
        return TwoModeState(0, [1.0])
    n = np.arange(M + 1)
    log_w = n * math.log(M / 2) - gammaln(n + 1)
    return TwoModeState.from_probs(np.exp(log_w - log_w.max()))


def binomial_state(M, p=0.5):
    M = _check_M(M)
    if not 0 < p < 1:
        raise InvalidInputError(f"p must lie in (0, 1), got {p!r}")
    if M <= 1000:
        probs = [math.comb(M, n) * p**n * (1 - p) ** (M - n) for n in range(M + 1)]
        return TwoModeState.from_probs(probs)
    n = np.arange(M + 1)
    log_w = (gammaln(M + 1) - gammaln(n + 1) - gammaln(M - n + 1)
             + n * math.log(p) + (M - n) * math.log1p(-p))
    return TwoModeState.from_probs(np.exp(log_w))


def shared_phase_state(M):
    return uniform_state(_check_M(M))


def optimal_reference(M):
    return solve_recurrence(_check_M(M)).state()


FAMILIES = {
    "optimal": optimal_reference,
    "berry-wiseman": berry_wiseman,
    "summy-pegg": summy_pegg,
    "coherent": two_mode_coherent,
    "binomial": binomial_state,
    "shared-phase": shared_phase_state,
}


def figure_of_merit(ancilla, M, optimal_ep=None):
    """Relative shortfall of ``ancilla`` against the optimal reference."""
    if ancilla.total != M:
        raise InvalidInputError(f"ancilla has {ancilla.total} particles, expected {M}")
    if M == 0:
        raise UndefinedMeritError("D is undefined for M = 0: the optimal entanglement is zero")
    if optimal_ep is None:
        optimal_ep = particle_entanglement_single(optimal_reference(M))
    return (optimal_ep - particle_entanglement_single(ancilla)) / optimal_ep


@dataclass(frozen=True)
class MeritEntry:
    label: str
    E_P: float
    D: float


@dataclass(frozen=True)
class MeritReport:
    M: int
    entries: tuple

    def by_label(self):
        return {e.label: e for e in self.entries}


def compare(M, families=None):
    """E_P and D of each named family at ``M``."""
    M = _check_M(M)
    names = list(FAMILIES) if families is None else list(families)
    unknown = [n for n in names if n not in FAMILIES]
    if unknown:
        raise InvalidInputError(f"unknown state families: {unknown}")
    optimal_ep = particle_entanglement_single(optimal_reference(M))
    entries = []
    for name in names:
        state = FAMILIES[name](M)
        ep = particle_entanglement_single(state)
        entries.append(MeritEntry(name, ep, figure_of_merit(state, M, optimal_ep)))
    return MeritReport(M, tuple(entries))
