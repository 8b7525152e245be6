"""Two-mode fixed-number states and their particle entanglement.

A state of ``total`` particles shared between sites A and B is stored as the
amplitude vector ``amps[n]`` of ``|n, total - n>``. Everything here works in
coefficient space: the product of a system and an ancilla state is never
expanded into the full Hilbert space. Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

NORM_TOL = 1e-12
# sectors lighter than this are treated as empty
MIN_SECTOR_PROB = 1e-300


def _freeze(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TwoModeState:
    """Normalized state ``sum_n amps[n] |n, total-n>``.

    Reading a coefficient outside ``0..total`` returns zero, which encodes
    the boundary values ``c_{-1} = c_{total+1} = 0``.
    """

    total: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        if int(self.total) != self.total or self.total < 0:
            raise InvalidInputError(f"total must be a nonnegative integer, got {self.total!r}")
        amps = np.array(self.amps, dtype=complex).ravel()
        if amps.size != self.total + 1:
            raise InvalidInputError(
                f"expected {self.total + 1} amplitudes for total={self.total}, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidInputError("amplitudes must be finite")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidInputError(f"state is not normalized: sum |amps|^2 = {norm!r}")
        object.__setattr__(self, "total", int(self.total))
        object.__setattr__(self, "amps", _freeze(amps))

    @classmethod
    def from_amplitudes(cls, amps, normalize=True):
        amps = np.asarray(amps, dtype=complex).ravel()
        if normalize:
            norm = np.sqrt(np.sum(np.abs(amps) ** 2))
            if norm == 0:
                raise InvalidInputError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps.size - 1, amps)

    @classmethod
    def from_probs(cls, probs, phases=None):
        """Build a state with ``|amps|^2 = probs`` and optional phases."""
        probs = np.asarray(probs, dtype=float).ravel()
        if np.any(probs < 0):
            raise InvalidInputError("probabilities must be nonnegative")
        total = probs.sum()
        if total <= 0:
            raise InvalidInputError("probabilities sum to zero")
        amps = np.sqrt(probs / total).astype(complex)
        if phases is not None:
            amps = amps * np.exp(1j * np.asarray(phases, dtype=float))
        return cls(probs.size - 1, amps)

    @property
    def probs(self):
        return np.abs(self.amps) ** 2

    def coeff(self, n):
        if 0 <= n <= self.total:
            return self.amps[n]
        return 0j

    def prob(self, n):
        return abs(self.coeff(n)) ** 2

    def with_phases(self, phases):
        """Multiply ``amps[n]`` by ``exp(i phases[n])``."""
        phases = np.asarray(phases, dtype=float).ravel()
        if phases.size != self.total + 1:
            raise InvalidInputError("one phase per amplitude is required")
        return TwoModeState(self.total, self.amps * np.exp(1j * phases))


def uniform_state(total):
    """Equal-weight, zero-phase state over ``0..total``."""
    return TwoModeState(total, np.full(total + 1, 1 / np.sqrt(total + 1), dtype=complex))


def single_particle_state():
    return uniform_state(1)


@dataclass(frozen=True)
class Sector:
    k: int
    p: float
    weights: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SectorDecomposition:
    """Sectors of fixed particle number ``k`` at site A."""

    sectors: tuple

    @property
    def probs(self):
        return np.array([s.p for s in self.sectors])

    def __len__(self):
        return len(self.sectors)

    def __getitem__(self, k):
        return self.sectors[k]


def _check_normalized(state, name):
    if not isinstance(state, TwoModeState):
        raise InvalidInputError(f"{name} must be a TwoModeState")
    norm = float(np.sum(state.probs))
    if abs(norm - 1.0) > NORM_TOL:
        raise InvalidInputError(f"{name} is not normalized: {norm!r}")


def sector_decompose(system, ancilla):
    """Project ``system (x) ancilla`` onto sectors of fixed local number.

    Within sector ``k`` the A-side kets ``|n> (x) |k-n>`` are orthonormal, so
    the Schmidt weights are just the normalized moduli ``|d_n c_{k-n}|^2``.
    """
    _check_normalized(system, "system")
    _check_normalized(ancilla, "ancilla")
    d = system.probs
    c = ancilla.probs
    N, M = system.total, ancilla.total
    sectors = []
    for k in range(N + M + 1):
        lo, hi = max(0, k - M), min(N, k)
        terms = d[lo : hi + 1] * c[k - hi : k - lo + 1][::-1]
        p = float(terms.sum())
        if p < MIN_SECTOR_PROB:
            sectors.append(Sector(k, p, _freeze(np.empty(0))))
        else:
            sectors.append(Sector(k, p, _freeze(terms / p)))
    return SectorDecomposition(tuple(sectors))


def entanglement_of_modes(weights):
    """Shannon entropy (bits) of Schmidt weights, with ``0 log 0 = 0``."""
    w = np.asarray(weights, dtype=float).ravel()
    if np.any(w < 0):
        raise InvalidInputError("weights must be nonnegative")
    if w.size == 0:
        return 0.0
    if abs(w.sum() - 1.0) > 1e-9:
        raise InvalidInputError(f"weights must sum to 1, got {w.sum()!r}")
    nz = w[w > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def modal_entanglement(state):
    """Entanglement of modes of a two-mode state, ignoring the SSR."""
    return entanglement_of_modes(state.probs)


def particle_entanglement(system, ancilla):
    """Accessible entanglement ``sum_k p_k E_M(sector k)`` of system (x) ancilla."""
    total = 0.0
    for sector in sector_decompose(system, ancilla).sectors:
        if sector.weights.size:
            total += sector.p * entanglement_of_modes(sector.weights)
    return total


def _xlnx(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def particle_entanglement_single(ancilla):
    """Closed form of the particle entanglement for one equally shared particle."""
    _check_normalized(ancilla, "ancilla")
    c = np.concatenate(([0.0], ancilla.probs, [0.0]))  # c_{-1} .. c_{M+1}
    prev, cur = c[:-1], c[1:]
    total = np.sum(-2 * _xlnx(cur) + _xlnx(prev + cur))
    return float(max(0.0, total / (2 * np.log(2))))
