"""Accessible entanglement under the local particle-number superselection rule
and the reference ancillae that maximize it."""

__version__ = "0.1.0"

from .errors import DegenerateInputError, InvalidInputError, NoRootError, UndefinedMeritError
from .fock_core import (
    SectorDecomposition,
    TwoModeState,
    entanglement_of_modes,
    modal_entanglement,
    particle_entanglement,
    particle_entanglement_single,
    sector_decompose,
    single_particle_state,
    uniform_state,
)
from .single_optimal import (
    AnsatzParams,
    PolynomialTable,
    RecurrenceSolution,
    ansatz_coefficients,
    ansatz_large_M,
    polynomial_table,
    recurrence_step,
    solve_ansatz_exact,
    solve_recurrence,
)
from .general_optimal import (
    GeneralSolution,
    fit_trial_state,
    infinite_ancilla_bounds,
    lagrange_residual,
    solve_n1m1,
    solve_shared_phase,
)
