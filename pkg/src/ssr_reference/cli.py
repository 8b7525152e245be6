"""Command line front end producing plot-ready CSV/JSON tables.

Every output starts with a metadata block (tool version and the full config)
followed by a header row and the data rows. CSV metadata lines begin with
``#``. Floats are written with 17 significant digits so they round-trip.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .errors import InvalidInputError, NoRootError
from .fock_core import TwoModeState, particle_entanglement_single
from .general_optimal import fit_trial_state, solve_shared_phase, trial_probs
from .phase_analysis import apply_kerr, phase_assignment, phase_difference_density
from .reference_zoo import FAMILIES, compare
from .single_optimal import (
    ansatz_coefficients,
    ansatz_large_M,
    polynomial_table,
    solve_ansatz_exact,
    solve_recurrence,
)

COMMANDS = ("optimize-single", "optimize-shared", "ansatz", "compare", "phase", "sweep", "polys")
EXIT_USAGE = 2
EXIT_NO_ROOT = 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    M: int = 29
    N: int | None = None
    tol: float = 1e-12
    points: int | None = None
    output_path: str | None = None
    format: str = "csv"
    seed: int = 0
    family: str | None = None
    phases: str = "zero"
    sweep_range: tuple | None = None
    jobs: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise InvalidInputError(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise InvalidInputError("--tol must be positive")
        if self.M < 0:
            raise InvalidInputError("--M must be nonnegative")
        if self.format not in ("csv", "json"):
            raise InvalidInputError("--format must be csv or json")
        if self.family is not None and self.family not in FAMILIES:
            raise InvalidInputError(f"unknown family {self.family!r}")
        if self.command == "phase" and self.points is not None and self.points < 4 * (self.M + 1):
            raise InvalidInputError(f"--points must be at least 4(M+1) = {4 * (self.M + 1)}")
        if self.command == "optimize-shared" and self.N is not None and self.N != self.M:
            raise InvalidInputError("optimize-shared solves the N = M case only")
        if self.sweep_range is not None:
            lo, hi = self.sweep_range
            if lo < 0 or hi < lo:
                raise InvalidInputError("--sweep-range needs 0 <= A <= B")
        if self.jobs < 1:
            raise InvalidInputError("--jobs must be positive")


@dataclass
class Table:
    columns: list
    rows: list
    metadata: dict


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return "%.17g" % value
    return str(value)


def render(table, fmt_name):
    if fmt_name == "json":
        payload = {
            "metadata": _jsonable(table.metadata),
            "columns": table.columns,
            "rows": [[_jsonable(v) for v in row] for row in table.rows],
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"
    out = io.StringIO()
    for key, value in table.metadata.items():
        if isinstance(value, dict):
            value = json.dumps(_jsonable(value), sort_keys=True)
        out.write(f"# {key}={fmt(value)}\n")
    out.write(",".join(table.columns) + "\n")
    for row in table.rows:
        out.write(",".join(fmt(v) for v in row) + "\n")
    return out.getvalue()


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else fmt(value)
    return value


def read_csv(text):
    """Parse output written by :func:`render` back into ``(metadata, columns, rows)``."""
    metadata, columns, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            metadata[key] = value
        elif columns is None:
            columns = line.split(",")
        else:
            rows.append([_parse(v) for v in line.split(",")])
    return metadata, columns, rows


def _parse(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _meta(config, **extra):
    # the destination path is left out so the content does not depend on it
    settings = {k: v for k, v in asdict(config).items() if k != "output_path"}
    meta = {"tool": "ssr_reference", "version": __version__, "config": settings}
    meta.update(extra)
    return meta


def cmd_optimize_single(config):
    sol = solve_recurrence(config.M, config.tol)
    ep = particle_entanglement_single(sol.state())
    rows = [[n, p] for n, p in enumerate(sol.probs)]
    return Table(["n", "prob"], rows,
                 _meta(config, beta=sol.beta, E_P=ep, boundary_residual=sol.boundary_residual))


def cmd_optimize_shared(config):
    sol = solve_shared_phase(config.M)
    A, eps, overlap = fit_trial_state(config.M, sol.probs)
    trial = trial_probs(config.M, A, eps)
    rows = [[n, p, q] for n, (p, q) in enumerate(zip(sol.probs, trial))]
    return Table(["n", "prob", "trial_prob"], rows,
                 _meta(config, A=A, epsilon=eps, overlap=overlap, shots=sol.shots,
                       stationarity_spread=sol.max_stationarity_residual))


def cmd_ansatz(config):
    params = solve_ansatz_exact(config.M, config.tol)
    exact = ansatz_coefficients(params)
    large = ansatz_large_M(config.M)
    numeric = solve_recurrence(config.M, config.tol).probs
    rows = [[n, e, l, r] for n, (e, l, r) in enumerate(zip(exact, large, numeric))]
    return Table(["n", "exact", "large_M", "recurrence"], rows,
                 _meta(config, A=params.A, B=params.B, epsilon=params.epsilon,
                       xi=params.xi, beta=params.beta))


def _m_values(config):
    if config.sweep_range is None:
        return [config.M]
    lo, hi = config.sweep_range
    return list(range(lo, hi + 1))


def _compare_rows(M, families):
    if M == 0:
        return []
    report = compare(M, families)
    return [[e.label, M, e.E_P, e.D] for e in report.entries]


def _map(func, args, jobs):
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, *zip(*args)))
    return [func(*a) for a in args]


def cmd_compare(config):
    families = None if config.family is None else [config.family]
    chunks = _map(_compare_rows, [(M, families) for M in _m_values(config)], config.jobs)
    rows = [row for chunk in chunks for row in chunk]
    return Table(["label", "M", "E_P", "D"], rows, _meta(config))


def _sweep_row(M, tol):
    from .fock_core import uniform_state

    sol = solve_recurrence(M, tol)
    return [M, sol.beta, particle_entanglement_single(sol.state()),
            particle_entanglement_single(uniform_state(M))]


def cmd_sweep(config):
    rows = _map(_sweep_row, [(M, config.tol) for M in _m_values(config)], config.jobs)
    return Table(["M", "beta", "E_P_optimal", "E_P_shared_phase"], rows, _meta(config))


def cmd_phase(config):
    M = config.M
    points = config.points if config.points is not None else max(512, 4 * (M + 1))
    family = config.family or "shared-phase"
    base = FAMILIES[family](M)
    probs = base.probs
    if config.phases == "kerr":
        state = apply_kerr(TwoModeState.from_probs(probs), math.pi / 2)
        meta = {"vartheta": math.pi / 2}
    else:
        thetas = phase_assignment(M, config.phases, config.seed)
        state = TwoModeState.from_probs(probs, thetas)
        meta = {"rng": "numpy.random.default_rng(PCG64)"} if config.phases == "random" else {}
    dens = phase_difference_density(state, points)
    rows = [[g, d] for g, d in zip(dens.grid, dens.density)]
    return Table(["delta", "density"], rows,
                 _meta(config, E_P=particle_entanglement_single(state),
                       integral=dens.integral(), **meta))


def cmd_polys(config):
    table = polynomial_table(config.M)
    rows = [[n, table.polys[n].degree(), " ".join(str(a) for a in table.coefficients(n))]
            for n in range(config.M + 1)]
    extra = {}
    if config.M >= 1:
        sol = solve_recurrence(config.M, config.tol)
        total = sum(table.evaluate(n, sol.beta) for n in range(config.M + 1))
        extra = {"beta": sol.beta, "P_M_at_beta": table.evaluate(config.M, sol.beta),
                 "sum_P_at_beta": total, "inverse_c0_sq": 1 / sol.probs[0]}
    return Table(["n", "degree", "coefficients_high_to_low"], rows, _meta(config, **extra))


HANDLERS = {
    "optimize-single": cmd_optimize_single,
    "optimize-shared": cmd_optimize_shared,
    "ansatz": cmd_ansatz,
    "compare": cmd_compare,
    "phase": cmd_phase,
    "sweep": cmd_sweep,
    "polys": cmd_polys,
}


def run(config):
    """Execute ``config`` and write its table; returns the rendered text."""
    config.validate()
    text = render(HANDLERS[config.command](config), config.format)
    if config.output_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def _sweep_range(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected A:B")
    try:
        return int(lo), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("A and B must be integers") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ssr-reference",
        description="Optimal reference states for accessible entanglement under the local "
                    "particle-number superselection rule.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--M", type=int, default=29, help="particles in the ancilla")
    parser.add_argument("--N", type=int, default=None, help="particles in the system")
    parser.add_argument("--tol", type=float, default=1e-12)
    parser.add_argument("--points", type=int, default=None, help="phase grid size")
    parser.add_argument("--out", dest="output_path", default=None, help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--family", choices=tuple(FAMILIES), default=None)
    parser.add_argument("--phases", choices=("zero", "linear", "random", "kerr"), default="zero")
    parser.add_argument("--sweep-range", type=_sweep_range, default=None, metavar="A:B")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(**vars(args))
    try:
        run(config)
    except NoRootError as exc:
        print(f"error: {exc} (bracket={exc.bracket})", file=sys.stderr)
        return EXIT_NO_ROOT
    except InvalidInputError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
