"""Write the plot-ready tables behind every figure into one directory.

Usage: python3 scripts/reproduce_figures.py [OUTDIR] [--jobs N]
"""

import argparse
from pathlib import Path

from ssr_reference.cli import RunConfig, run

FIGURES = {
    "optimal_state_M29.csv": dict(command="ansatz", M=29),
    "entanglement_vs_M.csv": dict(command="sweep", sweep_range=(1, 60)),
    "figure_of_merit.csv": dict(command="compare", sweep_range=(1, 60)),
    "shared_phase_N29.csv": dict(command="optimize-shared", M=29),
    "phase_zero_M29.csv": dict(command="phase", M=29, phases="zero", points=1024),
    "phase_linear_M29.csv": dict(command="phase", M=29, phases="linear", points=1024),
    "phase_random_M29.csv": dict(command="phase", M=29, phases="random", points=1024),
    "phase_kerr_M29.csv": dict(command="phase", M=29, phases="kerr", points=1024),
    "polynomials_M12.csv": dict(command="polys", M=12),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", nargs="?", default="figures")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, kwargs in FIGURES.items():
        if kwargs["command"] in ("sweep", "compare"):
            kwargs = dict(kwargs, jobs=args.jobs)
        run(RunConfig(output_path=str(outdir / name), **kwargs))
        print(f"wrote {outdir / name}")


if __name__ == "__main__":
    main()
