"""Trace-distance trajectories of the excited and maximally mixed states, with and without gain/loss."""

import argparse
from pathlib import Path

import numpy as np

from ptmpemba import ModelParams, compare, spectrum_of
from ptmpemba.cli import write_csv
from ptmpemba.dynamics import propagate_spectral
from ptmpemba.model import IDENTITY, SIGMA_Z
from ptmpemba.quantifiers import trace_distance_series


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/relaxation")
    ap.add_argument("--gamma1", type=float, default=0.6)
    ap.add_argument("--a", type=float, nargs="+", default=[0.0, 1.2])
    args = ap.parse_args()
    out = Path(args.out)

    rho_I, rho_II = (SIGMA_Z + IDENTITY) / 2, IDENTITY / 2
    for a in args.a:
        spec = spectrum_of(ModelParams(a, args.gamma1, 1.0))
        rep = compare(spec, rho_I, rho_II)
        t = np.linspace(0, 6, 1201)
        d1 = trace_distance_series(propagate_spectral(spec, rho_I, t).states, spec.steady_state)
        d2 = trace_distance_series(propagate_spectral(spec, rho_II, t).states, spec.steady_state)
        write_csv(out / f"a{a:g}.csv", ["t", "D_I", "D_II"], zip(t, d1, d2))
        print(f"a={a:g}: {rep.count} crossing(s) at {[round(x, 4) for x in rep.crossing_times]}")


if __name__ == "__main__":
    main()
