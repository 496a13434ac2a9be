"""Eigenvalues of the generator against a, and the exceptional point for each gamma1."""

import argparse
from pathlib import Path

import numpy as np

from ptmpemba import ModelParams, locate_lep, spectrum_of
from ptmpemba.cli import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/spectrum")
    ap.add_argument("--gamma1", type=float, default=0.5)
    ap.add_argument("--gamma2", type=float, default=1.0)
    args = ap.parse_args()
    out = Path(args.out)

    rows = []
    for a in np.linspace(0, 2, 401):
        mu = spectrum_of(ModelParams(a, args.gamma1, args.gamma2)).eigenvalues
        rows.append([a, *mu.real, *mu.imag])
    write_csv(out / "eigenvalues.csv", ["a"] + [f"re_mu{j}" for j in range(1, 5)] + [f"im_mu{j}" for j in range(1, 5)], rows)

    g1 = np.linspace(0.02, 0.98, 49) * args.gamma2
    lep = [locate_lep(ModelParams(0.1, g, args.gamma2), 0.1, 4.0) for g in g1]
    write_csv(out / "exceptional_line.csv", ["gamma1", "a_lep"], zip(g1, lep))
    here = locate_lep(ModelParams(0.1, args.gamma1, args.gamma2), 0.1, 4.0)
    print(f"a_LEP(gamma1={args.gamma1}, gamma2={args.gamma2}) = {here:.8f}")


if __name__ == "__main__":
    main()
