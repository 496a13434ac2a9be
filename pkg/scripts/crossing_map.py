"""Crossing counts and unit-modulus roots on the (a, gamma1) plane left of the exceptional line."""

import argparse
from pathlib import Path

import numpy as np

from ptmpemba import ModelParams, locate_lep, scan_grid
from ptmpemba.boundary import Regime, classify_regions, edge_cells
from ptmpemba.cli import write_csv
from ptmpemba.model import IDENTITY, SIGMA_Z
from ptmpemba.mpemba import default_jobs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/crossing_map")
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--jobs", type=int, default=default_jobs())
    args = ap.parse_args()
    out = Path(args.out)

    rho_I, rho_II = (SIGMA_Z + IDENTITY) / 2, IDENTITY / 2
    template = ModelParams(1.0, 0.1, 1.0)
    g1 = np.linspace(0.05, 0.95, args.n)
    a_lep = np.array([locate_lep(template.with_(gamma1=g), 0.1, 3.0, tol=1e-8) for g in g1])
    a = np.linspace(0.2, a_lep.max(), args.n)

    cells = scan_grid(a, g1, template, rho_I, rho_II, jobs=args.jobs)
    regions = classify_regions(a, g1, template, rho_I, rho_II)
    shape = (len(a), len(g1))
    left = np.array([r.regime is Regime.LEFT for r in regions]).reshape(shape)
    analytic = np.array([r.circle_ok for r in regions]).reshape(shape)
    multi = np.array([(c.count or 0) >= 2 for c in cells]).reshape(shape)
    band = edge_cells(analytic, left) | edge_cells(multi, left)

    write_csv(
        out / "grid.csv",
        ["a", "gamma1", "count", "left_of_lep", "unit_modulus", "edge"],
        ([c.a, c.gamma1, c.count, l, u, e] for c, l, u, e in zip(cells, left.ravel(), analytic.ravel(), band.ravel())),
    )
    write_csv(out / "exceptional_line.csv", ["gamma1", "a_lep"], zip(g1, a_lep))
    mismatch = left & (analytic != multi)
    print(f"{left.sum()} cells left of the line; {mismatch.sum()} disagree; {(mismatch & ~band).sum()} off the edge band")


if __name__ == "__main__":
    main()
