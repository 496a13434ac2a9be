"""Right of the exceptional line: roots in (0, 1), predicted times and counted crossings (gamma2 = 0.5)."""

import argparse
from pathlib import Path

import numpy as np

from ptmpemba import ModelParams, overlaps, scan_grid, spectrum_of
from ptmpemba.boundary import NoRealTau, Regime, classify_regions, compute_inputs, predict_taus, solve_x
from ptmpemba.cli import write_csv
from ptmpemba.model import IDENTITY, bloch_state
from ptmpemba.mpemba import default_jobs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/band_map")
    ap.add_argument("--jobs", type=int, default=default_jobs())
    ap.add_argument("--swap", action="store_true", help="exchange the two initial states")
    args = ap.parse_args()

    rho_I, rho_II = bloch_state((0.0, -0.4, -0.6)), IDENTITY / 2
    if args.swap:
        rho_I, rho_II = rho_II, rho_I
    template = ModelParams(2.0, 0.1, 0.5)
    a = np.linspace(1.35, 3.0, 34)
    g1 = np.linspace(0.02, 0.48, 24)
    cells = scan_grid(a, g1, template, rho_I, rho_II, jobs=args.jobs)
    regions = classify_regions(a, g1, template, rho_I, rho_II)

    rows = []
    for c, r in zip(cells, regions):
        taus = []
        if r.regime is Regime.RIGHT and (r.interval_plus or r.interval_minus):
            spec = spectrum_of(template.with_(a=c.a, gamma1=c.gamma1))
            try:
                taus = predict_taus(solve_x(compute_inputs(spec, overlaps(spec, rho_I), overlaps(spec, rho_II))), spec)
            except NoRealTau:
                pass
        found = c.report.crossing_times if c.report else []
        pad = lambda xs: (list(xs) + [None, None])[:2]  # noqa: E731
        rows.append([c.a, c.gamma1, r.regime.value if r.regime else None, r.x_plus.real, r.x_minus.real,
                     r.interval_plus, r.interval_minus, c.count, *pad(taus), *pad(found)])
    write_csv(
        Path(args.out) / "band.csv",
        ["a", "gamma1", "regime", "x_plus", "x_minus", "plus_in_unit", "minus_in_unit", "count",
         "tau_pred_1", "tau_pred_2", "tau_found_1", "tau_found_2"],
        rows,
    )
    print(f"wrote {len(rows)} cells")


if __name__ == "__main__":
    main()
