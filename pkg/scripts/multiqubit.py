"""Crossings for N = 2, 3, 4 qubits with collective gain and loss."""

import argparse
import time

import numpy as np

from ptmpemba import ModelParams, compare, spectrum_of
from ptmpemba.model import bloch_state


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma1", type=float, default=0.1)
    args = ap.parse_args()
    for n, a in ((2, 1.2), (3, 0.8), (4, 0.6)):
        t0 = time.perf_counter()
        p = ModelParams(a, args.gamma1, 1.0, n)
        rep = compare(spectrum_of(p), bloch_state(*[(0, 0, 1)] * n), np.eye(p.dim) / p.dim)
        print(f"N={n} a={a}: {rep.count} crossing(s) {[round(x, 4) for x in rep.crossing_times]} "
              f"[{time.perf_counter() - t0:.2f} s]")


if __name__ == "__main__":
    main()
