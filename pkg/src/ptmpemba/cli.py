"""Command-line entry point: ``ptmpemba {spectrum,evolve,scan,multiqubit,verify}``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical/runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import classify_regions
from .config import ConfigError, RunConfig, build_config, load_document, merge
from .dynamics import propagate_spectral
from .mpemba import compare, default_jobs, scan_grid
from .quantifiers import distance_series
from .spectral import spectrum_of
from .verify import run_all

log = logging.getLogger("ptmpemba")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path: str | Path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_sidecar(path: str | Path, cfg: RunConfig, command: str) -> None:
    meta = {
        "command": command,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "config": cfg.to_dict(),
    }
    Path(f"{path}.meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def _out(cfg: RunConfig, key: str, default: str) -> str:
    return cfg.outputs.get(key) or default


def cmd_spectrum(cfg: RunConfig) -> int:
    a_values = cfg.grid_a.values() if cfg.grid_a else [cfg.params.a]
    rows, n_modes = [], None
    for a in a_values:
        spec = spectrum_of(cfg.params.with_(a=float(a)))
        mu = spec.eigenvalues
        n_modes = len(mu)
        row = [float(a)]
        for m in mu:
            row += [m.real, m.imag]
        rows.append(row + [spec.defective_flag])
    header = ["a"] + [f"{part}_mu{j + 1}" for j in range(n_modes) for part in ("re", "im")] + ["defective"]
    out = _out(cfg, "out", "spectrum.csv")
    write_csv(out, header, rows)
    write_sidecar(out, cfg, "spectrum")
    print(json.dumps({"rows": len(rows), "out": out}))
    return EXIT_OK


def _evolve(cfg: RunConfig, command: str) -> int:
    spec = spectrum_of(cfg.params)
    rho_I, rho_II = cfg.states()
    report = compare(spec, rho_I, rho_II, cfg.quantifier, cfg.crossing, check_suppressed=cfg.params.n_qubits == 1)
    t0, t1 = report.window
    times = np.linspace(t0, t1, cfg.crossing.samples)
    ref = spec.steady_state
    d1 = distance_series(cfg.quantifier, propagate_spectral(spec, rho_I, times).states, ref)
    d2 = distance_series(cfg.quantifier, propagate_spectral(spec, rho_II, times).states, ref)
    out = _out(cfg, "out", "trajectory.csv")
    write_csv(out, ["t", "D_I", "D_II", "delta"], zip(times, d1, d2, d1 - d2))
    write_sidecar(out, cfg, command)
    summary = {
        "quantifier": cfg.quantifier.value,
        "count": report.count,
        "crossing_times": report.crossing_times,
        "touches": report.touches,
        "window": [float(t0), float(t1)],
        "out": out,
    }
    if "report" in cfg.outputs:
        Path(cfg.outputs["report"]).write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary))
    return EXIT_OK


def cmd_evolve(cfg: RunConfig) -> int:
    return _evolve(cfg, "evolve")


def cmd_multiqubit(cfg: RunConfig) -> int:
    if cfg.params.n_qubits not in (2, 3, 4):
        raise ConfigError("params.n_qubits", "multiqubit runs need n_qubits in {2, 3, 4}")
    return _evolve(cfg, "multiqubit")


def cmd_scan(cfg: RunConfig, jobs: int) -> int:
    if cfg.grid_a is None or cfg.grid_gamma1 is None:
        raise ConfigError("grid", "scan needs both grid.a and grid.gamma1 axes")
    a_values, g1_values = cfg.grid_a.values(), cfg.grid_gamma1.values()
    rho_I, rho_II = cfg.states()
    cells = scan_grid(a_values, g1_values, cfg.params, rho_I, rho_II, cfg.quantifier, cfg.crossing, jobs=jobs)
    out = _out(cfg, "out", "scan.csv")
    write_csv(
        out,
        ["a", "gamma1", "count", "first_tau", "status"],
        ([c.a, c.gamma1, c.count, c.report.first_tau if c.report else None, c.status] for c in cells),
    )
    write_sidecar(out, cfg, "scan")

    regions = classify_regions(a_values, g1_values, cfg.params, rho_I, rho_II)
    bout = _out(cfg, "boundary", str(Path(out).with_name(Path(out).stem + "_boundary.csv")))
    write_csv(
        bout,
        ["a", "gamma1", "abs_x_plus", "abs_x_minus", "eq10_ok", "eq11_plus_ok", "eq11_minus_ok"],
        ([r.a, r.gamma1, abs(r.x_plus), abs(r.x_minus), r.circle_ok, r.interval_plus, r.interval_minus] for r in regions),
    )
    ok = sum(c.status == "ok" for c in cells)
    print(json.dumps({"cells": len(cells), "ok": ok, "out": out, "boundary": bout}))
    return EXIT_OK if ok >= 0.9 * len(cells) else EXIT_RUNTIME


def cmd_verify() -> int:
    results = run_all()
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptmpemba", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--a", type=float)
    common.add_argument("--gamma1", type=float)
    common.add_argument("--gamma2", type=float)
    common.add_argument("--n-qubits", type=int)
    common.add_argument("--quantifier", choices=["trace", "frobenius", "relative_entropy"])
    common.add_argument("--state-I", help="Bloch vector 'rx,ry,rz' of the first initial state")
    common.add_argument("--state-II", help="Bloch vector 'rx,ry,rz' of the second initial state")
    common.add_argument("--t-max", type=float)
    common.add_argument("--samples", type=int)
    common.add_argument("--a-grid", help="min:max:steps")
    common.add_argument("--gamma1-grid", help="min:max:steps")
    common.add_argument("--out")
    common.add_argument("--boundary-out")
    common.add_argument("--report")
    common.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("spectrum", parents=[common], help="eigenvalues of L0, optionally swept over a")
    sub.add_parser("evolve", parents=[common], help="distance trajectories for two initial states")
    scan = sub.add_parser("scan", parents=[common], help="crossing counts and analytic regions on a grid")
    scan.add_argument("--jobs", type=int, default=None, help="worker processes (default: $PTMPEMBA_JOBS or 1)")
    sub.add_parser("multiqubit", parents=[common], help="evolve for N = 2..4 qubits with tensor-power states")
    sub.add_parser("verify", help="run the invariant suite")
    return ap


def overrides_from_args(args) -> dict:
    doc: dict = {}
    params = {k: getattr(args, k) for k in ("a", "gamma1", "gamma2", "n_qubits") if getattr(args, k) is not None}
    if params:
        doc["params"] = params
    if args.quantifier:
        doc["quantifier"] = args.quantifier
    if args.state_I:
        doc["initial_state_I"] = args.state_I
    if args.state_II:
        doc["initial_state_II"] = args.state_II
    crossing = {}
    if args.t_max is not None:
        crossing["t_max"] = args.t_max
    if args.samples is not None:
        crossing["samples"] = args.samples
    if crossing:
        doc["crossing"] = crossing
    grid = {}
    if args.a_grid:
        grid["a"] = args.a_grid
    if args.gamma1_grid:
        grid["gamma1"] = args.gamma1_grid
    if grid:
        doc["grid"] = grid
    outputs = {k: v for k, v in (("out", args.out), ("boundary", args.boundary_out), ("report", args.report)) if v}
    if outputs:
        doc["outputs"] = outputs
    return doc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING)
    if args.command == "verify":
        return cmd_verify()

    try:
        doc = load_document(args.config) if args.config else {}
        cfg = build_config(merge(doc, overrides_from_args(args)))
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "evolve":
            return cmd_evolve(cfg)
        if args.command == "multiqubit":
            return cmd_multiqubit(cfg)
        if args.command == "scan":
            return cmd_scan(cfg, args.jobs if args.jobs is not None else default_jobs())
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, ValueError) as exc:
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
