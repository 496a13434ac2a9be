"""Crossing detection between two relaxation trajectories, and grid scans of it."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import propagate_spectral
from .model import ModelParams
from .quantifiers import QuantifierKind, distance_series
from .spectral import LiouvillianSpectrum, overlaps, require_suppressed, spectrum_of

JOBS_ENV = "PTMPEMBA_JOBS"


class EqualStart(ValueError):
    """Both initial states start at the same distance from the steady state."""


@dataclass(frozen=True)
class CrossingConfig:
    t_min: float = 0.0
    t_max: float | None = None
    samples: int = 4000
    refine_tol: float = 1e-10
    amplitude_floor: float = 1e-12
    window_efolds: float = 15.0

    def __post_init__(self):
        if self.t_min < 0:
            raise ValueError("t_min must be >= 0")
        if self.t_max is not None and self.t_max <= self.t_min:
            raise ValueError("t_max must exceed t_min")
        if self.samples < 100:
            raise ValueError("samples must be >= 100")
        if self.refine_tol <= 0 or self.amplitude_floor <= 0:
            raise ValueError("refine_tol and amplitude_floor must be positive")

    def window(self, spec: LiouvillianSpectrum) -> tuple[float, float]:
        if self.t_max is not None:
            return self.t_min, self.t_max
        rate = abs(spec.gap.real)
        return self.t_min, self.t_min + self.window_efolds / rate


@dataclass
class MpembaReport:
    crossing_times: list[float]
    touches: list[float]
    quantifier: QuantifierKind
    window: tuple[float, float]
    initial_values: tuple[float, float]
    directions: list[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.crossing_times)

    @property
    def first_tau(self) -> float | None:
        return self.crossing_times[0] if self.crossing_times else None


class TrajectoryPair:
    """Quantifier values of two initial states, evaluated lazily at arbitrary times."""

    def __init__(self, spec, rho_I, rho_II, kind):
        self.spec = spec
        self.rho_I = np.asarray(rho_I, dtype=complex)
        self.rho_II = np.asarray(rho_II, dtype=complex)
        self.kind = QuantifierKind(kind)

    def values(self, times) -> tuple[np.ndarray, np.ndarray]:
        ref = self.spec.steady_state
        s1 = propagate_spectral(self.spec, self.rho_I, times).states
        s2 = propagate_spectral(self.spec, self.rho_II, times).states
        return distance_series(self.kind, s1, ref), distance_series(self.kind, s2, ref)

    def difference(self, t: float) -> tuple[float, float]:
        d1, d2 = self.values([t])
        return float(d1[0] - d2[0]), max(float(d1[0]), float(d2[0]))


def _bisect(pair: TrajectoryPair, lo: float, hi: float, s_lo: float, cfg: CrossingConfig) -> float:
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        diff, scale = pair.difference(mid)
        if abs(diff) <= cfg.refine_tol * max(scale, cfg.amplitude_floor):
            break
        if hi - lo <= 4 * np.finfo(float).eps * max(1.0, hi):
            break
        if np.sign(diff) == s_lo:
            lo = mid
        else:
            hi = mid
    return mid


def compare(
    spec: LiouvillianSpectrum,
    rho_I,
    rho_II,
    kind: QuantifierKind | str = QuantifierKind.TRACE,
    cfg: CrossingConfig | None = None,
    *,
    check_suppressed: bool = True,
) -> MpembaReport:
    """Count sign changes of D^I(t) - D^II(t) in the configured window.

    Sign changes on the sample grid are refined by bisection; crossings where
    both trajectories are below ``amplitude_floor`` are dropped as noise.
    The slow-mode check only applies to a single qubit, where C2 = 0 is exact.
    """
    cfg = cfg or CrossingConfig()
    kind = QuantifierKind(kind)
    if check_suppressed and spec.dim == 2:
        require_suppressed(overlaps(spec, rho_I))
        require_suppressed(overlaps(spec, rho_II))

    pair = TrajectoryPair(spec, rho_I, rho_II, kind)
    d0 = pair.values([0.0])
    start = (float(d0[0][0]), float(d0[1][0]))
    if abs(start[0] - start[1]) <= cfg.refine_tol * max(*start, cfg.amplitude_floor):
        raise EqualStart(f"initial distances coincide ({start[0]:.6g})")

    t0, t1 = cfg.window(spec)
    times = np.linspace(t0, t1, cfg.samples)
    d1, d2 = pair.values(times)
    delta = d1 - d2
    scale = np.maximum(np.maximum(d1, d2), cfg.amplitude_floor)
    signs = np.sign(delta)

    crossings, directions = [], []
    nz = np.flatnonzero(signs != 0)
    for i, j in zip(nz[:-1], nz[1:]):
        if signs[i] == signs[j]:
            continue
        tau = _bisect(pair, times[i], times[j], signs[i], cfg)
        _, amp = pair.difference(tau)
        if amp < cfg.amplitude_floor:
            continue
        crossings.append(float(tau))
        directions.append(int(signs[j]))

    touches = []
    small = np.abs(delta) <= cfg.refine_tol * scale
    for i in range(1, len(times) - 1):
        if not small[i] or signs[i - 1] != signs[i + 1] or signs[i - 1] == 0:
            continue
        if abs(delta[i]) <= abs(delta[i - 1]) and abs(delta[i]) <= abs(delta[i + 1]):
            if max(d1[i], d2[i]) >= cfg.amplitude_floor:
                touches.append(float(times[i]))

    return MpembaReport(crossings, touches, kind, (t0, t1), start, directions)


def count_crossings(params: ModelParams, rho_I, rho_II, kind=QuantifierKind.TRACE, cfg=None, **kw) -> MpembaReport:
    return compare(spectrum_of(params), rho_I, rho_II, kind, cfg, **kw)


@dataclass
class GridCell:
    a: float
    gamma1: float
    report: MpembaReport | None
    status: str = "ok"

    @property
    def count(self) -> int | None:
        return self.report.count if self.report is not None else None


def _evaluate_cell(job) -> GridCell:
    a, g1, template, rho_I, rho_II, kind, cfg = job
    try:
        params = template.with_(a=float(a), gamma1=float(g1))
        report = compare(spectrum_of(params), rho_I, rho_II, kind, cfg)
        return GridCell(float(a), float(g1), report)
    except (ValueError, ArithmeticError) as exc:
        return GridCell(float(a), float(g1), None, f"{type(exc).__name__}: {exc}")


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def scan_grid(
    a_values,
    g1_values,
    template: ModelParams,
    rho_I,
    rho_II,
    kind: QuantifierKind | str = QuantifierKind.TRACE,
    cfg: CrossingConfig | None = None,
    jobs: int | None = None,
) -> list[GridCell]:
    """Evaluate every (a, gamma1) cell; row-major over a, then gamma1.

    Cell failures are recorded in ``GridCell.status`` and never abort the scan.
    """
    cfg = cfg or CrossingConfig()
    kind = QuantifierKind(kind)
    work = [(a, g1, template, rho_I, rho_II, kind, cfg) for a in a_values for g1 in g1_values]
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1:
        return [_evaluate_cell(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_cell, work, chunksize=max(1, len(work) // (4 * jobs))))
