"""Analytic crossing conditions from the long-time form of rho(t).

In the long-time regime the crossing condition Tr[(M^I)^2] = Tr[(M^II)^2]
is a quadratic  A X^2 + B X + C = 0  in X = exp(-(mu_3 - mu_4) tau) with

    A = T4 [(R4^I)^2 - (R4^II)^2]
    B = 2 P (R3^I R4^I - R3^II R4^II)
    C = T3 [(R3^I)^2 - (R3^II)^2]

Left of the LEP (mu_3, mu_4 complex conjugate) a real tau needs |X| = 1;
right of it (real spectrum) it needs 0 < X < 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ModelParams
from .spectral import (
    IMAG_THRESHOLD,
    LiouvillianSpectrum,
    OverlapSet,
    SlowModePresent,
    overlaps,
    spectrum_of,
)

LEADING_FLOOR = 1e-12
UNIT_TOL = 1e-6
REAL_TOL = 1e-9
ROOT_RTOL = 1e-9


class Regime(str, Enum):
    LEFT = "left_of_LEP"
    RIGHT = "right_of_LEP"


class ZeroProjection(ValueError):
    """C1 vanishes, so the ratios R_j = C_j / C1 are undefined."""


class DegenerateQuadratic(ArithmeticError):
    def __init__(self, msg: str, linear_root: complex | None = None):
        super().__init__(msg)
        self.linear_root = linear_root


class NoRealTau(ValueError):
    pass


class SingularSteadyState(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryInputs:
    T3: complex
    T4: complex
    P: complex
    R3_I: complex
    R4_I: complex
    R3_II: complex
    R4_II: complex
    regime: Regime

    def coefficients(self) -> tuple[complex, complex, complex]:
        a = self.T4 * (self.R4_I**2 - self.R4_II**2)
        b = 2 * self.P * (self.R3_I * self.R4_I - self.R3_II * self.R4_II)
        c = self.T3 * (self.R3_I**2 - self.R3_II**2)
        return a, b, c


@dataclass(frozen=True)
class BoundarySolution:
    x_plus: complex
    x_minus: complex
    discriminant: complex
    regime: Regime
    coefficients: tuple[complex, complex, complex]

    @property
    def roots(self) -> tuple[complex, complex]:
        return self.x_plus, self.x_minus

    def residual(self, x: complex) -> float:
        a, b, c = self.coefficients
        scale = abs(a) * abs(x) ** 2 + abs(b) * abs(x) + abs(c)
        return abs(a * x * x + b * x + c) / scale if scale else 0.0

    @property
    def on_unit_circle(self) -> tuple[bool, bool]:
        return tuple(abs(abs(x) - 1) < UNIT_TOL for x in self.roots)

    @property
    def in_unit_interval(self) -> tuple[bool, bool]:
        return tuple(_is_real(x) and 0 < x.real < 1 for x in self.roots)


def _is_real(x: complex) -> bool:
    return abs(x.imag) <= REAL_TOL * max(1.0, abs(x))


def regime_of(spec: LiouvillianSpectrum) -> Regime:
    return Regime.LEFT if abs(spec.eigenvalues[2].imag) > IMAG_THRESHOLD else Regime.RIGHT


def compute_inputs(
    spec: LiouvillianSpectrum,
    ov_I: OverlapSet,
    ov_II: OverlapSet,
    weight: np.ndarray | None = None,
) -> BoundaryInputs:
    """T3, T4, P and the overlap ratios; ``weight`` W gives the Tr[(...)(...) W] variants."""
    for name, ov in (("I", ov_I), ("II", ov_II)):
        if abs(ov[1]) < 1e-12:
            raise ZeroProjection(f"C1 of state {name} vanishes")
        if abs(ov.ratio(2)) > 1e-8:
            raise SlowModePresent(f"state {name} populates the slowest mode (|C2/C1|={abs(ov.ratio(2)):.2e})")
    if not (spec.trace_normalized[2] and spec.trace_normalized[3]):
        raise ValueError("modes 3 and 4 must carry unit trace for the long-time expansion")

    rho1, rho3, rho4 = spec.right_modes[0], spec.right_modes[2], spec.right_modes[3]
    d3, d4 = rho3 - rho1, rho4 - rho1
    w = np.eye(spec.dim) if weight is None else np.asarray(weight)
    return BoundaryInputs(
        T3=complex(np.trace(d3 @ d3 @ w)),
        T4=complex(np.trace(d4 @ d4 @ w)),
        P=complex(np.trace(d3 @ d4 @ w)),
        R3_I=complex(ov_I.ratio(3)),
        R4_I=complex(ov_I.ratio(4)),
        R3_II=complex(ov_II.ratio(3)),
        R4_II=complex(ov_II.ratio(4)),
        regime=regime_of(spec),
    )


def solve_x(inputs: BoundaryInputs) -> BoundarySolution:
    a, b, c = inputs.coefficients()
    if abs(a) <= LEADING_FLOOR:
        root = -c / b if abs(b) > LEADING_FLOOR else None
        raise DegenerateQuadratic("leading coefficient vanishes", root)
    disc = b * b - 4 * a * c
    sq = np.sqrt(complex(disc))
    x_plus = (-b + sq) / (2 * a)
    x_minus = (-b - sq) / (2 * a)
    # recover the root hit by cancellation from the product x+ x- = c/a
    if abs(x_plus) < abs(x_minus) and x_minus != 0:
        x_plus = c / (a * x_minus)
    elif abs(x_minus) < abs(x_plus) and x_plus != 0:
        x_minus = c / (a * x_plus)
    sol = BoundarySolution(complex(x_plus), complex(x_minus), complex(disc), inputs.regime, (a, b, c))
    worst = max(sol.residual(x) for x in sol.roots)
    if worst > ROOT_RTOL:
        raise ArithmeticError(f"quadratic root residual {worst:.2e} above {ROOT_RTOL:g}")
    return sol


def period(spec: LiouvillianSpectrum) -> float:
    """pi / |Im mu_3|, the repetition time of crossings left of the LEP."""
    return float(np.pi / abs(spec.eigenvalues[2].imag))


def predict_taus(
    sol: BoundarySolution,
    spec: LiouvillianSpectrum,
    *,
    t_max: float | None = None,
    amplitude_floor: float = 1e-12,
) -> list[float]:
    """Crossing times implied by the roots.

    Right of the LEP each root in (0, 1) gives one tau. Left of it, each unit-modulus
    root gives a periodic family tau_0 + k T; the family is cut off at ``t_max`` or,
    by default, once the envelope exp(-Re(mu_1 - mu_3) tau) drops below the floor.
    """
    mu = spec.eigenvalues
    taus: list[float] = []
    if sol.regime is Regime.RIGHT:
        rate = (mu[2] - mu[3]).real
        for x, ok in zip(sol.roots, sol.in_unit_interval):
            if ok:
                taus.append(float(-np.log(x.real) / rate))
    else:
        im3 = mu[2].imag
        T = period(spec)
        horizon = t_max if t_max is not None else -np.log(amplitude_floor) / (mu[0] - mu[2]).real
        for x, ok in zip(sol.roots, sol.on_unit_circle):
            if not ok:
                continue
            # X(tau) = exp(-2 i Im(mu_3) tau) = exp(i theta)
            tau0 = (-np.angle(x) / (2 * im3)) % T
            k = 0
            while tau0 + k * T <= horizon:
                taus.append(float(tau0 + k * T))
                k += 1
    if not taus:
        raise NoRealTau("no root yields a real, non-negative crossing time")
    return sorted(taus)


def solve_x_relative_entropy(spec: LiouvillianSpectrum, ov_I: OverlapSet, ov_II: OverlapSet) -> BoundarySolution:
    """Same quadratic with every trace weighted by rho_ss^{-1}."""
    lam = np.linalg.eigvalsh(spec.steady_state)
    if lam.min() <= 1e-10:
        raise SingularSteadyState(f"steady state has eigenvalue {lam.min():.3e}")
    return solve_x(compute_inputs(spec, ov_I, ov_II, weight=np.linalg.inv(spec.steady_state)))


@dataclass
class RegionCell:
    a: float
    gamma1: float
    regime: Regime | None = None
    x_plus: complex = complex("nan")
    x_minus: complex = complex("nan")
    circle_plus: bool = False
    circle_minus: bool = False
    interval_plus: bool = False
    interval_minus: bool = False
    status: str = "ok"

    @property
    def circle_ok(self) -> bool:
        return self.circle_plus or self.circle_minus


def classify_cell(params: ModelParams, rho_I, rho_II, relative_entropy: bool = False) -> RegionCell:
    cell = RegionCell(params.a, params.gamma1)
    try:
        spec = spectrum_of(params)
        ov_I, ov_II = overlaps(spec, rho_I), overlaps(spec, rho_II)
        if relative_entropy:
            sol = solve_x_relative_entropy(spec, ov_I, ov_II)
        else:
            sol = solve_x(compute_inputs(spec, ov_I, ov_II))
    except (ValueError, ArithmeticError) as exc:
        cell.status = f"{type(exc).__name__}: {exc}"
        return cell
    cell.regime = sol.regime
    cell.x_plus, cell.x_minus = sol.roots
    if sol.regime is Regime.LEFT:
        cell.circle_plus, cell.circle_minus = sol.on_unit_circle
    else:
        cell.interval_plus, cell.interval_minus = sol.in_unit_interval
    return cell


def classify_regions(a_values, g1_values, template: ModelParams, rho_I, rho_II, relative_entropy: bool = False):
    """Row-major (a, then gamma1) list of RegionCell."""
    out = []
    for a in a_values:
        for g1 in g1_values:
            try:
                params = template.with_(a=float(a), gamma1=float(g1))
            except ValueError as exc:
                out.append(RegionCell(float(a), float(g1), status=f"{type(exc).__name__}: {exc}"))
                continue
            out.append(classify_cell(params, rho_I, rho_II, relative_entropy))
    return out


def edge_cells(mask: np.ndarray, valid: np.ndarray | None = None) -> np.ndarray:
    """Cells having at least one valid 8-neighbour with a different mask value."""
    mask = np.asarray(mask, dtype=bool)
    valid = np.ones_like(mask) if valid is None else np.asarray(valid, dtype=bool)
    edge = np.zeros_like(mask)
    n, m = mask.shape
    for i in range(n):
        for j in range(m):
            if not valid[i, j]:
                continue
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    k, l = i + di, j + dj
                    if (di or dj) and 0 <= k < n and 0 <= l < m and valid[k, l] and mask[k, l] != mask[i, j]:
                        edge[i, j] = True
    return edge
