"""Seeded invariant checks across all modules, used by ``ptmpemba verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import boundary, dynamics, linalg, model, quantifiers, spectral
from .model import IDENTITY, SIGMA_Z, ModelParams

SEED = 20251015


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def qubit_liouvillian_reference(a: float, g1: float, g2: float) -> np.ndarray:
    """The 4x4 single-qubit L0 written out entry by entry."""
    h = -0.5 * (g1 + g2)
    return np.array(
        [
            [2 * a - g2, -1j, 1j, g1],
            [-1j, h, 0, 1j],
            [1j, 0, h, -1j],
            [g2, 1j, -1j, -2 * a - g1],
        ],
        dtype=complex,
    )


def random_params(rng: np.random.Generator, n_qubits: int = 1) -> ModelParams:
    g2 = rng.uniform(0.2, 2.0)
    return ModelParams(rng.uniform(0.05, 2.5), rng.uniform(0.0, 0.95) * g2, g2, n_qubits)


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_suppressed_state(rng: np.random.Generator, diagonal: bool) -> np.ndarray:
    """Single-qubit state with real-free coherences: r_x = 0."""
    r = rng.normal(size=3)
    r[0] = 0.0
    if diagonal:
        r[1] = 0.0
    r *= rng.uniform(0, 1) / max(np.linalg.norm(r), 1e-300)
    return model.bloch_state(r)


def _check(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, not a crashed report
        return CheckResult(name, False, f"raised {type(exc).__name__}: {exc}")
    return CheckResult(name, bool(ok), detail)


def check_eigendecomposition(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(1000):
        m = rng.uniform(-2, 2, (4, 4)) + 1j * rng.uniform(-2, 2, (4, 4))
        worst = max(worst, linalg.eigendecompose(m).max_residual)
    return worst <= linalg.RESIDUAL_RTOL, f"max relative residual {worst:.2e} over 1000 matrices"


def check_liouvillian_matrix(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(100):
        p = random_params(rng)
        ref = qubit_liouvillian_reference(p.a, p.gamma1, p.gamma2)
        worst = max(worst, float(np.abs(model.build_liouvillian(p).matrix - ref).max()))
    return worst <= 1e-14, f"max entry deviation {worst:.2e}"


def check_hermiticity_preservation(rng) -> tuple[bool, str]:
    for n in (1, 2, 3):
        if not spectral.hermiticity_preserved(model.build_liouvillian(random_params(rng, n))):
            return False, f"S conj(L0) S != L0 for N={n}"
    return True, "exact for N = 1, 2, 3"


def check_pt_symmetry(rng) -> tuple[bool, str]:
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(10):
            p = random_params(rng, n)
            worst = max(worst, model.pt_commutator_norm(model.build_hamiltonian(p), n))
    return worst < 1e-13, f"max |[H, PT]| {worst:.2e}"


def check_qubit_spectrum_structure(rng) -> tuple[bool, str]:
    mu_err = struct_err = 0.0
    for _ in range(100):
        g2 = rng.uniform(0.2, 2.0)
        p = ModelParams(rng.uniform(0.1, 2.0), rng.uniform(0.01, 0.99) * g2, g2)
        spec = spectral.spectrum_of(p)
        mu_err = max(mu_err, abs(spec.eigenvalues[1] + 0.5 * (p.gamma1 + p.gamma2)))
        r2 = spec.right_modes[1]
        struct_err = max(struct_err, abs(r2[0, 0]), abs(r2[1, 1]), abs(r2[0, 1] - r2[1, 0]))
    ok = mu_err <= 1e-10 and struct_err <= 1e-9
    return ok, f"mu2 error {mu_err:.2e}, rho2 structure error {struct_err:.2e}"


def check_biorthogonality_and_reconstruction(rng) -> tuple[bool, str]:
    bio = rec = 0.0
    for n in (1, 1, 1, 2):
        p = random_params(rng, n)
        spec = spectral.spectrum_of(p)
        bio = max(bio, spectral.biorthogonality_error(spec))
        for _ in range(25):
            rho = random_density(rng, p.dim)
            rec = max(rec, float(np.linalg.norm(spectral.reconstruct(spec, spectral.overlaps(spec, rho)) - rho)))
    return bio <= 1e-10 and rec <= 1e-9, f"biorthogonality {bio:.2e}, reconstruction {rec:.2e}"


def check_conjugation_closure(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(20):
        liouv = model.build_liouvillian(random_params(rng))
        worst = max(worst, spectral.conjugation_closure_residual(liouv, spectral.analyze(liouv)))
    return worst <= 1e-9, f"max residual {worst:.2e}"


def check_suppressed_slow_mode(rng) -> tuple[bool, str]:
    worst = c1_imag = 0.0
    for k in range(100):
        spec = spectral.spectrum_of(random_params(rng))
        ov = spectral.overlaps(spec, random_suppressed_state(rng, diagonal=k < 50))
        worst = max(worst, abs(ov[2]))
        c1_imag = max(c1_imag, abs(ov[1].imag))
    return worst < 1e-10 and c1_imag < 1e-10, f"max |C2| {worst:.2e}, max |Im C1| {c1_imag:.2e}"


def check_propagators(rng, n_configs: int = 3) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n_configs):
        p = random_params(rng)
        liouv = model.build_liouvillian(p)
        rho0 = random_density(rng, 2)
        ode = dynamics.propagate_ode(liouv, rho0, 10.0, 1e-3, save_every=100)
        exact = dynamics.propagate_spectral(spectral.analyze(liouv), rho0, ode.times, validate=True)
        worst = max(worst, float(quantifiers.trace_distance_series(exact.states - ode.states, 0).max()))
    return worst < 1e-6, f"max trace distance spectral vs RK4 {worst:.2e}"


def check_quadratic_roots(rng) -> tuple[bool, str]:
    rho_I = (SIGMA_Z + IDENTITY) / 2
    rho_II = IDENTITY / 2
    worst_res = worst_prod = 0.0
    for g1 in np.linspace(0.1, 0.9, 5):
        for a in np.linspace(0.3, 1.3, 5):
            spec = spectral.spectrum_of(ModelParams(a, g1, 1.0))
            sol = boundary.solve_x(
                boundary.compute_inputs(spec, spectral.overlaps(spec, rho_I), spectral.overlaps(spec, rho_II))
            )
            worst_res = max(worst_res, *(sol.residual(x) for x in sol.roots))
            if sol.regime is boundary.Regime.LEFT:
                worst_prod = max(worst_prod, abs(abs(sol.x_plus * sol.x_minus) - 1))
    ok = worst_res <= 1e-9 and worst_prod <= 1e-8
    return ok, f"root residual {worst_res:.2e}, ||x+ x-| - 1| {worst_prod:.2e}"


def check_invalid_params(rng) -> tuple[bool, str]:
    try:
        ModelParams(1.0, 1.5, 1.0)
    except model.InvalidParams:
        return True, "gamma1 > gamma2 rejected"
    return False, "gamma1 > gamma2 accepted"


def check_hermitian_vs_pt_counts(rng) -> tuple[bool, str]:
    from .mpemba import count_crossings

    rho_I = (SIGMA_Z + IDENTITY) / 2
    herm = count_crossings(ModelParams(0.0, 0.6, 1.0), rho_I, IDENTITY / 2).count
    pt = count_crossings(ModelParams(1.2, 0.6, 1.0), rho_I, IDENTITY / 2).count
    return herm == 0 and pt == 1, f"a=0: {herm} crossings, a=1.2: {pt} crossings"


CHECKS = [
    ("eigendecomposition residual", check_eigendecomposition),
    ("L0 matches explicit qubit form", check_liouvillian_matrix),
    ("Hermiticity preservation", check_hermiticity_preservation),
    ("PT symmetry of H", check_pt_symmetry),
    ("mu2 and rho2 structure", check_qubit_spectrum_structure),
    ("biorthogonality and reconstruction", check_biorthogonality_and_reconstruction),
    ("eigenpair conjugation closure", check_conjugation_closure),
    ("suppressed slow mode", check_suppressed_slow_mode),
    ("spectral vs RK4 propagation", check_propagators),
    ("quadratic root residuals", check_quadratic_roots),
    ("parameter validation", check_invalid_params),
    ("Hermitian vs PT crossing counts", check_hermitian_vs_pt_counts),
]


def run_all(seed: int = SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [_check(name, lambda fn=fn: fn(rng)) for name, fn in CHECKS]
