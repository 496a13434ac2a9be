"""Time evolution: exact spectral propagation and an RK4 oracle on the nonlinear equation."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_part
from .model import Liouvillian, apply_full_generator
from .spectral import LiouvillianSpectrum, OverlapSet, SlowModePresent, overlaps

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_SOFT = -1e-9
POSITIVITY_HARD = -1e-6
DENOMINATOR_FLOOR = 1e-13
TRACE_DRIFT_LIMIT = 1e-7


class VanishingNorm(ArithmeticError):
    pass


class InvariantViolation(ArithmeticError):
    pass


@dataclass(frozen=True)
class StateTrajectory:
    times: np.ndarray
    states: np.ndarray  # (n_times, d, d)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def check_density_matrix(rho: np.ndarray, *, trace_tol: float = TRACE_TOL) -> float:
    """Validate one state or a stack; return the smallest eigenvalue seen.

    Negative eigenvalues between the soft and hard positivity limits are logged,
    beyond the hard limit they raise.
    """
    rho = np.asarray(rho)
    anti = np.linalg.norm(rho - np.conj(np.swapaxes(rho, -1, -2)), axis=(-2, -1))
    if np.any(anti > HERMITIAN_TOL):
        raise InvariantViolation(f"state not Hermitian (|rho - rho^dag| = {anti.max():.3e})")
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if np.any(np.abs(tr - 1) > trace_tol):
        raise InvariantViolation(f"trace deviates from 1 by {np.abs(tr - 1).max():.3e}")
    lam_min = float(np.linalg.eigvalsh(hermitian_part(rho)).min())
    if lam_min < POSITIVITY_HARD:
        raise InvariantViolation(f"state has eigenvalue {lam_min:.3e}")
    if lam_min < POSITIVITY_SOFT:
        log.warning("state has slightly negative eigenvalue %.3e", lam_min)
    return lam_min


def _mode_weights(spec: LiouvillianSpectrum, ov: OverlapSet, times: np.ndarray) -> np.ndarray:
    # factoring out exp(mu_1 t) keeps the weights bounded; it cancels on normalization
    shifted = spec.eigenvalues - spec.eigenvalues[0]
    return np.exp(np.outer(times, shifted)) * ov.coefficients


def propagate_spectral(
    spec: LiouvillianSpectrum, rho0: np.ndarray, times, *, validate: bool = False
) -> StateTrajectory:
    """rho(t) = sum_j exp(mu_j t) C_j rho_j / Tr(...), evaluated on ``times``."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    ov = overlaps(spec, rho0)
    weights = _mode_weights(spec, ov, times)
    unnorm = np.einsum("tj,jab->tab", weights, spec.right_modes)
    denom = np.trace(unnorm, axis1=1, axis2=2)
    if np.any(np.abs(denom) <= DENOMINATOR_FLOOR):
        raise VanishingNorm("normalization Tr(sum_j e^{mu_j t} C_j rho_j) vanished")
    states = unnorm / denom[:, None, None]
    if validate:
        check_density_matrix(states)
    return StateTrajectory(times, states)


def rk4_step(liouv: Liouvillian, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = apply_full_generator(liouv, rho)
    k2 = apply_full_generator(liouv, rho + 0.5 * dt * k1)
    k3 = apply_full_generator(liouv, rho + 0.5 * dt * k2)
    k4 = apply_full_generator(liouv, rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def propagate_ode(
    liouv: Liouvillian,
    rho0: np.ndarray,
    t_end: float,
    dt: float = 1e-3,
    *,
    save_every: int = 1,
    validate: bool = True,
) -> StateTrajectory:
    """Fixed-step classical RK4 on the full nonlinear master equation.

    The trace is renormalized after every step; a per-step drift above
    ``TRACE_DRIFT_LIMIT`` means ``dt`` is too large and raises.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    n_steps = int(round(t_end / dt))
    if not np.isclose(n_steps * dt, t_end, rtol=1e-9, atol=0):
        raise ValueError("t_end must be an integer multiple of dt")

    rho = np.array(rho0, dtype=complex)
    times, states = [0.0], [rho.copy()]
    for n in range(1, n_steps + 1):
        rho = rk4_step(liouv, rho, dt)
        tr = np.trace(rho)
        if abs(tr - 1) > TRACE_DRIFT_LIMIT:
            raise InvariantViolation(f"trace drifted by {abs(tr - 1):.3e} at step {n}; reduce dt")
        rho = rho / tr
        if n % save_every == 0 or n == n_steps:
            if validate:
                check_density_matrix(rho)
            times.append(n * dt)
            states.append(rho.copy())
    return StateTrajectory(np.array(times), np.array(states))


def richardson_error(liouv: Liouvillian, rho0: np.ndarray, t_end: float, dt: float = 1e-3) -> float:
    """Estimated terminal error of RK4 at step ``dt``, from a half-step rerun."""
    coarse = propagate_ode(liouv, rho0, t_end, dt, save_every=10**9, validate=False).final
    fine = propagate_ode(liouv, rho0, t_end, dt / 2, save_every=10**9, validate=False).final
    return float(np.linalg.norm(coarse - fine)) * 16.0 / 15.0


def mode_mixture(spec: LiouvillianSpectrum, ov: OverlapSet, t) -> np.ndarray:
    """M(t) = R3 (rho_3 - rho_1) + R4 exp(-(mu_3 - mu_4) t) (rho_4 - rho_1).

    Vectorized over ``t``; returns shape (len(t), d, d) for array input.
    """
    mu = spec.eigenvalues
    rho1, rho3, rho4 = spec.right_modes[0], spec.right_modes[2], spec.right_modes[3]
    t_arr = np.asarray(t, dtype=float)
    phase = np.exp(-(mu[2] - mu[3]) * t_arr)[..., None, None]
    return ov.ratio(3) * (rho3 - rho1) + ov.ratio(4) * phase * (rho4 - rho1)


def long_time_state(spec: LiouvillianSpectrum, ov: OverlapSet, t) -> np.ndarray:
    """rho_ss + M(t) exp(-(mu_1 - mu_3) t), valid when the slowest mode is absent."""
    if abs(ov.ratio(2)) > 1e-8:
        raise SlowModePresent(f"|C2/C1| = {abs(ov.ratio(2)):.3e}; long-time form does not apply")
    t_arr = np.asarray(t, dtype=float)
    envelope = np.exp(-(spec.eigenvalues[0] - spec.eigenvalues[2]) * t_arr)[..., None, None]
    return spec.right_modes[0] + mode_mixture(spec, ov, t_arr) * envelope
