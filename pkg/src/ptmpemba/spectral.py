"""Eigenmodes of L0, overlap coefficients and the Liouvillian exceptional point."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import dagger, eigendecompose, hermitian_part
from .model import Liouvillian, ModelParams, build_liouvillian, swap_matrix, unvec, vec

TRACE_NORMALIZABLE = 1e-9
IMAG_THRESHOLD = 1e-8
SUPPRESSED_TOL = 1e-8


class NoBracket(ValueError):
    pass


class SlowModePresent(ValueError):
    """The slowest decaying mode is populated (C2 != 0)."""


@dataclass(frozen=True)
class LiouvillianSpectrum:
    params: ModelParams
    eigenvalues: np.ndarray
    right_modes: np.ndarray  # (m, d, d)
    left_modes: np.ndarray  # (m, d, d)
    trace_normalized: np.ndarray  # bool per mode
    steady_state: np.ndarray
    condition_estimate: float

    @property
    def defective_flag(self) -> bool:
        return self.condition_estimate > 1e8

    @property
    def dim(self) -> int:
        return self.steady_state.shape[0]

    @property
    def is_complex(self) -> bool:
        """True when some eigenvalue has a non-negligible imaginary part."""
        return bool(np.abs(self.eigenvalues.imag).max() > IMAG_THRESHOLD)

    @property
    def gap(self) -> complex:
        """mu_1 - mu_3, the decay rate of the leading surviving modes."""
        return self.eigenvalues[0] - self.eigenvalues[2]


@dataclass(frozen=True)
class OverlapSet:
    coefficients: np.ndarray

    def __getitem__(self, j: int) -> complex:
        """1-based access, C[1] is the steady-state overlap."""
        return self.coefficients[j - 1]

    def ratio(self, j: int) -> complex:
        return self[j] / self[1]


def descending_order(values: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Sort by real part (descending); near-equal real parts by imaginary part (descending)."""
    scale = max(1.0, float(np.abs(values).max()))
    idx = list(np.argsort(-values.real, kind="stable"))
    out: list[int] = []
    i = 0
    while i < len(idx):
        group = [idx[i]]
        j = i + 1
        while j < len(idx) and abs(values[idx[j]].real - values[idx[i]].real) <= tol * scale:
            group.append(idx[j])
            j += 1
        group.sort(key=lambda k: -values[k].imag)
        out.extend(group)
        i = j
    return np.array(out)


def _phase_factor(m: np.ndarray) -> complex:
    """Unit-modulus factor making the largest-magnitude entry real positive."""
    flat = m.reshape(-1)
    k = int(np.argmax(np.abs(flat)))
    return np.abs(flat[k]) / flat[k]


def analyze(liouv: Liouvillian) -> LiouvillianSpectrum:
    es = eigendecompose(liouv.matrix)
    order = descending_order(es.values)
    values = es.values[order]
    d = liouv.dim

    rights, lefts, traced = [], [], []
    for k in order:
        r = unvec(es.right[:, k], d)
        w = unvec(es.left[:, k], d)
        tr = np.trace(r)
        if abs(tr) > TRACE_NORMALIZABLE:
            c = 1.0 / tr
            traced.append(True)
        else:
            # unit-norm eigenvector already; only the phase is left free
            c = _phase_factor(r)
            traced.append(False)
        r = r * c
        w = w / np.conj(c)
        w = w / np.conj(np.vdot(w, r))
        rights.append(r)
        lefts.append(w)

    rights = np.array(rights)
    lefts = np.array(lefts)
    return LiouvillianSpectrum(
        params=liouv.params,
        eigenvalues=values,
        right_modes=rights,
        left_modes=lefts,
        trace_normalized=np.array(traced),
        steady_state=hermitian_part(rights[0]),
        condition_estimate=es.condition_estimate,
    )


def spectrum_of(params: ModelParams) -> LiouvillianSpectrum:
    return analyze(build_liouvillian(params))


def overlaps(spec: LiouvillianSpectrum, rho0: np.ndarray) -> OverlapSet:
    """C_j = Tr[omega_j^dagger rho0]."""
    rho0 = np.asarray(rho0, dtype=complex)
    return OverlapSet(np.einsum("jab,ab->j", np.conj(spec.left_modes), rho0))


def reconstruct(spec: LiouvillianSpectrum, ov: OverlapSet) -> np.ndarray:
    return np.einsum("j,jab->ab", ov.coefficients, spec.right_modes)


def require_suppressed(ov: OverlapSet, tol: float = SUPPRESSED_TOL) -> None:
    if abs(ov.ratio(2)) > tol:
        raise SlowModePresent(f"|C2/C1| = {abs(ov.ratio(2)):.3e} exceeds {tol:g}")


def max_imag(params: ModelParams) -> float:
    liouv = build_liouvillian(params)
    return float(np.abs(np.linalg.eigvals(liouv.matrix).imag).max())


def locate_lep(template: ModelParams, a_min: float, a_max: float, tol: float = 1e-10) -> float:
    """Bisect on a for the point where the spectrum of L0 becomes entirely real."""

    def complex_at(a: float) -> bool:
        return max_imag(template.with_(a=a)) > IMAG_THRESHOLD

    lo, hi = float(a_min), float(a_max)
    if not (complex_at(lo) and not complex_at(hi)):
        raise NoBracket(f"spectrum is not complex at a={lo} and real at a={hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if complex_at(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hermiticity_preserved(liouv: Liouvillian) -> bool:
    s = swap_matrix(liouv.dim)
    return bool(np.array_equal(s @ np.conj(liouv.matrix) @ s, liouv.matrix))


def conjugation_closure_residual(liouv: Liouvillian, spec: LiouvillianSpectrum) -> float:
    """Largest relative residual of (mu*, rho^dagger) as an eigenpair of L0."""
    scale = float(np.linalg.norm(liouv.matrix))
    worst = 0.0
    for mu, r in zip(spec.eigenvalues, spec.right_modes):
        rd = vec(dagger(r))
        res = np.linalg.norm(liouv.matrix @ rd - np.conj(mu) * rd) / (scale * np.linalg.norm(rd))
        worst = max(worst, float(res))
    return worst


def biorthogonality_error(spec: LiouvillianSpectrum) -> float:
    gram = np.einsum("iab,jab->ij", np.conj(spec.left_modes), spec.right_modes)
    return float(np.abs(gram - np.eye(len(gram))).max())
