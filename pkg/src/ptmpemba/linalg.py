"""Dense complex linear algebra for small superoperators.

Everything here works on plain ``numpy`` arrays. Dimensions stay at or below
4**N for N <= 4 qubits, so dense LAPACK routines are both fast and accurate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

DEFECTIVE_CONDITION = 1e8
RESIDUAL_RTOL = 1e-9
LOG_FLOOR = 1e-12


class NonConvergence(np.linalg.LinAlgError):
    """The eigenvalue iteration failed or produced pairs outside the residual bound."""


class NotHermitian(ValueError):
    pass


def as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def is_hermitian(m: np.ndarray, rtol: float = 1e-10) -> bool:
    m = np.asarray(m)
    scale = max(1.0, float(np.linalg.norm(m)))
    return float(np.linalg.norm(m - dagger(m))) <= rtol * scale


@dataclass(frozen=True)
class EigenSystem:
    """Right/left eigenpairs of a (possibly non-normal) matrix.

    Columns of ``right`` and ``left`` are the eigenvectors. They are
    biorthogonal: ``left[:, i].conj() @ right[:, j] == delta_ij``.
    """

    values: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition_estimate: float
    max_residual: float

    @property
    def near_defective(self) -> bool:
        return self.condition_estimate > DEFECTIVE_CONDITION

    def __len__(self) -> int:
        return len(self.values)


def eigendecompose(m) -> EigenSystem:
    """Full eigensystem of a square complex matrix.

    Right vectors come back with unit 2-norm. Left vectors are the rows of the
    inverse eigenvector matrix, so biorthogonality holds by construction.
    Near an exceptional point the eigenvector matrix is ill-conditioned; that
    is reported through ``condition_estimate`` and never raised.
    """
    m = as_square(m)
    try:
        values, right = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc

    scale = max(float(np.linalg.norm(m)), np.finfo(float).tiny)
    residuals = np.linalg.norm(m @ right - right * values, axis=0)
    max_residual = float(residuals.max()) / scale
    if max_residual > RESIDUAL_RTOL:
        raise NonConvergence(f"eigenpair residual {max_residual:.3e} exceeds bound")

    cond = float(np.linalg.cond(right))
    try:
        left = dagger(np.linalg.inv(right))
    except np.linalg.LinAlgError:
        # exactly defective; fall back to the pseudo-inverse
        left = dagger(np.linalg.pinv(right))
        cond = np.inf
    if not np.isfinite(cond):
        cond = np.inf
    return EigenSystem(values, right, left, cond, max_residual)


def hermitian_eigenvalues(m, rtol: float = 1e-10) -> np.ndarray:
    """Real eigenvalues in descending order.

    Accepts a single matrix or a stack ``(..., d, d)``.
    """
    m = np.asarray(m, dtype=complex)
    scale = np.maximum(1.0, np.linalg.norm(m, axis=(-2, -1)))
    err = np.linalg.norm(m - dagger(m), axis=(-2, -1))
    if np.any(err > rtol * scale):
        raise NotHermitian(f"anti-Hermitian part {float(np.max(err)):.3e} too large")
    return np.linalg.eigvalsh(m)[..., ::-1]


def matrix_log_hermitian(m, floor: float = LOG_FLOOR) -> np.ndarray:
    if floor <= 0:
        raise ValueError("floor must be positive")
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise NotHermitian("matrix logarithm requires a Hermitian argument")
    w, v = np.linalg.eigh(hermitian_part(m))
    logm = (v * np.log(np.maximum(w, floor))) @ dagger(v)
    return hermitian_part(logm)


def kron(*mats) -> np.ndarray:
    if not mats:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(x) for x in mats))
