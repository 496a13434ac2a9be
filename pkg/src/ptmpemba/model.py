"""PT-symmetric qubit Hamiltonian, thermal jump operators and the Liouvillian.

Basis convention: index 0 is the excited state |1> = (1, 0)^T, so that
sigma_z = diag(1, -1) and sigma_+ = |1><0|. Vectorization is column stacking,
vec(X) = (X11, X21, X12, X22)^T, under which vec(A X B) = (B^T kron A) vec(X).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import dagger, kron

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    a: float
    gamma1: float
    gamma2: float
    n_qubits: int = 1

    def __post_init__(self):
        if not all(np.isfinite([self.a, self.gamma1, self.gamma2])):
            raise InvalidParams("parameters must be finite")
        if self.a < 0:
            raise InvalidParams(f"a must be >= 0, got {self.a}")
        if self.gamma2 <= 0:
            raise InvalidParams(f"gamma2 must be > 0, got {self.gamma2}")
        if self.gamma1 < 0:
            raise InvalidParams(f"gamma1 must be >= 0, got {self.gamma1}")
        if self.gamma1 / self.gamma2 >= 1:
            raise InvalidParams(
                f"detailed balance requires gamma1/gamma2 < 1, got {self.gamma1 / self.gamma2:.6g}"
            )
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise InvalidParams(f"n_qubits must be a positive integer, got {self.n_qubits}")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def embed(op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """Place a single-qubit operator on ``site`` (0-based) with identity padding."""
    factors = [IDENTITY] * n_qubits
    factors[site] = op
    return kron(*factors)


def collective(op: np.ndarray, n_qubits: int) -> np.ndarray:
    return sum(embed(op, j, n_qubits) for j in range(n_qubits))


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    single = SIGMA_X + 1j * params.a * SIGMA_Z
    return collective(single, params.n_qubits)


def build_jumps(n_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Collective (raising, lowering) operators; (sigma_+, sigma_-) for one qubit."""
    if n_qubits < 1:
        raise InvalidParams("n_qubits must be >= 1")
    return collective(SIGMA_PLUS, n_qubits), collective(SIGMA_MINUS, n_qubits)


def parity(n_qubits: int) -> np.ndarray:
    return kron(*([SIGMA_X] * n_qubits))


def pt_commutator_norm(h: np.ndarray, n_qubits: int) -> float:
    """Frobenius norm of [H, PT], using (PT) psi = P conj(psi)."""
    p = parity(n_qubits)
    return float(np.linalg.norm(h @ p - p @ np.conj(h)))


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    return v.reshape(dim, dim, order="F")


def swap_matrix(dim: int) -> np.ndarray:
    """Permutation S with vec(X^dagger) = S conj(vec(X)) under column stacking."""
    s = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            s[i + j * dim, j + i * dim] = 1.0
    return s


@dataclass(frozen=True)
class Liouvillian:
    params: ModelParams
    matrix: np.ndarray
    hamiltonian: np.ndarray
    jumps: tuple[np.ndarray, np.ndarray]

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def rates(self) -> tuple[float, float]:
        return self.params.gamma1, self.params.gamma2


def build_liouvillian(params: ModelParams) -> Liouvillian:
    h = build_hamiltonian(params)
    jumps = build_jumps(params.n_qubits)
    eye = np.eye(params.dim, dtype=complex)
    mat = -1j * (np.kron(eye, h) - np.kron(np.conj(h), eye))
    for rate, op in zip((params.gamma1, params.gamma2), jumps):
        ldl = dagger(op) @ op
        mat = mat + rate * (np.kron(np.conj(op), op) - 0.5 * (np.kron(eye, ldl) + np.kron(ldl.T, eye)))
    return Liouvillian(params, mat, h, jumps)


def apply_linear_generator(liouv: Liouvillian, rho: np.ndarray) -> np.ndarray:
    """Matrix-form action of L0, without going through the superoperator."""
    h = liouv.hamiltonian
    out = -1j * (h @ rho - rho @ dagger(h))
    for rate, op in zip(liouv.rates, liouv.jumps):
        if rate == 0:
            continue
        ldl = dagger(op) @ op
        out = out + rate * (op @ rho @ dagger(op) - 0.5 * (ldl @ rho + rho @ ldl))
    return out


def apply_full_generator(liouv: Liouvillian, rho: np.ndarray) -> np.ndarray:
    """d rho/dt of the trace-preserving nonlinear master equation."""
    h = liouv.hamiltonian
    correction = -1j * np.trace(rho @ (dagger(h) - h))
    return apply_linear_generator(liouv, rho) + correction * rho


def bloch_state(*vectors) -> np.ndarray:
    """Tensor product of single-qubit states (I + r.sigma)/2, one Bloch vector per qubit."""
    factors = []
    for r in vectors:
        r = np.asarray(r, dtype=float)
        if r.shape != (3,):
            raise ValueError(f"Bloch vector must have 3 components, got {r.shape}")
        if np.linalg.norm(r) > 1 + 1e-12:
            raise ValueError(f"Bloch vector {tuple(r)} lies outside the unit ball")
        factors.append(0.5 * (IDENTITY + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z))
    return kron(*factors)
