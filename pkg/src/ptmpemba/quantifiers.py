"""Distances from a state to the steady state.

The ``*_series`` helpers evaluate one quantifier on a whole stack of states at
once, which is what the crossing search and grid scans use.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .linalg import LOG_FLOOR, dagger, hermitian_part, matrix_log_hermitian


class QuantifierKind(str, Enum):
    TRACE = "trace"
    FROBENIUS = "frobenius"
    RELATIVE_ENTROPY = "relative_entropy"


class IllConditioned(ValueError):
    """Relative entropy diverges: rho has weight where sigma is (numerically) singular."""


def _difference_eigs(rho, sigma) -> np.ndarray:
    diff = hermitian_part(np.asarray(rho) - np.asarray(sigma))
    return np.linalg.eigvalsh(diff)


def trace_distance(rho, sigma) -> float:
    return float(0.5 * np.abs(_difference_eigs(rho, sigma)).sum())


def frobenius_distance(rho, sigma) -> float:
    a = np.asarray(rho) - np.asarray(sigma)
    return float(np.sqrt(np.trace(dagger(a) @ a).real))


def _check_support(rho, sigma, floor: float) -> None:
    w, v = np.linalg.eigh(hermitian_part(np.asarray(sigma)))
    small = w < floor
    if not np.any(small):
        return
    vs = v[:, small]
    weight = np.real(np.einsum("...ak,...ab,...bk->...k", np.conj(vs), np.asarray(rho), vs))
    if np.any(weight > 1e-6):
        raise IllConditioned("rho has support on a near-null direction of sigma")


def relative_entropy(rho, sigma, floor: float = LOG_FLOOR) -> float:
    """Tr[rho (ln rho - ln sigma)] with eigenvalues clipped at ``floor``."""
    _check_support(rho, sigma, floor)
    rho = np.asarray(rho, dtype=complex)
    val = np.trace(rho @ (matrix_log_hermitian(rho, floor) - matrix_log_hermitian(sigma, floor)))
    return float(val.real)


def trace_distance_series(states, sigma) -> np.ndarray:
    return 0.5 * np.abs(_difference_eigs(states, sigma)).sum(axis=-1)


def frobenius_distance_series(states, sigma) -> np.ndarray:
    a = np.asarray(states) - np.asarray(sigma)
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))


def relative_entropy_series(states, sigma, floor: float = LOG_FLOOR) -> np.ndarray:
    states = hermitian_part(np.asarray(states, dtype=complex))
    _check_support(states, sigma, floor)
    log_sigma = matrix_log_hermitian(sigma, floor)
    lam = np.clip(np.linalg.eigvalsh(states), floor, None)
    neg_entropy = np.sum(lam * np.log(lam), axis=-1)
    cross = np.einsum("tab,ba->t", states, log_sigma).real
    return neg_entropy - cross


_SERIES = {
    QuantifierKind.TRACE: trace_distance_series,
    QuantifierKind.FROBENIUS: frobenius_distance_series,
    QuantifierKind.RELATIVE_ENTROPY: relative_entropy_series,
}

_SINGLE = {
    QuantifierKind.TRACE: trace_distance,
    QuantifierKind.FROBENIUS: frobenius_distance,
    QuantifierKind.RELATIVE_ENTROPY: relative_entropy,
}


def distance(kind: QuantifierKind | str, rho, sigma) -> float:
    return _SINGLE[QuantifierKind(kind)](rho, sigma)


def distance_series(kind: QuantifierKind | str, states, sigma) -> np.ndarray:
    states = np.asarray(states)
    if states.ndim == 2:
        states = states[None]
    return _SERIES[QuantifierKind(kind)](states, sigma)
