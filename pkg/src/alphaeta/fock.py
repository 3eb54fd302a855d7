"""Truncated Fock-space numerics for coherent states and state discrimination."""

from __future__ import annotations

import logging
import math

import numpy as np

log = logging.getLogger(__name__)


def default_cutoff(energy: float) -> int:
    """Photon-number truncation covering the Poisson bulk plus a wide tail."""
    return int(math.ceil(energy + 10.0 * math.sqrt(energy) + 20.0))


def coherent_vector(energy: float, theta: float, dim: int) -> np.ndarray:
    """Number-basis amplitudes of |sqrt(energy) e^{i theta}>, truncated to dim.

    Built by the stable recurrence c_n = c_{n-1} * alpha / sqrt(n).
    """
    if energy < 0:
        raise ValueError("energy must be >= 0")
    alpha = math.sqrt(energy) * complex(math.cos(theta), math.sin(theta))
    c = np.zeros(dim, dtype=np.complex128)
    c[0] = math.exp(-energy / 2.0)
    for n in range(1, dim):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def mixture_density(energy: float, thetas: np.ndarray, dim: int,
                    weights: np.ndarray | None = None) -> np.ndarray:
    """Density operator of a weighted mixture of equal-energy coherent states.

    The truncated operator is renormalized to unit trace; the discarded
    mass is logged at debug level.
    """
    thetas = np.asarray(thetas, dtype=float)
    if weights is None:
        weights = np.full(thetas.size, 1.0 / thetas.size)
    states = np.stack([coherent_vector(energy, t, dim) for t in thetas])
    rho = (states.T * weights) @ states.conj()
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > 1e-9:
        log.debug("renormalizing truncated density operator, trace deficit %.3e", 1.0 - tr)
        rho = rho / tr
    return rho


def is_hermitian(A: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(A - A.conj().T)) <= tol)


def trace_norm(A: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(np.linalg.eigvalsh(A)).sum())


def trace_distance(rho0: np.ndarray, rho1: np.ndarray) -> float:
    return 0.5 * trace_norm(rho0 - rho1)


def helstrom_error(rho0: np.ndarray, rho1: np.ndarray) -> float:
    """Minimum equal-prior discrimination error, 1/2 - ||rho0 - rho1||_1 / 4."""
    p = 0.5 - 0.25 * trace_norm(rho0 - rho1)
    return float(min(max(p, 0.0), 0.5))


def helstrom_error_two_pure(energy: float, delta_theta: float = math.pi) -> float:
    """Closed form for two equal-energy coherent states ``delta_theta`` apart."""
    overlap_sq = math.exp(-2.0 * energy * (1.0 - math.cos(delta_theta)))
    return 0.5 * (1.0 - math.sqrt(1.0 - overlap_sq))
