"""Density matrices on finite (truncated) spaces and their entropic quantities.

States are plain complex ``ndarray`` objects; ``check_state`` validates them.
Composite systems are described by a list of factor dimensions.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import xlogy

from ..errors import DomainError, ValidationError

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIG_FLOOR = -1e-10

Dims = Sequence[int]


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def check_state(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"density matrix must be square, got shape {rho.shape}")
    scale = max(1.0, float(np.max(np.abs(rho))))
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_ATOL * scale:
        raise ValidationError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > TRACE_ATOL * rho.shape[0]:
        raise ValidationError(f"trace is {np.trace(rho).real}, expected 1")
    return rho


def spectrum(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of a state, clamped at zero."""
    rho = np.asarray(rho)
    scale = max(1.0, float(np.max(np.abs(rho)))) if rho.size else 1.0
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_ATOL * scale:
        raise ValidationError("matrix is not Hermitian")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.size and w.min() < EIG_FLOOR:
        raise ValidationError(f"matrix has a negative eigenvalue {w.min():.3g}")
    return np.clip(w, 0.0, None)


def shannon(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    return float(-np.sum(xlogy(p, p)))


def entropy(rho: np.ndarray) -> float:
    """von Neumann entropy in nats."""
    return shannon(spectrum(rho))


def trace_norm_hermitian(x: np.ndarray) -> float:
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (x + x.conj().T)))))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DomainError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    return 0.5 * trace_norm_hermitian(rho - sigma)


def _check_dims(rho: np.ndarray, dims: Dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or math.prod(dims) != rho.shape[0]:
        raise DomainError(f"factor dims {dims} do not match matrix size {rho.shape[0]}")
    return dims


def partial_trace(rho: np.ndarray, dims: Dims, keep: Sequence[int]) -> np.ndarray:
    """Reduced state on the factors listed in ``keep`` (in their original order)."""
    rho = np.asarray(rho)
    dims = _check_dims(rho, dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DomainError(f"keep={keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = rho.reshape(dims + dims)
    for ax in reversed([i for i in range(n) if i not in keep]):
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    dk = math.prod(dims[k] for k in keep)
    return t.reshape(dk, dk)


def marginal_entropy(rho: np.ndarray, dims: Dims, subset: Sequence[int]) -> float:
    if len(subset) == 0:
        return 0.0
    return entropy(partial_trace(rho, dims, subset))


def cond_entropy(rho_ab: np.ndarray, dims: Dims) -> float:
    """``H(A|B) = H(AB) - H(B)`` for a bipartite state with ``dims = (dA, dB)``."""
    dims = _check_dims(np.asarray(rho_ab), dims)
    if len(dims) != 2:
        raise DomainError("cond_entropy expects two factors")
    return entropy(rho_ab) - marginal_entropy(rho_ab, dims, [1])


def mutual_information(rho: np.ndarray, dims: Dims, x: Sequence[int], y: Sequence[int]) -> float:
    return qcmi(rho, dims, x, y, ())


def qcmi(rho: np.ndarray, dims: Dims, x: Sequence[int] | None = None,
         y: Sequence[int] | None = None, z: Sequence[int] | None = None) -> float:
    """``I(X:Y|Z) = H(XZ) + H(YZ) - H(XYZ) - H(Z)``.

    Defaults: X is factor 0, Y factor 1 and Z all remaining factors, so a
    bipartite state gives the mutual information.
    """
    dims = _check_dims(np.asarray(rho), dims)
    x = (0,) if x is None else tuple(x)
    y = (1,) if y is None else tuple(y)
    z = tuple(range(2, len(dims))) if z is None else tuple(z)
    if set(x) & set(y) or set(x) & set(z) or set(y) & set(z):
        raise DomainError("subsystem sets must be disjoint")
    return (marginal_entropy(rho, dims, x + z) + marginal_entropy(rho, dims, y + z)
            - marginal_entropy(rho, dims, x + y + z) - marginal_entropy(rho, dims, z))


def random_state(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Ginibre random state ``G G^dagger / Tr(G G^dagger)`` with ``G`` of shape ``dim x rank``."""
    rng = as_rng(seed)
    rank = dim if rank is None else rank
    if dim < 1 or rank < 1:
        raise DomainError("dim and rank must be positive")
    G = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = G @ G.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def pure_state(vec: np.ndarray) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def basis_state(dim: int, k: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[k, k] = 1.0
    return rho


def maximally_entangled(d: int) -> np.ndarray:
    return pure_state(np.eye(d).reshape(-1))


def oscillator_levels_truncated(d: int, w: float = 1.0) -> np.ndarray:
    """Diagonal of the one-mode oscillator Hamiltonian truncated to ``d`` levels."""
    return (np.arange(d) + 0.5) * w


def factor_energy(rho: np.ndarray, h_levels: np.ndarray, dims: Dims | None = None,
                  factor: int = 0) -> float:
    """Mean energy ``Tr H rho`` with a diagonal ``H`` acting on one factor."""
    rho = np.asarray(rho)
    if dims is not None and len(dims) > 1:
        rho = partial_trace(rho, dims, [factor])
    return float(np.dot(np.real(np.diag(rho)), h_levels))


def energy_cap(rho: np.ndarray, h_levels: np.ndarray, E: float,
               dims: Dims | None = None, factor: int = 0) -> np.ndarray:
    """Mix ``rho`` with the ground state just enough to bring its energy down to ``E``.

    For a composite state the Hamiltonian acts on ``factor``; the admixed
    state is the ground state of that factor tensored with the marginal of
    the other factors, so their reduced state is unchanged.
    """
    rho = np.asarray(rho)
    h_levels = np.asarray(h_levels, dtype=float)
    g_idx = int(np.argmin(h_levels))
    e0 = float(h_levels[g_idx])
    if E < e0:
        raise DomainError(f"E={E} is below the ground energy {e0}")
    e_rho = factor_energy(rho, h_levels, dims, factor)
    if e_rho <= E:
        return rho
    q = (E - e0) / (e_rho - e0)
    ground = basis_state(len(h_levels), g_idx)
    if dims is None or len(dims) == 1:
        return q * rho + (1 - q) * ground
    dims = _check_dims(rho, dims)
    others = [i for i in range(len(dims)) if i != factor]
    rest = partial_trace(rho, dims, others)
    admix = _embed(ground, rest, dims, factor)
    return q * rho + (1 - q) * admix


def _embed(a: np.ndarray, rest: np.ndarray, dims: tuple[int, ...], factor: int) -> np.ndarray:
    # place ``a`` on ``factor`` and ``rest`` on the remaining factors (kept order)
    n = len(dims)
    full = np.kron(a, rest)
    order = [factor] + [i for i in range(n) if i != factor]
    cur = [dims[i] for i in order]
    t = full.reshape(cur + cur)
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [n + i for i in inv])
    D = math.prod(dims)
    return t.reshape(D, D)


def perturb(rho: np.ndarray, eps: float, seed=None, h_levels: np.ndarray | None = None,
            E: float | None = None, dims: Dims | None = None, factor: int = 0,
            rank: int | None = None) -> np.ndarray:
    """``(1 - eps) rho + eps pi`` with a random state ``pi`` (energy-capped if ``E`` given)."""
    if not 0 <= eps <= 1:
        raise DomainError(f"eps must lie in [0, 1], got {eps}")
    rho = np.asarray(rho)
    if eps == 0:
        return rho
    rng = as_rng(seed)
    pi = random_state(rho.shape[0], rank, rng)
    if E is not None:
        pi = energy_cap(pi, h_levels, E, dims, factor)
    return (1 - eps) * rho + eps * pi
