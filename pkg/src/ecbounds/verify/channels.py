"""Quantum channels in Kraus form and their information quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DomainError, ValidationError
from .states import (Dims, as_rng, entropy, mutual_information, partial_trace, qcmi,
                     pure_state)

TP_ATOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """A trace-preserving map ``rho -> sum_i K_i rho K_i^dagger``."""

    kraus: tuple[np.ndarray, ...]

    def __init__(self, kraus: Sequence[np.ndarray]):
        ks = tuple(np.asarray(k, dtype=complex) for k in kraus)
        if not ks:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ks[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ks):
            raise ValidationError("Kraus operators must be matrices of a common shape")
        acc = sum(k.conj().T @ k for k in ks)
        if np.max(np.abs(acc - np.eye(shape[1]))) > TP_ATOL:
            raise ValidationError("Kraus operators are not trace preserving")
        object.__setattr__(self, "kraus", ks)

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def env_dim(self) -> int:
        return len(self.kraus)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        if rho.shape != (self.in_dim, self.in_dim):
            raise DomainError(f"input must be {self.in_dim}x{self.in_dim}, got {rho.shape}")
        K = np.stack(self.kraus)
        return np.tensordot(K @ rho, K.conj(), axes=([0, 2], [0, 2]))

    def isometry(self) -> np.ndarray:
        """Stinespring isometry ``V: A -> B (x) E`` with ``V psi = sum_i K_i psi (x) |i>``."""
        K = np.stack(self.kraus)  # (env, out, in)
        return K.transpose(1, 0, 2).reshape(self.out_dim * self.env_dim, self.in_dim)

    def on_factor(self, rho: np.ndarray, dims: Dims, factor: int) -> tuple[np.ndarray, list[int]]:
        """Apply the channel to one factor of a composite state; returns state and new dims."""
        dims = [int(d) for d in dims]
        if dims[factor] != self.in_dim:
            raise DomainError(f"factor {factor} has dim {dims[factor]}, channel expects {self.in_dim}")
        left = math.prod(dims[:factor])
        right = math.prod(dims[factor + 1:])
        out = np.zeros((left * self.out_dim * right,) * 2, dtype=complex)
        il, ir = np.eye(left), np.eye(right)
        for k in self.kraus:
            big = np.kron(np.kron(il, k), ir)
            out += big @ rho @ big.conj().T
        new_dims = dims.copy()
        new_dims[factor] = self.out_dim
        return out, new_dims


def complementary(channel: KrausChannel) -> KrausChannel:
    """Complementary channel ``rho -> Tr_B V rho V^dagger``; environment dim = #Kraus."""
    K = np.stack(channel.kraus)  # (env, out, in)
    return KrausChannel([K[:, b, :] for b in range(channel.out_dim)])


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel([np.eye(d)])


def erasure_channel(d: int, p: float) -> KrausChannel:
    """Erasure with probability ``p``: output space is the input plus a flag level.

    Degradable for ``p <= 1/2`` and antidegradable for ``p >= 1/2``.
    """
    if not 0 <= p <= 1:
        raise DomainError("erasure probability must lie in [0, 1]")
    keep = np.zeros((d + 1, d))
    keep[:d, :d] = np.eye(d)
    ks = [math.sqrt(1 - p) * keep]
    for j in range(d):
        k = np.zeros((d + 1, d))
        k[d, j] = math.sqrt(p)
        ks.append(k)
    return KrausChannel(ks)


def random_channel(in_dim: int, out_dim: int, n_kraus: int, seed=None) -> KrausChannel:
    """Kraus family cut from a Haar-like random isometry (QR of a Ginibre block)."""
    if out_dim * n_kraus < in_dim:
        raise DomainError("out_dim * n_kraus must be at least in_dim")
    rng = as_rng(seed)
    G = (rng.standard_normal((out_dim * n_kraus, in_dim))
         + 1j * rng.standard_normal((out_dim * n_kraus, in_dim)))
    Q, R = np.linalg.qr(G)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))  # fix column phases
    V = Q.reshape(out_dim, n_kraus, in_dim)
    return KrausChannel([V[:, i, :] for i in range(n_kraus)])


def entropy_exchange(channel: KrausChannel, rho: np.ndarray) -> float:
    return entropy(complementary(channel)(rho))


def channel_mi(channel: KrausChannel, rho: np.ndarray) -> float:
    """``I(Phi, rho) = H(rho) + H(Phi(rho)) - H(Phi^c(rho))``."""
    return entropy(rho) + entropy(channel(rho)) - entropy_exchange(channel, rho)


def channel_ci(channel: KrausChannel, rho: np.ndarray) -> float:
    """``I_c(Phi, rho) = H(Phi(rho)) - H(Phi^c(rho))``."""
    return entropy(channel(rho)) - entropy_exchange(channel, rho)


def purification(rho: np.ndarray) -> np.ndarray:
    """Pure state on ``A (x) R`` (R of the same dimension) whose A-marginal is ``rho``."""
    w, U = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w = np.clip(w, 0.0, None)
    psi = (U * np.sqrt(w)).reshape(-1)  # sum_i sqrt(w_i) |u_i> (x) |i>
    return pure_state(psi)


def channel_mi_purified(channel: KrausChannel, rho: np.ndarray) -> float:
    """``I(B:R)`` of ``(Phi (x) Id)`` applied to a purification of ``rho``."""
    d = rho.shape[0]
    out, dims = channel.on_factor(purification(rho), [d, d], 0)
    return mutual_information(out, dims, [0], [1])


def channel_ci_purified(channel: KrausChannel, rho: np.ndarray) -> float:
    """``H(B) - H(BR)`` of ``(Phi (x) Id)`` applied to a purification of ``rho``."""
    d = rho.shape[0]
    out, dims = channel.on_factor(purification(rho), [d, d], 0)
    return entropy(partial_trace(out, dims, [0])) - entropy(out)


def output_cmi(channel: KrausChannel, rho: np.ndarray, dims: Dims,
               a: int = 0, c: int = 1, d: int = 2) -> float:
    """``I(B:D|C)`` of ``Phi (x) Id`` applied to a state on ``A C D``."""
    out, new = channel.on_factor(rho, dims, a)
    return qcmi(out, new, [a], [d], [c])
