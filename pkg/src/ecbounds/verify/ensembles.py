"""Discrete ensembles of states, the Holevo quantity, privacy and ensemble distances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DomainError, ResourceError, ValidationError
from .channels import KrausChannel, complementary
from .states import basis_state, entropy, trace_norm_hermitian
from .transport import transport_min_cost

PROB_ATOL = 1e-12
MAX_SUPPORT = 16


@dataclass(frozen=True)
class DiscreteEnsemble:
    """States ``rho_i`` with probabilities ``p_i``."""

    probs: np.ndarray
    states: tuple[np.ndarray, ...]

    def __init__(self, probs: Sequence[float], states: Sequence[np.ndarray]):
        p = np.asarray(probs, dtype=float)
        sts = tuple(np.asarray(s) for s in states)
        if p.ndim != 1 or len(p) != len(sts) or len(p) == 0:
            raise ValidationError("need one probability per state")
        if np.any(p < 0) or abs(p.sum() - 1) > PROB_ATOL:
            raise ValidationError("probabilities must be nonnegative and sum to 1")
        if any(s.shape != sts[0].shape for s in sts):
            raise ValidationError("all states must have the same dimension")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", sts)

    def __len__(self):
        return len(self.probs)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def average_state(self) -> np.ndarray:
        return np.einsum("i,iab->ab", self.probs, np.stack(self.states))

    def average_energy(self, h_levels: np.ndarray) -> float:
        return float(np.dot(np.real(np.diag(self.average_state())), h_levels))

    def mapped(self, channel: KrausChannel) -> "DiscreteEnsemble":
        return DiscreteEnsemble(self.probs, [channel(s) for s in self.states])


def holevo_of(ens: DiscreteEnsemble) -> float:
    return entropy(ens.average_state()) - float(
        np.dot(ens.probs, [entropy(s) for s in ens.states]))


def holevo(channel: KrausChannel, ens: DiscreteEnsemble) -> float:
    """``chi`` of the output ensemble ``{p_i, Phi(rho_i)}``."""
    return holevo_of(ens.mapped(channel))


def privacy(channel: KrausChannel, ens: DiscreteEnsemble) -> float:
    """``chi`` through the channel minus ``chi`` through its complement."""
    return holevo(channel, ens) - holevo(complementary(channel), ens)


def qc_state(ens: DiscreteEnsemble) -> np.ndarray:
    """``sum_i p_i rho_i (x) |i><i|`` on ``A (x) R``."""
    k = len(ens)
    return sum(p * np.kron(s, basis_state(k, i)) for i, (p, s) in enumerate(zip(ens.probs, ens.states)))


def _padded(mu: DiscreteEnsemble, n: int) -> tuple[np.ndarray, list[np.ndarray]]:
    ground = basis_state(mu.dim, 0)
    extra = n - len(mu)
    return (np.concatenate([mu.probs, np.zeros(extra)]),
            list(mu.states) + [ground] * extra)


def d0_distance(mu: DiscreteEnsemble, nu: DiscreteEnsemble) -> float:
    """``(1/2) sum_i || p_i rho_i - q_i sigma_i ||_1`` over index-aligned lists.

    The shorter list is padded with zero-probability ground states.
    """
    if mu.dim != nu.dim:
        raise DomainError("ensembles live on different spaces")
    n = max(len(mu), len(nu))
    p, rs = _padded(mu, n)
    q, ss = _padded(nu, n)
    return 0.5 * sum(trace_norm_hermitian(a * r - b * s) for a, r, b, s in zip(p, rs, q, ss))


def kantorovich(mu: DiscreteEnsemble, nu: DiscreteEnsemble) -> float:
    """Optimal-transport distance with ground cost ``(1/2)||rho_i - sigma_j||_1``."""
    if mu.dim != nu.dim:
        raise DomainError("ensembles live on different spaces")
    if len(mu) > MAX_SUPPORT or len(nu) > MAX_SUPPORT:
        raise ResourceError(f"supports larger than {MAX_SUPPORT} are not supported")
    cost = np.array([[0.5 * trace_norm_hermitian(r - s) for s in nu.states] for r in mu.states])
    value, _ = transport_min_cost(mu.probs, nu.probs, cost)
    return value
