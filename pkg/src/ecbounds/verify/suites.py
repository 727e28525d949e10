"""Randomised checks that the implemented bounds hold on finite-dimensional instances.

The constrained system is a one-mode oscillator (``hbar*omega = 1``) truncated
to ``dim`` levels, ``H = diag(0.5, 1.5, ..., dim - 0.5)``. A state supported on
the truncated space is a legitimate finite-energy state of the full
oscillator, so the energy-constrained bounds apply to it unchanged.

Each trial draws its randomness from a child of
``SeedSequence([seed, suite_index])``, so a report depends only on the master
seed and the trial count, not on scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.special import xlogy

from ..bounds import (QuantityPreset, afw_finite, audenaert, cb_opt, h2, params_for)
from ..errors import DomainError
from ..thermo import OscillatorEnvelope
from .channels import (channel_ci, channel_mi, erasure_channel, output_cmi, random_channel)
from .ensembles import DiscreteEnsemble, d0_distance, holevo, kantorovich, privacy
from .states import (cond_entropy, entropy, factor_energy, energy_cap, marginal_entropy,
                     oscillator_levels_truncated, perturb, pure_state, qcmi, random_state,
                     trace_distance)

DEFAULT_SEED = 20240611
DEFAULT_TRIALS = 1000
DEFAULT_DIM = 32
DEFAULT_SLACK = 1e-8


@dataclass(frozen=True)
class SuiteConfig:
    suites: tuple[str, ...] = ("all",)
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    dim: int = DEFAULT_DIM
    slack: float = DEFAULT_SLACK
    workers: int = 1


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    trials: int
    violations: int
    max_ratio: float
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Check:
    """``value <= bound`` must hold up to the slack."""

    value: float
    bound: float


_ENVELOPE = OscillatorEnvelope([1.0])
E0 = 0.5


def _ratio(c: Check) -> float:
    if c.bound > 0 and c.value > 0:
        return c.value / c.bound
    return 0.0


# -- instance generators --------------------------------------------------------

def _rank(rng, d):
    return int(rng.choice([1, 2, max(2, d // 4), d]))


def _energy_target(rng, d):
    # excitation energies from deep-quantum to a sizeable share of the truncation
    return E0 + float(np.exp(rng.uniform(np.log(0.02), np.log(d / 2))))


def _capped_pair(rng, dims, h, factor=0):
    """Two states on ``dims`` with the factor's energy capped at a common ``E``."""
    D = math.prod(dims)
    E = _energy_target(rng, dims[factor])
    rho = energy_cap(random_state(D, _rank(rng, D), rng), h, E, dims, factor)
    if rng.random() < 0.25:
        sigma = energy_cap(random_state(D, _rank(rng, D), rng), h, E, dims, factor)
    else:
        mix = float(np.exp(rng.uniform(np.log(1e-4), 0.0)))
        sigma = perturb(rho, mix, rng, h, E, dims, factor, rank=_rank(rng, D))
    return rho, sigma


def _cb(preset: QuantityPreset, rho, sigma, h, dims=None, factor=0) -> tuple[float, float] | None:
    """``(eps, bound)`` for a pair, with the excitation energy taken from the pair itself."""
    eps = trace_distance(rho, sigma)
    ebar = max(factor_energy(rho, h, dims, factor), factor_energy(sigma, h, dims, factor)) - E0
    if eps <= 0 or ebar <= 0:
        return None
    _, value = cb_opt(_ENVELOPE, None, ebar, eps, params_for(preset, _ENVELOPE))
    return eps, value


def _energy_bound(preset, rho, sigma, h, f, dims=None, factor=0) -> list[Check]:
    res = _cb(preset, rho, sigma, h, dims, factor)
    if res is None:
        return []
    return [Check(abs(f(rho) - f(sigma)), res[1])]


# -- suites ---------------------------------------------------------------------

def suite_entropy_mixing(rng, d):
    rho = random_state(d, _rank(rng, d), rng)
    sigma = random_state(d, _rank(rng, d), rng)
    p = float(rng.uniform(0, 1))
    defect = entropy(p * rho + (1 - p) * sigma) - p * entropy(rho) - (1 - p) * entropy(sigma)
    return [Check(-defect, 0.0), Check(defect, h2(p))]


def suite_audenaert(rng, d):
    mode = rng.integers(3)
    if mode == 0:
        # extremal pairs: pure state against its flattest eps-perturbation
        psi = random_state(d, 1, rng)
        e = float(rng.uniform(0, 1 - 1 / d))
        rho = psi
        sigma = (1 - e) * psi + e / (d - 1) * (np.eye(d) - psi)
    elif mode == 1:
        rho = random_state(d, _rank(rng, d), rng)
        sigma = perturb(rho, float(rng.uniform(0, 1)), rng, rank=_rank(rng, d))
    else:
        rho = random_state(d, _rank(rng, d), rng)
        sigma = random_state(d, _rank(rng, d), rng)
    eps = trace_distance(rho, sigma)
    if eps > 1 - 1 / d:
        return []
    return [Check(abs(entropy(rho) - entropy(sigma)), audenaert(d, min(eps, 1 - 1 / d)))]


def _random_pair(rng, D):
    rho = random_state(D, _rank(rng, D), rng)
    if rng.random() < 0.3:
        return rho, random_state(D, _rank(rng, D), rng)
    return rho, perturb(rho, float(np.exp(rng.uniform(np.log(1e-4), 0))), rng, rank=_rank(rng, D))


def suite_afw_finite(rng, d):
    checks = []
    a = int(rng.integers(2, d + 1))
    rho, sigma = _random_pair(rng, a)
    eps = trace_distance(rho, sigma)
    checks.append(Check(abs(entropy(rho) - entropy(sigma)),
                        afw_finite(a, eps, params_for(QuantityPreset.ENTROPY))))

    dims = [int(rng.integers(2, 9)), int(rng.integers(2, 5))]
    rho, sigma = _random_pair(rng, math.prod(dims))
    eps = trace_distance(rho, sigma)
    checks.append(Check(abs(cond_entropy(rho, dims) - cond_entropy(sigma, dims)),
                        afw_finite(dims[0], eps, params_for(QuantityPreset.COND_ENTROPY))))

    dims = [int(rng.integers(2, 7)), int(rng.integers(2, 4)), int(rng.integers(2, 4))]
    rho, sigma = _random_pair(rng, math.prod(dims))
    eps = trace_distance(rho, sigma)
    checks.append(Check(abs(qcmi(rho, dims) - qcmi(sigma, dims)),
                        afw_finite(dims[0], eps, params_for(QuantityPreset.QCMI))))
    return checks


def suite_energy_presets(rng, d):
    h = oscillator_levels_truncated(d)
    checks = []
    rho, sigma = _capped_pair(rng, [d], h)
    checks += _energy_bound(QuantityPreset.ENTROPY, rho, sigma, h, entropy)

    dims = [d, 2]
    rho, sigma = _capped_pair(rng, dims, h)
    checks += _energy_bound(QuantityPreset.COND_ENTROPY, rho, sigma, h,
                            lambda r: cond_entropy(r, dims), dims)

    dims = [d, 2, 2, 2]  # X Y Z R with the oscillator on X
    rho, sigma = _capped_pair(rng, dims, h)
    checks += _energy_bound(QuantityPreset.QCMI, rho, sigma, h,
                            lambda r: qcmi(r, dims, [0], [1], [2]), dims)
    return checks


def _random_channel_from(rng, d):
    out = int(rng.choice([2, 4, 8]))
    return random_channel(d, out, max(1, math.ceil(d / out)) + int(rng.integers(0, 3)), rng)


def suite_channel_cmi(rng, d):
    h = oscillator_levels_truncated(d)
    dims = [d, 2, 2]  # A C D
    rho, sigma = _capped_pair(rng, dims, h)
    ch = random_channel(d, 4, max(1, d // 4), rng)
    return _energy_bound(QuantityPreset.QCMI, rho, sigma, h,
                         lambda r: output_cmi(ch, r, dims), dims)


def suite_channel_info(rng, d):
    h = oscillator_levels_truncated(d)
    rho, sigma = _capped_pair(rng, [d], h)
    ch = _random_channel_from(rng, d)
    checks = _energy_bound(QuantityPreset.CHANNEL_MI, rho, sigma, h, lambda r: channel_mi(ch, r))
    checks += _energy_bound(QuantityPreset.CHANNEL_CI, rho, sigma, h, lambda r: channel_ci(ch, r))
    return checks


def suite_channel_info_degradable(rng, d):
    h = oscillator_levels_truncated(d)
    rho, sigma = _capped_pair(rng, [d], h)
    p = float(rng.uniform(0, 1))
    ch = erasure_channel(d, p)
    checks = []
    if p >= 0.5:
        checks += _energy_bound(QuantityPreset.CHANNEL_MI_ANTIDEG, rho, sigma, h,
                                lambda r: channel_mi(ch, r))
        checks += _energy_bound(QuantityPreset.CHANNEL_MI_ANTIDEG, rho, sigma, h,
                                lambda r: channel_ci(ch, r))
    if p <= 0.5:
        checks += _energy_bound(QuantityPreset.CHANNEL_CI_DEG, rho, sigma, h,
                                lambda r: channel_ci(ch, r))
    return checks


def suite_almost_affinity(rng, d):
    a = int(rng.integers(2, min(d, 12) + 1))
    ch = _random_channel_from(rng, a) if rng.random() < 0.7 else erasure_channel(a, float(rng.uniform()))
    rho = random_state(a, _rank(rng, a), rng)
    sigma = random_state(a, _rank(rng, a), rng)
    p = float(rng.uniform(0, 1))
    mix = p * rho + (1 - p) * sigma
    dmi = channel_mi(ch, mix) - p * channel_mi(ch, rho) - (1 - p) * channel_mi(ch, sigma)
    dci = channel_ci(ch, mix) - p * channel_ci(ch, rho) - (1 - p) * channel_ci(ch, sigma)
    hp = h2(p)
    return [Check(-dmi, 0.0), Check(dmi, 2 * hp), Check(-dci, hp), Check(dci, hp)]


def _cap_average(probs, states, h, E):
    ens = DiscreteEnsemble(probs, states)
    e = ens.average_energy(h)
    if e <= E:
        return ens
    q = (E - E0) / (e - E0)
    ground = np.zeros_like(states[0])
    ground[0, 0] = 1.0
    return DiscreteEnsemble(probs, [q * s + (1 - q) * ground for s in states])


def _ensemble_pair(rng, d, h):
    E = _energy_target(rng, d)
    k = int(rng.integers(1, 5))
    p = rng.dirichlet(np.ones(k))
    mu = _cap_average(p, [random_state(d, _rank(rng, d), rng) for _ in range(k)], h, E)
    mode = rng.random()
    if mode < 0.25:
        k2 = int(rng.integers(1, 5))
        q = rng.dirichlet(np.ones(k2))
        sts = [random_state(d, _rank(rng, d), rng) for _ in range(k2)]
    else:
        e = float(np.exp(rng.uniform(np.log(1e-4), 0)))
        w = float(np.exp(rng.uniform(np.log(1e-4), 0)))
        q = (1 - w) * p + w * rng.dirichlet(np.ones(k))
        sts = [(1 - e) * s + e * random_state(d, _rank(rng, d), rng) for s in mu.states]
    nu = _cap_average(q / q.sum(), sts, h, E)
    return mu, nu


def _ensemble_checks(preset, mu, nu, h, f):
    ebar = max(mu.average_energy(h), nu.average_energy(h)) - E0
    diff = abs(f(mu) - f(nu))
    checks = []
    for eps in (d0_distance(mu, nu), kantorovich(mu, nu)):
        if eps > 0 and ebar > 0:
            _, bound = cb_opt(_ENVELOPE, None, ebar, eps, params_for(preset, _ENVELOPE))
            checks.append(Check(diff, bound))
    return checks


def suite_holevo(rng, d):
    h = oscillator_levels_truncated(d)
    mu, nu = _ensemble_pair(rng, d, h)
    ch = _random_channel_from(rng, d)
    return _ensemble_checks(QuantityPreset.HOLEVO, mu, nu, h, lambda e: holevo(ch, e))


def suite_privacy(rng, d):
    h = oscillator_levels_truncated(d)
    mu, nu = _ensemble_pair(rng, d, h)
    ch = _random_channel_from(rng, d)
    checks = _ensemble_checks(QuantityPreset.PRIVACY, mu, nu, h, lambda e: privacy(ch, e))
    er = erasure_channel(d, float(rng.uniform()))
    checks += _ensemble_checks(QuantityPreset.PRIVACY_DEG_OR_ANTIDEG, mu, nu, h,
                               lambda e: privacy(er, e))
    return checks


def _random_multipartite(rng, n):
    dims = [int(rng.integers(2, 4)) for _ in range(n)]
    D = math.prod(dims)
    return random_state(D, _rank(rng, D), rng), dims


def suite_cmi_upper(rng, d):
    rho, dims = _random_multipartite(rng, 3)
    i = qcmi(rho, dims)
    bound = 2 * min(marginal_entropy(rho, dims, s) for s in ([0], [1], [0, 2], [1, 2]))
    return [Check(i, bound)]


def suite_cmi_monotone(rng, d):
    rho, dims = _random_multipartite(rng, 4)  # X Y Z R
    return [Check(qcmi(rho, dims, [0], [1], [2]), qcmi(rho, dims, [0, 3], [1], [2]))]


def suite_ssa(rng, d):
    rho, dims = _random_multipartite(rng, 3)
    return [Check(-qcmi(rho, dims), 0.0)]


def suite_metric_axioms(rng, d):
    a = int(rng.integers(2, 7))
    ens = []
    for _ in range(3):
        k = int(rng.integers(1, 5))
        ens.append(DiscreteEnsemble(rng.dirichlet(np.ones(k)),
                                    [random_state(a, _rank(rng, a), rng) for _ in range(k)]))
    checks = []
    for dist in (d0_distance, kantorovich):
        x, y, z = ens
        dxy, dyx, dxz, dyz = dist(x, y), dist(y, x), dist(x, z), dist(y, z)
        checks += [Check(abs(dxy - dyx), 0.0), Check(dist(x, x), 0.0),
                   Check(dxz, dxy + dyz), Check(-dxy, 0.0)]
    return checks


def suite_selftest(rng, d):
    """Deliberately false inequality; exercises the violation path."""
    rho = random_state(d, d, rng)
    return [Check(entropy(rho), 0.0)]


SUITES: dict[str, Callable] = {
    "entropy_mixing": suite_entropy_mixing,
    "audenaert": suite_audenaert,
    "afw_finite": suite_afw_finite,
    "energy_presets": suite_energy_presets,
    "channel_cmi": suite_channel_cmi,
    "channel_info": suite_channel_info,
    "channel_info_degradable": suite_channel_info_degradable,
    "almost_affinity": suite_almost_affinity,
    "holevo": suite_holevo,
    "privacy": suite_privacy,
    "cmi_upper": suite_cmi_upper,
    "cmi_monotone": suite_cmi_monotone,
    "ssa": suite_ssa,
    "metric_axioms": suite_metric_axioms,
}
# not part of "all"
HIDDEN_SUITES: dict[str, Callable] = {"_selftest": suite_selftest}


def _suite_index(name: str) -> int:
    names = list(SUITES) + list(HIDDEN_SUITES)
    return names.index(name)


def resolve_suites(names) -> list[str]:
    out: list[str] = []
    for n in names:
        if n == "all":
            out.extend(SUITES)
        elif n in SUITES or n in HIDDEN_SUITES:
            out.append(n)
        else:
            raise DomainError(f"unknown suite {n!r}; known: {', '.join(SUITES)}")
    return list(dict.fromkeys(out))


def run_one(name: str, config: SuiteConfig) -> SuiteReport:
    fn = SUITES.get(name) or HIDDEN_SUITES[name]
    if config.trials < 0:
        raise DomainError("trials must be nonnegative")
    children = np.random.SeedSequence([config.seed, _suite_index(name)]).spawn(config.trials)

    def trial(ss):
        checks = fn(np.random.default_rng(ss), config.dim)
        bad = any(c.value > c.bound + config.slack for c in checks)
        return bad, max((_ratio(c) for c in checks), default=0.0)

    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            results = list(pool.map(trial, children))
    else:
        results = [trial(ss) for ss in children]
    return SuiteReport(suite=name, trials=config.trials,
                       violations=sum(bad for bad, _ in results),
                       max_ratio=max((r for _, r in results), default=0.0),
                       seed=config.seed)


def run_suite(config: SuiteConfig | None = None) -> list[SuiteReport]:
    config = SuiteConfig() if config is None else config
    return [run_one(n, config) for n in resolve_suites(config.suites)]


def tightness_report(E: float = 100.0, eps_values=(1e-3, 1e-2, 0.1, 0.5, 1.0)) -> list[dict]:
    """Entropy gap between the Gibbs state and its mixtures with the ground state.

    ``rho`` is the one-mode Gibbs state at mean energy ``E`` and
    ``sigma = (1 - e) rho + e |0><0|``; both satisfy the energy constraint. The
    ratio ``|H(rho) - H(sigma)| / bound`` is reported for each ``e``, with the
    bound minimised over ``t``. Everything is diagonal, so probability vectors
    suffice; the geometric tail is cut where it drops below ``1e-18``.
    """
    ebar = E - E0
    ratio = ebar / (ebar + 1.0)
    n = int(math.ceil(math.log(1e-18) / math.log(ratio))) + 1
    p = (1 - ratio) * ratio ** np.arange(n)
    p /= p.sum()
    h_rho = float(-np.sum(p * np.log(p)))
    rows = []
    for e in eps_values:
        q = (1 - e) * p
        q[0] += e
        h_sigma = float(-np.sum(xlogy(q, q)))
        eps = 0.5 * float(np.abs(p - q).sum())
        _, bound = cb_opt(_ENVELOPE, None, ebar, eps, params_for(QuantityPreset.ENTROPY, _ENVELOPE))
        rows.append({"E": E, "mix": e, "eps": eps, "delta_H": abs(h_rho - h_sigma),
                     "bound": bound, "ratio": abs(h_rho - h_sigma) / bound})
    return rows
