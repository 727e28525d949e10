import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from ecbounds.errors import DomainError, ResourceError, ValidationError
from ecbounds.verify.channels import (KrausChannel, channel_ci, channel_ci_purified, channel_mi,
                                      channel_mi_purified, complementary, entropy_exchange,
                                      erasure_channel, identity_channel, output_cmi,
                                      random_channel)
from ecbounds.verify.ensembles import (DiscreteEnsemble, d0_distance, holevo, holevo_of,
                                       kantorovich, privacy, qc_state)
from ecbounds.verify.states import (basis_state, entropy, mutual_information, qcmi,
                                    random_state, trace_distance)


def test_kraus_validation():
    with pytest.raises(ValidationError):
        KrausChannel([0.5 * np.eye(2)])
    with pytest.raises(ValidationError):
        KrausChannel([])
    ch = random_channel(3, 2, 4, seed=0)
    assert (ch.in_dim, ch.out_dim, ch.env_dim) == (3, 2, 4)
    V = ch.isometry()
    np.testing.assert_allclose(V.conj().T @ V, np.eye(3), atol=1e-12)
    with pytest.raises(DomainError):
        random_channel(5, 2, 2, seed=0)
    with pytest.raises(DomainError):
        ch(np.eye(2) / 2)


def test_channel_output_is_state():
    ch = random_channel(4, 3, 2, seed=1)
    out = ch(random_state(4, seed=2))
    assert np.trace(out).real == pytest.approx(1, abs=1e-12)
    assert np.min(np.linalg.eigvalsh(out)) >= -1e-12


def test_complement_of_identity():
    comp = complementary(identity_channel(3))
    assert comp.out_dim == 1
    out = comp(random_state(3, seed=3))
    np.testing.assert_allclose(out, [[1.0]], atol=1e-14)


def test_complement_of_complement_same_informations():
    rng = np.random.default_rng(4)
    for _ in range(20):
        ch = random_channel(2, 2, 2, rng)
        cc = complementary(complementary(ch))
        rho = random_state(2, seed=rng)
        assert channel_mi(cc, rho) == pytest.approx(channel_mi(ch, rho), abs=1e-10)
        assert channel_ci(cc, rho) == pytest.approx(channel_ci(ch, rho), abs=1e-10)
        np.testing.assert_allclose(cc(rho), ch(rho), atol=1e-12)


def test_identity_channel_informations():
    rho = random_state(4, seed=5)
    h = entropy(rho)
    assert entropy_exchange(identity_channel(4), rho) == pytest.approx(0, abs=1e-12)
    assert channel_mi(identity_channel(4), rho) == pytest.approx(2 * h, abs=1e-12)
    assert channel_ci(identity_channel(4), rho) == pytest.approx(h, abs=1e-12)


def test_mi_ci_ranges():
    rng = np.random.default_rng(6)
    for _ in range(1000):
        a, b, k = (int(x) for x in rng.integers(1, 5, size=3))
        a += 1
        if b * k < a:
            k = a
        ch = random_channel(a, b, k, rng)
        rho = random_state(a, int(rng.integers(1, a + 1)), rng)
        h = entropy(rho)
        mi, ci = channel_mi(ch, rho), channel_ci(ch, rho)
        assert -1e-10 <= mi <= 2 * h + 1e-10
        assert -h - 1e-10 <= ci <= h + 1e-10


def test_purification_oracle():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a = int(rng.integers(2, 7))
        b, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        if b * k < a:
            k = -(-a // b)
        ch = random_channel(a, b, k, rng)
        rho = random_state(a, int(rng.integers(1, a + 1)), rng)
        assert abs(channel_mi(ch, rho) - channel_mi_purified(ch, rho)) <= 1e-9
        assert abs(channel_ci(ch, rho) - channel_ci_purified(ch, rho)) <= 1e-9


def test_erasure_channel():
    ch = erasure_channel(3, 0.25)
    assert ch.out_dim == 4
    rho = random_state(3, seed=8)
    # I_c of erasure is (1 - 2p) H(rho)
    assert channel_ci(ch, rho) == pytest.approx(0.5 * entropy(rho), abs=1e-12)
    with pytest.raises(DomainError):
        erasure_channel(2, 1.5)


def test_output_cmi_identity():
    rho = random_state(12, seed=9)
    assert output_cmi(identity_channel(2), rho, [2, 3, 2]) == pytest.approx(
        qcmi(rho, [2, 3, 2], [0], [2], [1]), abs=1e-12)


def orthogonal_ensemble(p):
    return DiscreteEnsemble(p, [basis_state(len(p), i) for i in range(len(p))])


def test_holevo_examples():
    rho = random_state(3, seed=10)
    ch = random_channel(3, 3, 2, seed=11)
    assert holevo(ch, DiscreteEnsemble([0.3, 0.7], [rho, rho])) == pytest.approx(0, abs=1e-12)
    p = np.array([0.2, 0.5, 0.3])
    shannon = -float(np.sum(p * np.log(p)))
    assert holevo(identity_channel(3), orthogonal_ensemble(p)) == pytest.approx(shannon, abs=1e-12)
    assert privacy(identity_channel(3), orthogonal_ensemble(p)) == pytest.approx(shannon, abs=1e-12)
    assert privacy(ch, DiscreteEnsemble([1.0], [rho])) == pytest.approx(0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(1, 4))
def test_holevo_nonnegative(seed, k):
    rng = np.random.default_rng(seed)
    ens = DiscreteEnsemble(rng.dirichlet(np.ones(k)), [random_state(3, seed=rng) for _ in range(k)])
    assert holevo(random_channel(3, 2, 3, rng), ens) >= -1e-12


def test_privacy_equals_qc_state_quantity():
    rng = np.random.default_rng(12)
    for _ in range(20):
        k, a = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        ens = DiscreteEnsemble(rng.dirichlet(np.ones(k)),
                               [random_state(a, seed=rng) for _ in range(k)])
        ch = random_channel(a, 2, 3, rng)
        omega = qc_state(ens)
        out, dims = ch.on_factor(omega, [a, k], 0)
        env, edims = complementary(ch).on_factor(omega, [a, k], 0)
        p_fun = mutual_information(out, dims, [0], [1]) - mutual_information(env, edims, [0], [1])
        assert privacy(ch, ens) == pytest.approx(p_fun, abs=1e-10)


def test_ensemble_validation():
    with pytest.raises(ValidationError):
        DiscreteEnsemble([0.5, 0.6], [np.eye(2) / 2] * 2)
    with pytest.raises(ValidationError):
        DiscreteEnsemble([0.5, 0.5], [np.eye(2) / 2, np.eye(3) / 3])
    ens = orthogonal_ensemble([0.5, 0.5])
    np.testing.assert_allclose(ens.average_state(), np.eye(2) / 2)
    assert ens.average_energy(np.array([0.5, 1.5])) == pytest.approx(1.0)
    assert holevo_of(ens) == pytest.approx(math.log(2))


def test_distance_examples():
    rng = np.random.default_rng(13)
    states = [random_state(3, seed=rng) for _ in range(3)]
    mu = DiscreteEnsemble([0.2, 0.3, 0.5], states)
    assert d0_distance(mu, mu) == pytest.approx(0, abs=1e-12)
    assert kantorovich(mu, mu) == pytest.approx(0, abs=1e-12)
    r, s = random_state(3, seed=14), random_state(3, seed=15)
    a, b = DiscreteEnsemble([1.0], [r]), DiscreteEnsemble([1.0], [s])
    assert d0_distance(a, b) == pytest.approx(trace_distance(r, s), abs=1e-12)
    assert kantorovich(a, b) == pytest.approx(trace_distance(r, s), abs=1e-12)
    # padding: a one-state ensemble against a two-state one
    two = DiscreteEnsemble([0.5, 0.5], [r, s])
    # (1/2)(||r - r/2||_1 + ||0 - s/2||_1) = 1/2
    assert d0_distance(a, two) == pytest.approx(0.5, abs=1e-12)
    assert kantorovich(two, a) <= d0_distance(two, a) + 1e-12
    big = DiscreteEnsemble(np.ones(17) / 17, [r] * 17)
    with pytest.raises(ResourceError):
        kantorovich(big, a)
