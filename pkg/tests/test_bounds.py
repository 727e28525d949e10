import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from ecbounds.bounds import (BoundParams, QuantityPreset, afw_finite, audenaert, cb, cb_opt,
                             cb_osc, cb_osc_loose, delta_for, eta, g, h2, params_for, t_max)
from ecbounds.errors import DomainError
from ecbounds.spectrum import Oscillator
from ecbounds.thermo import OscillatorEnvelope, StarEnvelope

LN2 = math.log(2)
ENV = OscillatorEnvelope([1.0])
DSTAR = math.exp(-1) + LN2


def test_scalar_functions():
    assert g(0) == 0
    assert g(1) == pytest.approx(2 * LN2)
    assert g(0.5) == pytest.approx(1.5 * math.log(3) - LN2)
    assert h2(0.5) == pytest.approx(LN2)
    assert h2(0) == 0 and h2(1) == 0
    assert eta(0) == 0 and eta(math.exp(-1)) == pytest.approx(math.exp(-1))
    np.testing.assert_allclose(g(np.array([0.0, 1.0])), [0, 2 * LN2])
    for f, bad in ((g, -0.1), (h2, 1.2), (eta, -1)):
        with pytest.raises(DomainError):
            f(bad)


def test_g_large_argument_is_stable():
    x = 1e12
    assert g(x) == pytest.approx(math.log1p(x) + 1.0, rel=1e-12)


def test_presets_table():
    expected = {
        "entropy": (1, 1), "cond_entropy": (2, 1), "qcmi": (2, 2), "channel_mi": (2, 2),
        "channel_ci": (2, 2), "channel_mi_antideg": (1, 2), "channel_ci_deg": (1, 2),
        "holevo": (2, 2), "privacy": (4, 2), "privacy_deg_or_antideg": (2, 2),
    }
    assert {p.label: (p.C, p.D) for p in QuantityPreset} == expected
    assert QuantityPreset.from_label("Holevo") is QuantityPreset.HOLEVO


def test_bound_params_validation():
    with pytest.raises(DomainError):
        BoundParams(-1, 1)
    with pytest.raises(DomainError):
        BoundParams(1, 1, delta=0.5)
    assert delta_for(ENV) == pytest.approx(DSTAR)
    assert delta_for(StarEnvelope(Oscillator(1))) == pytest.approx(0.5 + LN2)


def test_afw_finite_examples():
    p = BoundParams(1, 1)
    assert afw_finite(7, 0.0, p) == 0
    # g(0.5) = 1.5 ln 3 - ln 2 = 0.954771...
    assert afw_finite(2, 0.5, p) == pytest.approx(0.5 * LN2 + 1.5 * math.log(3) - LN2)
    assert afw_finite(2, 0.5, p) == pytest.approx(1.301344842722, abs=1e-11)


def test_audenaert_examples():
    assert audenaert(2, 0.5) == pytest.approx(LN2)
    assert audenaert(5, 0.0) == 0
    assert audenaert(4, 0.75) == pytest.approx(0.75 * math.log(3) + h2(0.75))
    assert audenaert(4, 0.75) == pytest.approx(1.386294, abs=1e-6)
    with pytest.raises(DomainError):
        audenaert(4, 0.8)


def test_t_max_examples():
    assert t_max(ENV, 3, 10.0, 0.1) == pytest.approx(10)
    assert t_max(ENV, 3, 0.125, 0.1) == pytest.approx(5)
    assert t_max(ENV, 3, 10.0, 1.0) == pytest.approx(1)
    # generic form uses gamma(d0) instead of E0
    gamma = ENV.gamma(3)
    assert t_max(ENV, 3, gamma / 4, 1.0, oscillator=False) == pytest.approx(0.5)


def test_cb_regression_values():
    # 40-digit re-evaluation of the closed formula (scripts/derive_oracles.py), frozen
    p = BoundParams(1, 1, 1 / 3 + LN2)
    assert cb(ENV, 3, 2.5, 0.1, 1.0, p) == pytest.approx(5.148431525786374, rel=1e-13)
    p = BoundParams(2, 2, DSTAR)
    assert cb_osc([1.0], 3.0, 0.1, 0.5, p) == pytest.approx(7.267280886129509, rel=1e-13)


def test_cb_domain():
    p = params_for(QuantityPreset.ENTROPY, ENV)
    with pytest.raises(DomainError):
        cb(ENV, None, 2.0, 0.1, 20.0, p)
    with pytest.raises(DomainError):
        cb(ENV, None, 0.0, 0.1, 0.5, p)
    with pytest.raises(DomainError):
        cb(ENV, None, 2.0, 0.1, 0.0, p)
    with pytest.raises(DomainError):
        cb_osc([1.0], 0.5, 0.1, 0.5, p)


@settings(max_examples=50, deadline=None)
@given(E=st.floats(0.6, 1e4), eps=st.floats(1e-4, 2.0), frac=st.floats(1e-3, 1.0),
       C=st.integers(0, 4), D=st.integers(0, 4))
def test_cb_osc_equals_generic(E, eps, frac, C, D):
    for ws in ([1.0], [1.0, 2.5]):
        osc = Oscillator(ws)
        if E <= osc.ground_energy:
            continue
        env = OscillatorEnvelope(osc)
        params = BoundParams(C, D, delta_for(env))
        ebar = E - osc.ground_energy
        t = frac * t_max(env, None, ebar, eps)
        a = cb_osc(ws, E, eps, t, params)
        b = cb(env, None, ebar, eps, t, params)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)
        assert a <= cb_osc_loose(ws, E, eps, t, params) * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(E=st.floats(0.6, 1e3), eps=st.floats(1e-3, 1.0), frac=st.floats(0.01, 1.0))
def test_cb_linear_in_C_and_D(E, eps, frac):
    ebar = E - 0.5
    t = frac * t_max(ENV, None, ebar, eps)
    f = lambda C, D: cb(ENV, None, ebar, eps, t, BoundParams(C, D, DSTAR))
    assert f(3, 0) == pytest.approx(3 * f(1, 0), rel=1e-12)
    assert f(0, 5) == pytest.approx(5 * f(0, 1), rel=1e-12)
    assert f(2, 3) == pytest.approx(f(2, 0) + f(0, 3), rel=1e-12)


def test_cb_monotone_in_eps_and_energy():
    p = params_for(QuantityPreset.QCMI, ENV)
    eps_grid = np.geomspace(1e-3, 1.0, 20)
    e_grid = np.geomspace(1e-2, 1e3, 20)
    # fixed product eps*t keeps every point feasible
    for s in (1e-3, 1e-2):
        vals = np.array([[cb(ENV, None, Eb, e, s / e, p) if s / e <= t_max(ENV, None, Eb, e)
                          else np.nan for e in eps_grid] for Eb in e_grid])
        for row in vals:
            r = row[~np.isnan(row)]
            assert np.all(np.diff(r) >= -1e-12 * r[1:])
        for col in vals.T:
            c = col[~np.isnan(col)]
            assert np.all(np.diff(c) >= -1e-12 * c[1:])


def test_cb_opt_properties():
    p = params_for(QuantityPreset.ENTROPY, ENV)
    for ebar, eps in ((2.5, 0.1), (0.05, 0.5), (100.0, 1e-3), (1e4, 0.9)):
        T = t_max(ENV, None, ebar, eps)
        t_star, val = cb_opt(ENV, None, ebar, eps, p)
        assert 0 < t_star <= T
        assert val == pytest.approx(cb(ENV, None, ebar, eps, t_star, p), rel=1e-12)
        assert val <= cb(ENV, None, ebar, eps, T, p)
        assert val <= cb(ENV, None, ebar, eps, T / 2, p)
        brute = np.geomspace(min(T, 1) * 1e-6, T, 10_000)
        assert val <= np.min(cb(ENV, None, ebar, eps, brute, p)) + 1e-8


def test_cb_opt_vanishes_with_eps():
    p = params_for(QuantityPreset.PRIVACY, ENV)
    vals = [cb_opt(ENV, None, 10.0, e, p)[1] for e in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-5


def test_cb_with_star_envelope():
    star = StarEnvelope(Oscillator(1))
    p = params_for(QuantityPreset.ENTROPY, star)
    t_star, val = cb_opt(star, None, 10.0, 0.05, p)
    assert val > 0 and t_star > 0
    # the minimal envelope never exceeds the closed form, and delta differs
    osc_val = cb(ENV, None, 10.0, 0.05, t_star, BoundParams(1, 1, p.delta))
    assert cb(star, None, 10.0, 0.05, t_star, p) <= osc_val + 1e-12
