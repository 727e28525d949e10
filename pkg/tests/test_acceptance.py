"""Acceptance criteria, each checked at its stated tolerance.

Every test records a PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import math
import time

import numpy as np

from ecbounds.bounds import g
from ecbounds.spectrum import Oscillator, bd_sums
from ecbounds.thermo import StarEnvelope, f_bar, f_max, f_osc_bar, solve_lambda
from ecbounds.ufa import REFERENCE_TABLES, TABLE_KINDS, reproduce_tables
from ecbounds.verify.channels import channel_mi, channel_mi_purified, random_channel
from ecbounds.verify.ensembles import DiscreteEnsemble, kantorovich
from ecbounds.verify.states import random_state, trace_norm_hermitian
from ecbounds.verify.suites import SUITES, SuiteConfig, run_suite, tightness_report

from test_transport import vertex_enumeration

ONE = Oscillator(1.0)


def test_table_reproduction(acceptance):
    t0 = time.perf_counter()
    rows = reproduce_tables()
    elapsed = time.perf_counter() - t0
    errs = []
    for r in rows:
        ref = REFERENCE_TABLES[(r.rel_err, int(r.E_over_hw))][TABLE_KINDS.index(r.kind)]
        errs.append(r.m / ref - 1)
    worst = max(errs, key=abs)
    ok = len(rows) == 30 and all(abs(e) <= 0.05 for e in errs) and elapsed < 300
    assert acceptance("table reproduction: 30 entries within 5%", ok,
                      f"worst {worst:+.2%}, {elapsed:.1f} s")


def test_closed_form_thermodynamics(acceptance):
    t0 = time.perf_counter()
    Es = np.geomspace(0.5 + 1e-6, 1e4, 100)
    lam_err = max(abs(solve_lambda(ONE, E) / math.log((E + 0.5) / (E - 0.5)) - 1) for E in Es)
    F_err = max(abs(f_max(ONE, E).F / g(E - 0.5) - 1) for E in Es)
    elapsed = time.perf_counter() - t0
    ok = lam_err <= 1e-10 and F_err <= 1e-9 and elapsed < 1.0
    assert acceptance("closed-form one-mode lambda and F", ok,
                      f"lambda {lam_err:.1e}, F {F_err:.1e}, {elapsed:.2f} s")


def test_envelope_dominance_and_minimality(acceptance):
    worst_dom = 0.0
    worst_star = 0.0
    worst_mono = 0.0
    # shared 1e5-point grid for the sup oracle
    grid = np.geomspace(1e-4, 1e6, 100_000)
    for ws in ([1.0], [1.0, 2.0]):
        model = Oscillator(ws)
        Es = np.geomspace(1e-3, 1e4, 100)
        fb = np.array([f_bar(model, E) for E in Es])
        worst_dom = min(worst_dom, float(np.min(f_osc_bar(ws, Es) - fb)))
        star = StarEnvelope(model)
        vals = np.array([star.eval(E) for E in Es])
        ratio = vals / np.sqrt(Es)
        worst_mono = max(worst_mono, float(np.max(np.diff(ratio) / ratio[:-1])))
        if len(ws) == 1:
            fgrid = np.asarray(g(grid))
        else:
            fgrid = np.array([f_bar(model, x) for x in grid])
        h = fgrid / np.sqrt(grid)
        suffix_max = np.maximum.accumulate(h[::-1])[::-1]
        for E in (1e-3, 0.05, 1.0, 30.0, 1e3):
            k = int(np.searchsorted(grid, E))
            ref = math.sqrt(E) * max(f_bar(model, E) / math.sqrt(E), suffix_max[k])
            worst_star = max(worst_star, abs(star.eval(E) / ref - 1))
    ok = worst_dom >= -1e-12 and worst_star <= 1e-6 and worst_mono <= 1e-12
    assert acceptance("envelope dominance and F-hat-star minimality", ok,
                      f"dominance margin {worst_dom:.1e}, sup oracle {worst_star:.1e}, "
                      f"ratio increase {worst_mono:.1e}")


def test_inequality_suites(acceptance):
    t0 = time.perf_counter()
    reports = run_suite(SuiteConfig(trials=1000, dim=32, slack=1e-8))
    elapsed = time.perf_counter() - t0
    for r in reports:
        acceptance(f"suite {r.suite}: 1000 trials, zero violations", r.violations == 0,
                   f"max_ratio {r.max_ratio:.3g}")
    ok = ([r.suite for r in reports] == list(SUITES) and all(r.violations == 0 for r in reports)
          and elapsed < 600)
    assert acceptance("inequality suites, all", ok, f"{elapsed:.0f} s")


def test_oracle_equivalences(acceptance):
    rng = np.random.default_rng(2024)
    worst_mi = 0.0
    for _ in range(100):
        a = int(rng.integers(2, 7))
        b, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        if b * k < a:
            k = -(-a // b)
        ch = random_channel(a, b, k, rng)
        rho = random_state(a, int(rng.integers(1, a + 1)), rng)
        worst_mi = max(worst_mi, abs(channel_mi(ch, rho) - channel_mi_purified(ch, rho)))
    worst_k = 0.0
    for size, count in ((3, 50), (4, 10)):
        for _ in range(count):
            p, q = rng.dirichlet(np.ones(size)), rng.dirichlet(np.ones(size))
            rs = [random_state(3, seed=rng) for _ in range(size)]
            ss = [random_state(3, seed=rng) for _ in range(size)]
            cost = np.array([[0.5 * trace_norm_hermitian(r - s) for s in ss] for r in rs])
            got = kantorovich(DiscreteEnsemble(p, rs), DiscreteEnsemble(q, ss))
            worst_k = max(worst_k, abs(got - vertex_enumeration(p, q, cost)))
    ok = worst_mi <= 1e-9 and worst_k <= 1e-9
    assert acceptance("oracle equivalences (purification MI, vertex enumeration)", ok,
                      f"MI {worst_mi:.1e}, Kantorovich {worst_k:.1e}")


def test_diagnostics(acceptance):
    n_up, n_down = bd_sums(ONE, 1e4)
    ratio = n_up / n_down
    bd_ok = abs(ratio / 2 - 1) <= 0.2 and n_up == 833500004166250.0
    acceptance("bd_sums ratio at E = 1e4 within 20% of 2", bd_ok, f"ratio {ratio:.9f}")
    rows = tightness_report(E=100.0)
    ratios = [r["ratio"] for r in rows]
    t_ok = all(0 < x <= 1 for x in ratios)
    acceptance("tightness ratio (Gibbs vs ground mixture, E = 100) in (0, 1]", t_ok,
               ", ".join(f"{x:.3f}" for x in ratios))
    assert bd_ok and t_ok
