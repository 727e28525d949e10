import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from ecbounds.errors import DomainError
from ecbounds.verify.ensembles import DiscreteEnsemble, kantorovich
from ecbounds.verify.states import random_state, trace_norm_hermitian
from ecbounds.verify.transport import transport_min_cost


def vertex_enumeration(a, b, c):
    """Minimum over all basic feasible solutions of the transportation polytope."""
    n, m = len(a), len(b)
    A = np.zeros((n + m, n * m))
    for i in range(n):
        A[i, i * m:(i + 1) * m] = 1
    for j in range(m):
        A[n + j, j::m] = 1
    rhs = np.concatenate([a, b])
    best = np.inf
    # one equality is redundant, so bases have n + m - 1 cells
    for cells in itertools.combinations(range(n * m), n + m - 1):
        sub = A[:, cells]
        if np.linalg.matrix_rank(sub) < n + m - 1:
            continue
        x, *_ = np.linalg.lstsq(sub, rhs, rcond=None)
        if np.max(np.abs(sub @ x - rhs)) > 1e-10 or np.min(x) < -1e-12:
            continue
        best = min(best, float(c.reshape(-1)[list(cells)] @ x))
    return best


@pytest.mark.parametrize("size", [3, 4])
def test_matches_vertex_enumeration(size):
    rng = np.random.default_rng(size)
    n_inst = 20 if size == 3 else 4
    for _ in range(n_inst):
        a, b = rng.dirichlet(np.ones(size)), rng.dirichlet(np.ones(size))
        c = rng.random((size, size))
        val, plan = transport_min_cost(a, b, c)
        assert abs(val - vertex_enumeration(a, b, c)) <= 1e-9
        np.testing.assert_allclose(plan.sum(axis=1), a, atol=1e-12)
        np.testing.assert_allclose(plan.sum(axis=0), b, atol=1e-12)
        assert plan.min() >= -1e-12


def test_kantorovich_pinned_3x3():
    rng = np.random.default_rng(100)
    rs = [random_state(3, seed=rng) for _ in range(3)]
    ss = [random_state(3, seed=rng) for _ in range(3)]
    p, q = np.array([0.2, 0.5, 0.3]), np.array([0.6, 0.1, 0.3])
    cost = np.array([[0.5 * trace_norm_hermitian(r - s) for s in ss] for r in rs])
    ref = vertex_enumeration(p, q, cost)
    assert kantorovich(DiscreteEnsemble(p, rs), DiscreteEnsemble(q, ss)) == pytest.approx(ref, abs=1e-9)


def test_matches_linprog_rectangular():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n, m = (int(k) for k in rng.integers(1, 17, size=2))
        a, b = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(m))
        c = rng.random((n, m))
        if rng.random() < 0.3:
            c = np.round(c * 3)  # ties exercise degenerate pivots
        A = np.vstack([np.kron(np.eye(n), np.ones(m)), np.kron(np.ones(n), np.eye(m))])
        ref = linprog(c.reshape(-1), A_eq=A, b_eq=np.concatenate([a, b]), bounds=(0, None),
                      method="highs").fun
        assert transport_min_cost(a, b, c)[0] == pytest.approx(ref, abs=1e-9)


def test_degenerate_supplies():
    val, plan = transport_min_cost([0.5, 0.5], [0.5, 0.5], [[0, 1], [1, 0]])
    assert val == 0
    val, _ = transport_min_cost([1.0, 0.0], [0.0, 1.0], [[3, 2], [1, 7]])
    assert val == pytest.approx(2)


def test_errors():
    with pytest.raises(DomainError):
        transport_min_cost([0.5, 0.5], [1.0], [[1.0, 2.0]])
    with pytest.raises(DomainError):
        transport_min_cost([0.5, 0.6], [1.0], [[1.0], [2.0]])
    with pytest.raises(DomainError):
        transport_min_cost([1.5, -0.5], [1.0], [[1.0], [2.0]])
