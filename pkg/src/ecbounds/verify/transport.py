"""Exact solver for small balanced transportation problems (transportation simplex).

The basis is kept as a spanning tree of the bipartite supply/demand graph;
potentials give reduced costs, and a pivot pushes flow around the unique
cycle closed by the entering cell. Dantzig's rule is used until a run of
degenerate pivots, after which Bland's rule guarantees termination.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..errors import DomainError, ResourceError

OPT_TOL = 1e-12
BALANCE_TOL = 1e-9
DEGENERATE_SWITCH = 20


def _northwest(a: np.ndarray, b: np.ndarray):
    n, m = len(a), len(b)
    a, b = a.copy(), b.copy()
    flow = np.zeros((n, m))
    basis = []
    i = j = 0
    while True:
        x = min(a[i], b[j])
        flow[i, j] = x
        basis.append((i, j))
        a[i] -= x
        b[j] -= x
        if i == n - 1 and j == m - 1:
            break
        if i == n - 1:
            j += 1
        elif j == m - 1:
            i += 1
        elif a[i] <= b[j]:
            i += 1
        else:
            j += 1
    return flow, basis


def _adjacency(basis, n, m):
    adj = [[] for _ in range(n + m)]
    for i, j in basis:
        adj[i].append(n + j)
        adj[n + j].append(i)
    return adj


def _potentials(basis, cost, n, m):
    adj = _adjacency(basis, n, m)
    pot = [None] * (n + m)
    pot[0] = 0.0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if pot[w] is None:
                i, j = (v, w - n) if v < n else (w, v - n)
                # u_i + v_j = c_ij
                pot[w] = cost[i, j] - pot[v]
                queue.append(w)
    return np.array(pot[:n]), np.array(pot[n:])


def _tree_path(basis, n, m, src, dst):
    adj = _adjacency(basis, n, m)
    parent = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    path = [dst]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path  # dst ... src


def transport_min_cost(supply, demand, cost, max_iter: int | None = None):
    """Minimise ``sum c_ij x_ij`` subject to row sums ``supply`` and column sums ``demand``.

    Returns ``(value, plan)``.
    """
    a = np.asarray(supply, dtype=float)
    b = np.asarray(demand, dtype=float)
    c = np.asarray(cost, dtype=float)
    n, m = len(a), len(b)
    if c.shape != (n, m):
        raise DomainError(f"cost must have shape {(n, m)}, got {c.shape}")
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("supplies and demands must be nonnegative")
    if abs(a.sum() - b.sum()) > BALANCE_TOL * max(1.0, a.sum()):
        raise DomainError("problem is not balanced")
    b = b * (a.sum() / b.sum()) if b.sum() > 0 else b
    flow, basis = _northwest(a, b)
    max_iter = max_iter or 50 * (n + m) ** 2
    degenerate = 0
    for _ in range(max_iter):
        u, v = _potentials(basis, c, n, m)
        reduced = c - u[:, None] - v[None, :]
        in_basis = np.zeros((n, m), bool)
        for cell in basis:
            in_basis[cell] = True
        reduced[in_basis] = 0.0
        if reduced.min() >= -OPT_TOL * max(1.0, np.abs(c).max()):
            return float(np.sum(c * flow)), flow
        if degenerate >= DEGENERATE_SWITCH:
            idx = np.flatnonzero(reduced.ravel() < -OPT_TOL * max(1.0, np.abs(c).max()))[0]
        else:
            idx = int(np.argmin(reduced))
        ie, je = divmod(int(idx), m)
        # cycle: entering cell, then the tree path from column je back to row ie
        path = _tree_path(basis, n, m, ie, n + je)
        cells = []
        for k in range(len(path) - 1):
            x, y = path[k], path[k + 1]
            cells.append((y, x - n) if y < n else (x, y - n))
        minus = cells[0::2]
        plus = cells[1::2]
        theta = min(flow[cell] for cell in minus)
        leaving_candidates = [cell for cell in minus if flow[cell] <= theta]
        leaving = min(leaving_candidates) if degenerate >= DEGENERATE_SWITCH else leaving_candidates[0]
        for cell in minus:
            flow[cell] -= theta
        for cell in plus:
            flow[cell] += theta
        flow[ie, je] += theta
        flow[leaving] = 0.0
        basis.remove(leaving)
        basis.append((ie, je))
        degenerate = degenerate + 1 if theta == 0 else 0
    raise ResourceError("transportation simplex did not converge")
