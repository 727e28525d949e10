"""Small one-dimensional minimisers shared by the bound optimisers."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float,
                   abs_tol: float = 1e-9, max_iter: int = 200) -> tuple[float, float]:
    """Minimise ``f`` on ``[a, b]``; returns the best point seen and its value."""
    if b < a:
        a, b = b, a
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_f = (c, fc) if fc <= fd else (d, fd)
    for _ in range(max_iter):
        if b - a <= abs_tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def grid_then_golden(f_vec: Callable[[np.ndarray], np.ndarray], f: Callable[[float], float],
                     lo: float, hi: float, points: int = 256,
                     rel_width: float = 1e-6) -> tuple[float, float]:
    """Minimise over a log grid on ``[lo, hi]``, then refine around the best cell.

    Infinite values mark infeasible points. Returns ``(nan, inf)`` if no grid
    point is feasible. The refinement works in ``log t`` and never returns a
    value above the grid minimum.
    """
    grid = np.geomspace(lo, hi, points)
    vals = np.asarray(f_vec(grid), dtype=float)
    finite = np.isfinite(vals)
    if not finite.any():
        return math.nan, math.inf
    i = int(np.argmin(np.where(finite, vals, np.inf)))
    best_t, best_v = float(grid[i]), float(vals[i])
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, points - 1)]
    # stay inside the feasible run containing the argmin
    if i > 0 and not finite[i - 1]:
        a = grid[i]
    if i < points - 1 and not finite[i + 1]:
        b = grid[i]
    if b > a:
        def g(u):
            v = f(math.exp(u))
            return v if math.isfinite(v) else math.inf

        u, v = golden_section(g, math.log(a), math.log(b), abs_tol=rel_width)
        if v < best_v:
            best_t, best_v = math.exp(u), v
    return best_t, best_v
