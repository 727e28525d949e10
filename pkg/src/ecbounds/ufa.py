"""Sufficient input dimensions for energy-constrained channel capacities.

For a capacity kind ``K`` and an input energy ``E`` the truncation dimension
``m`` is *eps-sufficient* when ``E_m >= E`` and ``min_t f_K(E, m, t) <= eps``.
``sufficient_dim`` returns the smallest such ``m``.

Quantities used throughout (with ``E0`` the ground energy):

* ``Ebar = E - E0`` and ``Ebar_m = E_m - E0``,
* ``u_m = sqrt(Ebar / Ebar_m)`` and ``s_m = Ebar / Ebar_m + u_m``.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from ._optimize import grid_then_golden
from .bounds import BoundParams, LN2, _cb_raw, g
from .errors import DomainError, ResourceError
from .spectrum import Oscillator, SpectrumModel, first_index_at_least, nth_level
from .thermo import Envelope, OscillatorEnvelope, f_max

M_CAP = 10**12
T_POINTS = 256
T_DECADES = 6
# how far below a binary-search answer we probe for non-monotone predicates
GUARD_PROBES = 12
LINEAR_SCAN_CAP = 100_000

CSV_HEADER = ("E_over_hw", "rel_err", "kind", "m", "t_star", "f_value")

# printed reference values for the one-mode oscillator (hbar*omega = 1);
# keys are (rel_err, E_over_hw), columns in TABLE_KINDS order
TABLE_KINDS = ("Cchi", "C", "Q", "Cpbar", "Cp")
REFERENCE_TABLES = {
    (0.1, 3): (2.4e5, 9.0e5, 9.0e5, 1.1e6, 4.2e6),
    (0.1, 10): (3.7e5, 1.4e6, 1.4e6, 1.6e6, 6.5e6),
    (0.1, 100): (1.4e6, 5.3e6, 5.3e6, 6.3e6, 2.5e7),
    (0.01, 3): (3.7e7, 1.5e8, 1.5e8, 1.6e8, 6.5e8),
    (0.01, 10): (5.6e7, 2.2e8, 2.2e8, 2.5e8, 1.0e9),
    (0.01, 100): (2.1e8, 8.4e8, 8.4e8, 9.5e8, 3.8e9),
}


class CapacityKind(enum.Enum):
    CCHI = "Cchi"
    C = "C"
    QBAR = "Qbar"
    Q = "Q"
    CPBAR = "Cpbar"
    CP = "Cp"

    @classmethod
    def parse(cls, label: str) -> "CapacityKind":
        for k in cls:
            if label in (k.value, k.name) or label.lower() == k.value.lower():
                return k
        raise DomainError(f"unknown capacity kind {label!r}")


@dataclass(frozen=True)
class UfaResult:
    m: int
    t_star: float
    f_value: float
    E_m: float


@dataclass(frozen=True)
class _Setup:
    """Per-(model, envelope) constants shared by every evaluation."""

    model: SpectrumModel
    fhat: Envelope
    e0: float
    d0: int
    delta: float
    oscillator: bool
    m0: int
    scale: float  # E0 for the oscillator envelope, gamma(d0) otherwise


def _setup(model: SpectrumModel, fhat: Envelope) -> _Setup:
    osc = isinstance(fhat, OscillatorEnvelope)
    d0 = fhat.d0
    if osc:
        delta = math.exp(-fhat.modes) + LN2
        scale = fhat.ground_energy
    else:
        delta = 1.0 / d0 + LN2
        scale = fhat.gamma(d0)
    return _Setup(model, fhat, model.ground_energy, d0, delta, osc,
                  m_zero(model, fhat, d0), scale)


def m_zero(model: SpectrumModel, fhat: Envelope, d0: int | None = None) -> int:
    """Smallest ``m >= 1`` from which on the level bound needed by ``big_f`` holds.

    Oscillator envelope: ``E_m >= 2 E0``. Otherwise: ``Ebar_m >= gamma(d0)``.
    """
    e0 = model.ground_energy
    if isinstance(fhat, OscillatorEnvelope):
        target = 2.0 * e0
    else:
        target = e0 + fhat.gamma(fhat.d0 if d0 is None else d0)
    return max(1, first_index_at_least(model, target))


def big_f(fhat: Envelope, delta: float, u, Ebar_m: float, t, s: int):
    """``((4+8t)u + 2 s u^2 t^2) Fhat(Ebar_m/t^2) + (4+8t) delta u + 4g(tu) + 2g((2+2t)u)``."""
    if s not in (0, 1):
        raise DomainError(f"s must be 0 or 1, got {s}")
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(t <= 0) or np.any(t > 1):
        raise DomainError("t must lie in (0, 1]")
    if np.any(u <= 0) or np.any(u > 1):
        raise DomainError("u must lie in (0, 1]")
    if not Ebar_m > 0:
        raise DomainError("Ebar_m must be positive")
    lead = (4 + 8 * t) * u + 2 * s * u**2 * t**2
    val = lead * fhat(Ebar_m / t**2) + (4 + 8 * t) * delta * u + 4 * g(t * u) + 2 * g((2 + 2 * t) * u)
    return float(val) if np.ndim(val) == 0 else val


def _f_values(kind: CapacityKind, st: _Setup, Ebar: float, m: int, Ebar_m: float, t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    inf = np.full(t.shape, math.inf)
    if Ebar_m <= 0:
        return inf
    u = math.sqrt(Ebar / Ebar_m)
    s = Ebar / Ebar_m + u
    if kind in (CapacityKind.CCHI, CapacityKind.QBAR, CapacityKind.CPBAR):
        if s > 2:
            return inf
        T = min(1.0, math.sqrt(Ebar / st.scale)) / s
        tau = t / 2
        ok = (tau > 0) & (tau <= T * (1 + 1e-12))
        out = inf.copy()
        if ok.any():
            params = BoundParams(2, 2, st.delta)
            out[ok] = _cb_raw(st.fhat(Ebar / (s * tau[ok]) ** 2), s, tau[ok], params)
        return 2 * out if kind is CapacityKind.CPBAR else out
    if m < st.m0 or u > 1:
        return inf
    sflag = 0 if kind is CapacityKind.C else 1
    out = np.asarray(big_f(st.fhat, st.delta, u, Ebar_m, t, sflag), dtype=float)
    return 2 * out if kind is CapacityKind.CP else out


def _ebar(model: SpectrumModel, E: float) -> float:
    Ebar = E - model.ground_energy
    if not Ebar > 0:
        raise DomainError(f"E={E} must exceed the ground energy {model.ground_energy}")
    return Ebar


def f_capacity(kind: CapacityKind, model: SpectrumModel, fhat: Envelope, E: float, m: int, t):
    """``f_K(E, m, t)``; ``+inf`` where the bound is not available."""
    kind = CapacityKind.parse(kind) if isinstance(kind, str) else kind
    Ebar = _ebar(model, E)
    if m < 1:
        raise DomainError(f"m must be at least 1, got {m}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0) or np.any(t_arr > 1):
        raise DomainError("t must lie in (0, 1]")
    st = _setup(model, fhat)
    out = _f_values(kind, st, Ebar, m, nth_level(model, m) - st.e0, t_arr)
    return float(out[0]) if t_arr.ndim == 0 else out


def _min_over_t(kind, st, Ebar, m, Ebar_m):
    def fv(ts):
        return _f_values(kind, st, Ebar, m, Ebar_m, ts)

    def f1(t):
        return float(fv(t)[0])

    return grid_then_golden(fv, f1, 10.0**-T_DECADES, 1.0, T_POINTS)


def min_over_t(kind: CapacityKind, model: SpectrumModel, fhat: Envelope,
               E: float, m: int) -> tuple[float, float]:
    """Minimum of ``f_K`` over feasible ``t`` in ``(0, 1]``; ``(nan, inf)`` if none."""
    kind = CapacityKind.parse(kind) if isinstance(kind, str) else kind
    Ebar = _ebar(model, E)
    if m < 1:
        raise DomainError(f"m must be at least 1, got {m}")
    st = _setup(model, fhat)
    return _min_over_t(kind, st, Ebar, m, nth_level(model, m) - st.e0)


def sufficient_dim(kind: CapacityKind, model: SpectrumModel, fhat: Envelope | None,
                   E: float, eps: float, m_cap: int = M_CAP) -> UfaResult:
    """Smallest ``m`` with ``E_m >= E`` and ``min_t f_K(E, m, t) <= eps``."""
    kind = CapacityKind.parse(kind) if isinstance(kind, str) else kind
    if fhat is None:
        fhat = OscillatorEnvelope(model)
    Ebar = _ebar(model, E)
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    st = _setup(model, fhat)
    start = max(1, first_index_at_least(model, E))
    if kind in (CapacityKind.C, CapacityKind.Q, CapacityKind.CP):
        start = max(start, st.m0)
    memo: dict[int, tuple[float, float, float]] = {}

    def evaluate(m):
        if m not in memo:
            Em = nth_level(model, m)
            t, v = _min_over_t(kind, st, Ebar, m, Em - st.e0)
            memo[m] = (t, v, Em)
        return memo[m]

    def ok(m):
        return evaluate(m)[1] <= eps

    if ok(start):
        m = start
    else:
        lo, hi = start, 2 * start
        while not ok(hi):
            if hi >= m_cap:
                raise ResourceError(f"no {kind.value}-sufficient dimension up to {m_cap}")
            lo, hi = hi, min(2 * hi, m_cap)
        bracket_lo = lo
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid
        m = hi
        # monotonicity guard: look for passing m below the boundary
        step, suspicious = 2, False
        for _ in range(GUARD_PROBES):
            probe = m - step
            if probe <= bracket_lo:
                break
            if ok(probe):
                suspicious = True
                break
            step *= 2
        if suspicious:
            if m - bracket_lo > LINEAR_SCAN_CAP:
                raise ResourceError(
                    "predicate is not monotone in m and the bracket is too wide to scan")
            m = next(k for k in range(bracket_lo + 1, m + 1) if ok(k))
    t, v, Em = evaluate(m)
    return UfaResult(m=m, t_star=t, f_value=v, E_m=Em)


@dataclass(frozen=True)
class TableRow:
    E_over_hw: float
    rel_err: float
    kind: str
    m: int
    t_star: float
    f_value: float


def table_point(model: Oscillator, value: float, rel_err: float,
                energy_reading: str = "excitation") -> tuple[float, float]:
    """Return ``(E, eps)`` for a table entry labelled ``E/hbar*omega = value``.

    ``"excitation"`` reads the label as the excitation energy ``E - E0``;
    ``"total"`` reads it as the mean energy itself. In both cases
    ``eps = rel_err * F(E)``.
    """
    w = model.energies[0]
    if energy_reading == "excitation":
        E = value * w + model.ground_energy
    elif energy_reading == "total":
        E = value * w
    else:
        raise DomainError(f"unknown energy reading {energy_reading!r}")
    return E, rel_err * f_max(model, E).F


def reproduce_tables(model: Oscillator | None = None,
                     energies_over_hw: Sequence[float] = (3, 10, 100),
                     rel_errs: Sequence[float] = (0.1, 0.01),
                     energy_reading: str = "excitation",
                     workers: int | None = None) -> list[TableRow]:
    """Sufficient dimensions for the five table columns, rows ordered by (rel_err, E)."""
    model = Oscillator(1.0) if model is None else model
    fhat = OscillatorEnvelope(model)
    cells = [(r, x, k) for r in rel_errs for x in energies_over_hw for k in TABLE_KINDS]

    def run(cell):
        r, x, k = cell
        E, eps = table_point(model, x, r, energy_reading)
        res = sufficient_dim(CapacityKind.parse(k), model, fhat, E, eps)
        return TableRow(float(x), float(r), k, res.m, res.t_star, res.f_value)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(run, cells))
    return [run(c) for c in cells]


def _fmt(x) -> str:
    return format(x, ".12g") if isinstance(x, float) else str(x)


def rows_to_csv(rows: Iterable[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(getattr(r, f)) for f in CSV_HEADER])
    return buf.getvalue()


def rows_to_json(rows: Iterable[TableRow]) -> str:
    def clean(v):
        return float(format(v, ".12g")) if isinstance(v, float) else v

    return json.dumps([{k: clean(v) for k, v in asdict(r).items()} for r in rows], indent=1)
