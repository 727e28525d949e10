"""Continuity bounds for entropic quantities under energy constraints.

The central object is

    CB_t(E, eps | C, D) = C eps (1 + 4t) (Fhat(E / (eps t)^2) + delta)
                          + D (2 g(eps t) + g(eps (1 + 2t)))

valid for ``0 < t <= T``; ``cb_opt`` minimises it over ``t``. ``eps`` is a
trace-distance-type radius and ``E`` an excitation energy (mean energy minus
the ground energy).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from ._optimize import grid_then_golden
from .errors import DomainError
from .spectrum import Oscillator
from .thermo import Envelope, OscillatorEnvelope

LN2 = math.log(2.0)
T_GRID_POINTS = 256
T_GRID_DECADES = 6


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def g(x):
    """``(x+1) ln(x+1) - x ln x``, with ``g(0) = 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("g is defined for x >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.log1p(x) + np.where(x > 0, x * np.log1p(1.0 / np.where(x > 0, x, 1.0)), 0.0)
    return _out(val)


def h2(p):
    """Binary entropy in nats."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or np.any(p > 1) or np.any(np.isnan(p)):
        raise DomainError("h2 is defined on [0, 1]")
    return _out(-xlogy(p, p) - xlogy(1 - p, 1 - p))


def eta(x):
    """``-x ln x``, with ``eta(0) = 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("eta is defined for x >= 0")
    return _out(-xlogy(x, x))


@dataclass(frozen=True)
class BoundParams:
    """Coefficients of a continuity bound: ``C = c+ + c-``, ``D = a + b``, and ``delta``."""

    C: float
    D: float
    delta: float = 1.0 / 3.0 + LN2

    def __post_init__(self):
        if not self.C >= 0 or not self.D >= 0:
            raise DomainError(f"C and D must be nonnegative, got C={self.C}, D={self.D}")
        if not self.delta > LN2:
            raise DomainError(f"delta must exceed ln 2, got {self.delta}")


class QuantityPreset(enum.Enum):
    """Entropic quantities with their ``(C, D)`` coefficients."""

    ENTROPY = ("entropy", 1, 1)
    COND_ENTROPY = ("cond_entropy", 2, 1)
    QCMI = ("qcmi", 2, 2)
    CHANNEL_MI = ("channel_mi", 2, 2)
    CHANNEL_CI = ("channel_ci", 2, 2)
    CHANNEL_MI_ANTIDEG = ("channel_mi_antideg", 1, 2)
    CHANNEL_CI_DEG = ("channel_ci_deg", 1, 2)
    HOLEVO = ("holevo", 2, 2)
    PRIVACY = ("privacy", 4, 2)
    PRIVACY_DEG_OR_ANTIDEG = ("privacy_deg_or_antideg", 2, 2)

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def C(self) -> int:
        return self.value[1]

    @property
    def D(self) -> int:
        return self.value[2]

    @classmethod
    def from_label(cls, label: str) -> "QuantityPreset":
        for p in cls:
            if p.label == label.lower() or p.name == label.upper():
                return p
        raise DomainError(f"unknown quantity {label!r}")


def delta_for(fhat: Envelope) -> float:
    """``e^{-l} + ln 2`` for the oscillator envelope, ``1/d0 + ln 2`` otherwise."""
    if isinstance(fhat, OscillatorEnvelope):
        return math.exp(-fhat.modes) + LN2
    return 1.0 / fhat.d0 + LN2


def params_for(preset: QuantityPreset, fhat: Envelope | None = None) -> BoundParams:
    if fhat is None:
        return BoundParams(preset.C, preset.D)
    return BoundParams(preset.C, preset.D, delta_for(fhat))


def afw_finite(d: int, eps: float, params: BoundParams) -> float:
    """Finite-dimensional bound ``C eps ln d + D g(eps)``."""
    if d < 2:
        raise DomainError(f"d must be at least 2, got {d}")
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    return params.C * eps * math.log(d) + params.D * g(eps)


def audenaert(d: int, eps: float) -> float:
    """Sharp entropy continuity bound ``eps ln(d-1) + h2(eps)`` for ``eps <= 1 - 1/d``."""
    if d < 2:
        raise DomainError(f"d must be at least 2, got {d}")
    if eps < 0 or eps > 1 - 1 / d + 1e-15:
        raise DomainError(f"eps={eps} outside [0, 1 - 1/d]")
    return eps * math.log(d - 1) + h2(min(eps, 1.0))


def t_max(fhat: Envelope, d0: int | None, Ebar: float, eps: float,
          oscillator: bool | None = None) -> float:
    """Upper end ``T`` of the admissible range of ``t``.

    With ``oscillator`` (default: whether ``fhat`` is the oscillator envelope)
    the ground energy replaces ``gamma(d0)``.
    """
    if not Ebar > 0:
        raise DomainError(f"excitation energy must be positive, got {Ebar}")
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if oscillator is None:
        oscillator = isinstance(fhat, OscillatorEnvelope)
    if oscillator:
        scale = fhat.ground_energy
    else:
        scale = fhat.gamma(fhat.d0 if d0 is None else d0)
    return min(1.0, math.sqrt(Ebar / scale)) / eps


def _cb_raw(fhat_vals, eps, t, params):
    return (params.C * eps * (1 + 4 * t) * (fhat_vals + params.delta)
            + params.D * (2 * g(eps * t) + g(eps * (1 + 2 * t))))


def _check_t(t, T):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t > T * (1 + 1e-12)):
        raise DomainError(f"t must lie in (0, {T}]")
    return t


def cb(fhat: Envelope, d0: int | None, Ebar: float, eps: float, t, params: BoundParams):
    """``CB_t`` for an arbitrary envelope; vectorised over ``t``."""
    T = t_max(fhat, d0, Ebar, eps)
    t = _check_t(t, T)
    return _out(_cb_raw(fhat(Ebar / (eps * t) ** 2), eps, t, params))


def cb_osc(energies, E: float, eps: float, t, params: BoundParams):
    """Oscillator form of ``CB_t`` at total mean energy ``E``; vectorised over ``t``."""
    osc = energies if isinstance(energies, Oscillator) else Oscillator(energies)
    e0, ell = osc.ground_energy, osc.modes
    Ebar = E - e0
    if not Ebar > 0:
        raise DomainError(f"E={E} must exceed the ground energy {e0}")
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    T = min(1.0, math.sqrt(Ebar / e0)) / eps
    t = _check_t(t, T)
    fhat = ell * np.log((Ebar / (eps * t) ** 2 + 2 * e0) / (ell * osc.geometric_mean_energy)) + ell
    return _out(_cb_raw(fhat, eps, t, params))


def cb_osc_loose(energies, E: float, eps: float, t, params: BoundParams):
    """The simpler majorant of ``cb_osc`` written with ``F_{l,w}(E) - 2 l ln(eps t)``."""
    osc = energies if isinstance(energies, Oscillator) else Oscillator(energies)
    e0, ell = osc.ground_energy, osc.modes
    Ebar = E - e0
    if not Ebar > 0:
        raise DomainError(f"E={E} must exceed the ground energy {e0}")
    T = min(1.0, math.sqrt(Ebar / e0)) / eps
    t = _check_t(t, T)
    f_e = ell * math.log((E + e0) / (ell * osc.geometric_mean_energy)) + ell
    return _out(_cb_raw(f_e - 2 * ell * np.log(eps * t), eps, t, params))


def cb_opt(fhat: Envelope, d0: int | None, Ebar: float, eps: float,
           params: BoundParams, points: int = T_GRID_POINTS) -> tuple[float, float]:
    """Minimise ``CB_t`` over ``t`` in ``(0, T]``; returns ``(t_star, value)``.

    Log grid of ``points`` values on ``[min(T, 1) 1e-6, T]``, then golden-section
    refinement around the best grid cell.
    """
    T = t_max(fhat, d0, Ebar, eps)

    def f_vec(ts):
        return _cb_raw(fhat(Ebar / (eps * ts) ** 2), eps, ts, params)

    def f(t):
        return float(_cb_raw(fhat.eval(Ebar / (eps * t) ** 2), eps, t, params))

    # the optimal t stays O(1/F) however large T = 1/eps gets, so anchor the
    # lower end at min(T, 1) rather than at T
    return grid_then_golden(f_vec, f, min(T, 1.0) * 10.0 ** -T_GRID_DECADES, T, points)
