"""Gibbs-state thermodynamics and the entropy envelopes used by the bounds.

All entropies are in nats. ``F(E)`` is the largest entropy of a state with mean
energy at most ``E``; ``Fbar(E) = F(E + E0)``. An *envelope* is an increasing
upper bound of ``Fbar`` whose ratio to ``sqrt(E)`` does not increase; two are
provided: the closed-form oscillator envelope and the minimal one built
numerically from ``Fbar``.
"""

from __future__ import annotations

import math
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .errors import DomainError, PrecisionError
from .spectrum import ExplicitSpectrum, Oscillator, SpectrumModel

# relative size of the unlisted tail of an explicit spectrum we are willing to ignore
TAIL_RTOL = 1e-12
LAMBDA_RTOL = 1e-12


@dataclass(frozen=True)
class GibbsPoint:
    E: float
    lam: float
    lnZ: float
    F: float


def _check_lambda(lam: float) -> None:
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")


def _explicit_tail_check(model: ExplicitSpectrum, lam: float, ln_z_shifted: float) -> None:
    if model.is_complete:
        return
    lv = model.array
    gap = lv[-1] - lv[-2] if lv.size > 1 else 0.0
    if gap <= 0:
        gap = (lv[-1] - lv[0]) / max(lv.size - 1, 1)
    if gap <= 0:
        raise PrecisionError("cannot bound the spectral tail: listed levels have no spread")
    # unlisted levels are assumed no denser than one per trailing gap
    e0 = lv[0]
    log_tail = -lam * (model.complete_below - e0) - math.log(-math.expm1(-lam * gap))
    if log_tail - ln_z_shifted > math.log(TAIL_RTOL):
        raise PrecisionError(
            f"partition sum at lambda={lam:g} depends on levels above "
            f"complete_below={model.complete_below}")


def _ln_partition_shifted(model: SpectrumModel, lam: float) -> float:
    """``ln Tr exp(-lam (H - E0))``."""
    if isinstance(model, Oscillator):
        return -math.fsum(math.log(-math.expm1(-lam * w)) for w in model.energies)
    shifted = model.array - model.ground_energy
    value = float(logsumexp(-lam * shifted))
    _explicit_tail_check(model, lam, value)
    return value


def ln_partition(model: SpectrumModel, lam: float) -> float:
    """``ln Tr exp(-lam H)``."""
    _check_lambda(lam)
    return _ln_partition_shifted(model, lam) - lam * model.ground_energy


def _bose(x: float) -> float:
    # 1/(e^x - 1) without overflow
    return math.exp(-x) / -math.expm1(-x)


def _excess_energy(model: SpectrumModel, lam: float) -> float:
    # mean energy minus E0 of the Gibbs state at lam
    if isinstance(model, Oscillator):
        return math.fsum(_bose(lam * w) * w for w in model.energies)
    shifted = model.array - model.ground_energy
    lw = -lam * shifted
    _explicit_tail_check(model, lam, float(logsumexp(lw)))
    weights = np.exp(lw - lw.max())
    return float(np.dot(weights, shifted) / weights.sum())


def mean_energy(model: SpectrumModel, lam: float) -> float:
    _check_lambda(lam)
    return model.ground_energy + _excess_energy(model, lam)


def _flat_energy(model: ExplicitSpectrum) -> float:
    # lam -> 0 limit of the mean energy of a finite complete spectrum
    return float(np.mean(model.array))


def solve_lambda(model: SpectrumModel, E: float, rtol: float = LAMBDA_RTOL) -> float:
    """Inverse temperature of the Gibbs state with mean energy ``E``."""
    e0 = model.ground_energy
    ebar = E - e0
    if not ebar > 0:
        raise DomainError(f"E={E} must exceed the ground energy {e0}")
    if isinstance(model, ExplicitSpectrum) and model.is_complete:
        flat = _flat_energy(model)
        if abs(E - flat) <= rtol * ebar:
            return 0.0
        if E > flat:
            raise DomainError(
                f"E={E} exceeds the largest Gibbs mean energy {flat} of this spectrum")

    def residual(lam):
        return _excess_energy(model, lam) - ebar

    lo = hi = 1.0 / ebar
    for _ in range(2100):
        if residual(lo) > 0:
            break
        lo *= 0.5
    else:
        raise DomainError(f"no Gibbs state reaches mean energy {E}")
    for _ in range(2100):
        if residual(hi) < 0:
            break
        hi *= 2.0
    lam = brentq(residual, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(residual(lam)) > max(rtol * ebar, 1e-15 * E):
        raise PrecisionError(f"lambda root for E={E} did not converge")
    return float(lam)


def f_max(model: SpectrumModel, E: float) -> GibbsPoint:
    """Maximal entropy at mean energy ``<= E``, with the Gibbs parameters."""
    e0 = model.ground_energy
    if E < e0 and not math.isclose(E, e0, rel_tol=1e-15, abs_tol=1e-300):
        raise DomainError(f"E={E} is below the ground energy {e0}")
    if E <= e0:
        return GibbsPoint(E=E, lam=math.inf, lnZ=-math.inf,
                          F=math.log(model.ground_multiplicity))
    if isinstance(model, ExplicitSpectrum) and model.is_complete and E >= _flat_energy(model):
        n = len(model.levels)
        return GibbsPoint(E=E, lam=0.0, lnZ=math.log(n), F=math.log(n))
    lam = solve_lambda(model, E)
    if lam == 0.0:
        n = len(model.levels)
        return GibbsPoint(E=E, lam=0.0, lnZ=math.log(n), F=math.log(n))
    ln_zbar = _ln_partition_shifted(model, lam)
    return GibbsPoint(E=E, lam=lam, lnZ=ln_zbar - lam * e0, F=lam * (E - e0) + ln_zbar)


def f_bar(model: SpectrumModel, E: float) -> float:
    """``F(E + E0)`` for excitation energy ``E >= 0``."""
    if E < 0:
        raise DomainError(f"excitation energy must be nonnegative, got {E}")
    return f_max(model, E + model.ground_energy).F


def f_osc(energies, E):
    """Closed-form oscillator entropy bound ``l ln((E + E0)/(l E_*)) + l``."""
    osc = energies if isinstance(energies, Oscillator) else Oscillator(energies)
    e0 = osc.ground_energy
    E = np.asarray(E, dtype=float)
    if np.any(E < e0 * (1 - 1e-15)):
        raise DomainError(f"E must be at least the ground energy {e0}")
    ell = osc.modes
    out = ell * np.log((E + e0) / (ell * osc.geometric_mean_energy)) + ell
    return float(out) if out.ndim == 0 else out


def f_osc_bar(energies, E):
    """``f_osc`` shifted to excitation energy: ``l ln((E + 2 E0)/(l E_*)) + l``."""
    osc = energies if isinstance(energies, Oscillator) else Oscillator(energies)
    E = np.asarray(E, dtype=float)
    if np.any(E < 0):
        raise DomainError("excitation energy must be nonnegative")
    ell = osc.modes
    out = ell * np.log((E + 2 * osc.ground_energy) / (ell * osc.geometric_mean_energy)) + ell
    return float(out) if out.ndim == 0 else out


class Envelope(ABC):
    """Increasing upper bound ``Fhat`` of ``Fbar`` with ``Fhat(E)/sqrt(E)`` nonincreasing."""

    @abstractmethod
    def eval(self, E: float) -> float: ...

    def __call__(self, E):
        arr = np.asarray(E, dtype=float)
        if arr.ndim == 0:
            return self.eval(float(arr))
        return np.array([self.eval(float(x)) for x in arr.ravel()]).reshape(arr.shape)

    def inverse(self, y: float) -> float:
        return f_hat_inverse(self, y)

    @property
    def d0(self) -> int:
        return d_zero(self)

    def gamma(self, d: int) -> float:
        """Energy at which the envelope reaches ``ln d``."""
        return self.inverse(math.log(d))


class OscillatorEnvelope(Envelope):
    """Closed-form envelope for an l-mode oscillator."""

    def __init__(self, energies):
        self.oscillator = energies if isinstance(energies, Oscillator) else Oscillator(energies)

    def __repr__(self):
        return f"OscillatorEnvelope({list(self.oscillator.energies)})"

    @property
    def modes(self) -> int:
        return self.oscillator.modes

    @property
    def ground_energy(self) -> float:
        return self.oscillator.ground_energy

    def eval(self, E: float) -> float:
        return f_osc_bar(self.oscillator, E)

    def __call__(self, E):
        return f_osc_bar(self.oscillator, E)

    def inverse(self, y: float) -> float:
        if y < self.eval(0.0) - 1e-15 * max(1.0, abs(y)):
            raise DomainError(f"{y} is below the envelope's value at zero")
        ell = self.modes
        x = ell * self.oscillator.geometric_mean_energy * math.exp((y - ell) / ell)
        return max(x - 2 * self.ground_energy, 0.0)


class StarEnvelope(Envelope):
    """The minimal envelope ``sqrt(E) * sup_{E' >= E} Fbar(E')/sqrt(E')``.

    The supremum is located by doubling ``E'`` until the ratio has decreased
    ``turnover`` times in a row, then refined by golden-section search around
    the best doubling step. Values are memoised.
    """

    def __init__(self, model: SpectrumModel, turnover: int = 8, ceiling: float = 1e15,
                 rel_tol: float = 1e-10):
        self.model = model
        self.turnover = turnover
        self.ceiling = ceiling
        self.rel_tol = rel_tol
        self._cache: dict[float, float] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"StarEnvelope({self.model!r})"

    def _ratio(self, x: float) -> float:
        return f_bar(self.model, x) / math.sqrt(x)

    def _sup_ratio(self, E: float) -> float:
        xs = [E]
        hs = [self._ratio(E)]
        falls = 0
        while falls < self.turnover:
            x = xs[-1] * 2.0
            if x > max(self.ceiling, E * 2.0 ** (4 * self.turnover)):
                raise PrecisionError(
                    f"no turnover of Fbar(E)/sqrt(E) below the ceiling {self.ceiling:g}")
            h = self._ratio(x)
            falls = falls + 1 if h < hs[-1] else 0
            xs.append(x)
            hs.append(h)
        k = int(np.argmax(hs))
        best = hs[k]
        lo = xs[max(k - 1, 0)]
        hi = xs[min(k + 1, len(xs) - 1)]
        if hi > lo:
            from ._optimize import golden_section

            x_ref, neg = golden_section(lambda u: -self._ratio(math.exp(u)),
                                        math.log(lo), math.log(hi), abs_tol=1e-9)
            best = max(best, -neg)
        return best

    def eval(self, E: float) -> float:
        if E < 0:
            raise DomainError(f"excitation energy must be nonnegative, got {E}")
        if E == 0:
            # the limit E -> 0+ of sqrt(E) * sup equals Fbar(0) = ln m(E0)
            return f_bar(self.model, 0.0)
        with self._lock:
            hit = self._cache.get(E)
        if hit is not None:
            return hit
        value = math.sqrt(E) * self._sup_ratio(E)
        with self._lock:
            self._cache[E] = value
        return value


def f_hat_star(model: SpectrumModel, E: float) -> float:
    return StarEnvelope(model).eval(E)


def f_hat_inverse(fhat: Envelope, y: float) -> float:
    """Energy ``x >= 0`` with ``fhat(x) = y``, by bisection."""
    f0 = fhat.eval(0.0)
    if y < f0:
        raise DomainError(f"{y} is below the envelope's value at zero ({f0})")
    tol = 1e-10 * max(1.0, abs(y))
    if y - f0 <= tol:
        return 0.0
    lo, hi = 0.0, 1.0
    while fhat.eval(hi) < y:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise PrecisionError(f"envelope never reaches {y}")
    mid = 0.5 * (lo + hi)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        val = fhat.eval(mid)
        if abs(val - y) <= tol:
            break
        if val < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return mid


def d_zero(fhat: Envelope) -> int:
    """Smallest natural ``d`` with ``ln d > fhat(0)``."""
    v = fhat.eval(0.0)
    d = max(1, math.floor(math.exp(v)) + 1) if v < 700 else None
    if d is None:
        raise PrecisionError("envelope value at zero is too large")
    while math.log(d) <= v:
        d += 1
    while d > 1 and math.log(d - 1) > v:
        d -= 1
    return d
