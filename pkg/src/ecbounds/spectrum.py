"""Hamiltonian spectra: multi-mode oscillators and explicit eigenvalue lists.

Oscillator levels are ``sum_i w_i (n_i - 1/2)`` with ``n_i >= 1``, so the
ground level is ``E0 = sum(w) / 2``. Energies are given in whatever unit the
caller uses for ``w`` (``hbar * omega``).
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, ResourceError, ValidationError

# oscillator_levels refuses to materialise more levels than this
MAX_MATERIALIZED_LEVELS = 10_000_000
# nth_level switches from heap enumeration to count + bisection above this index
HEAP_INDEX_LIMIT = 10_000

_COUNT_SLACK = 1e-11


@dataclass(frozen=True)
class Oscillator:
    """An l-mode harmonic oscillator given by its mode energies ``hbar*omega_i``."""

    energies: tuple[float, ...]

    def __init__(self, energies: Sequence[float] | float):
        if np.isscalar(energies):
            energies = (float(energies),)
        es = tuple(float(e) for e in energies)
        if len(es) < 1:
            raise ValidationError("an oscillator needs at least one mode")
        if any(not (e > 0 and math.isfinite(e)) for e in es):
            raise ValidationError(f"mode energies must be positive and finite, got {es}")
        object.__setattr__(self, "energies", es)

    @property
    def modes(self) -> int:
        return len(self.energies)

    @property
    def ground_energy(self) -> float:
        return 0.5 * math.fsum(self.energies)

    @property
    def geometric_mean_energy(self) -> float:
        """``E_* = (prod_i hbar*omega_i)^(1/l)``."""
        return math.exp(math.fsum(math.log(e) for e in self.energies) / self.modes)

    @property
    def ground_multiplicity(self) -> int:
        return 1


@dataclass(frozen=True)
class ExplicitSpectrum:
    """A nondecreasing list of eigenvalues.

    ``complete_below`` promises that every eigenvalue ``<= complete_below`` is
    in the list. ``math.inf`` means the list is the whole spectrum (a
    finite-dimensional Hamiltonian).
    """

    levels: tuple[float, ...]
    complete_below: float = field(default=math.inf)

    def __init__(self, levels: Sequence[float], complete_below: float = math.inf):
        lv = tuple(float(x) for x in levels)
        if not lv:
            raise ValidationError("an explicit spectrum needs at least one level")
        if lv[0] < 0 or any(not math.isfinite(x) for x in lv):
            raise ValidationError("levels must be finite and nonnegative")
        if any(b < a for a, b in zip(lv, lv[1:])):
            raise ValidationError("levels must be nondecreasing")
        if lv[-1] > complete_below:
            raise ValidationError(
                f"last level {lv[-1]} exceeds complete_below={complete_below}")
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "complete_below", float(complete_below))

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.levels, dtype=float)

    @property
    def ground_energy(self) -> float:
        return self.levels[0]

    @property
    def ground_multiplicity(self) -> int:
        return sum(1 for x in self.levels if x == self.levels[0])

    @property
    def is_complete(self) -> bool:
        return math.isinf(self.complete_below)


SpectrumModel = Union[Oscillator, ExplicitSpectrum]


def _as_energies(energies) -> tuple[float, ...]:
    if isinstance(energies, Oscillator):
        return energies.energies
    return Oscillator(energies).energies


def oscillator_levels(energies, m: int, max_levels: int = MAX_MATERIALIZED_LEVELS) -> np.ndarray:
    """Return the ``m`` smallest oscillator levels (with multiplicity), sorted.

    Uses a heap merge over occupation tuples; every tuple is generated exactly
    once by only incrementing modes at or after the last incremented one.
    """
    ws = _as_energies(energies)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if m > max_levels:
        raise ResourceError(
            f"{m} levels exceed the materialisation cap {max_levels}; use nth_level")
    e0 = 0.5 * math.fsum(ws)
    if len(ws) == 1:
        return e0 + ws[0] * np.arange(m, dtype=float)
    out = np.empty(m)
    heap = [(e0, (0,) * len(ws), 0)]
    for i in range(m):
        value, occ, last = heapq.heappop(heap)
        out[i] = value
        for j in range(last, len(ws)):
            nxt = occ[:j] + (occ[j] + 1,) + occ[j + 1:]
            heapq.heappush(heap, (e0 + math.fsum(w * n for w, n in zip(ws, nxt)), nxt, j))
    return out


def _floor_ratio(b: float, w: float) -> int:
    q = b / w
    return math.floor(q + _COUNT_SLACK * max(1.0, abs(q)))


def _count_excitations(ws: tuple[float, ...], budget: float) -> int:
    # number of k in N_0^l with sum w_i k_i <= budget; ws sorted descending
    if budget < -_COUNT_SLACK * max(1.0, abs(budget)):
        return 0
    budget = max(budget, 0.0)
    if len(ws) == 1:
        return _floor_ratio(budget, ws[0]) + 1
    if len(ws) == 2:
        kmax = _floor_ratio(budget, ws[0])
        rem = budget - ws[0] * np.arange(kmax + 1, dtype=float)
        q = rem / ws[1]
        inner = np.floor(q + _COUNT_SLACK * np.maximum(1.0, np.abs(q)))
        return int(np.sum(np.maximum(inner, -1.0) + 1.0, dtype=np.float64))
    total = 0
    for k in range(_floor_ratio(budget, ws[0]) + 1):
        total += _count_excitations(ws[1:], budget - k * ws[0])
    return total


def count_levels(energies, x: float) -> int:
    """Number of oscillator levels ``<= x``, counted with multiplicity."""
    ws = tuple(sorted(_as_energies(energies), reverse=True))
    e0 = 0.5 * math.fsum(ws)
    if x < e0 and not math.isclose(x, e0, rel_tol=_COUNT_SLACK, abs_tol=0.0):
        return 0
    return _count_excitations(ws, x - e0)


def nth_level(model: SpectrumModel, k: int) -> float:
    """The (k+1)-th smallest eigenvalue ``E_k`` (0-indexed)."""
    if k < 0:
        raise DomainError(f"level index must be nonnegative, got {k}")
    if isinstance(model, ExplicitSpectrum):
        if k >= len(model.levels):
            raise DomainError(
                f"index {k} out of range for an explicit spectrum of {len(model.levels)} levels")
        return model.levels[k]
    ws = model.energies
    if len(ws) == 1:
        return (k + 0.5) * ws[0]
    if k < HEAP_INDEX_LIMIT:
        return float(oscillator_levels(ws, k + 1)[-1])
    e0 = model.ground_energy
    lo, hi = e0, e0 + min(ws)
    while count_levels(ws, hi) < k + 1:
        lo, hi = hi, e0 + 2.0 * (hi - e0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        if count_levels(ws, mid) >= k + 1:
            hi = mid
        else:
            lo = mid
    # snap to the exact level sum sitting within the counting slack of hi
    srt = tuple(sorted(ws, reverse=True))
    return e0 + _largest_excitation(srt, hi - e0)


def _largest_excitation(ws: tuple[float, ...], budget: float) -> float:
    # largest sum w_i k_i <= budget (up to the counting slack); ws sorted descending
    if len(ws) == 1:
        return _floor_ratio(budget, ws[0]) * ws[0]
    best = -math.inf
    for k in range(_floor_ratio(budget, ws[0]) + 1):
        rest = budget - k * ws[0]
        if rest < -_COUNT_SLACK * max(1.0, abs(budget)):
            break
        best = max(best, k * ws[0] + _largest_excitation(ws[1:], max(rest, 0.0)))
    return best


def first_index_at_least(model: SpectrumModel, energy: float) -> int:
    """Smallest ``m`` with ``E_m >= energy``."""
    if isinstance(model, ExplicitSpectrum):
        idx = int(np.searchsorted(model.array, energy, side="left"))
        if idx >= len(model.levels):
            raise DomainError(f"no listed level reaches {energy}")
        return idx
    if len(model.energies) == 1:
        w = model.energies[0]
        return max(0, math.ceil((energy - model.ground_energy) / w - _COUNT_SLACK))
    # E_m >= energy  <=>  m >= #{levels < energy}
    lo, hi = 0, 1
    while nth_level(model, hi) < energy:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if nth_level(model, mid) >= energy:
            hi = mid
        else:
            lo = mid
    return 0 if nth_level(model, lo) >= energy else hi


def _levels_up_to(model: SpectrumModel, x: float) -> np.ndarray:
    if isinstance(model, ExplicitSpectrum):
        if x > model.complete_below:
            raise DomainError(
                f"spectrum is only known below {model.complete_below}, need levels up to {x}")
        arr = model.array
        return arr[arr <= x * (1 + 1e-12) + 1e-12]
    n = count_levels(model.energies, x)
    if n == 0:
        return np.empty(0)
    return oscillator_levels(model.energies, n)


def bd_sums(model: SpectrumModel, E: float) -> tuple[float, float]:
    """Pair sums ``(sum E_k^2, sum E_k E_j)`` over ordered pairs with ``E_k + E_j <= E``."""
    e0 = model.ground_energy
    if E <= e0:
        raise DomainError(f"E={E} must exceed the ground energy {e0}")
    levels = _levels_up_to(model, E - e0)
    if levels.size == 0:
        return 0.0, 0.0
    cum = np.concatenate([[0.0], np.cumsum(levels)])
    tol = 1e-12 * max(1.0, abs(E))
    counts = np.searchsorted(levels, E - levels + tol, side="right")
    n_up = float(np.sum(levels**2 * counts))
    n_down = float(np.sum(levels * cum[counts]))
    return n_up, n_down


def load_spectrum(path: str | os.PathLike) -> ExplicitSpectrum:
    """Read a spectrum file: ``# complete_below=<value>`` header, one level per line."""
    complete_below = None
    levels: list[float] = []
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition("=")
                if sep and key.strip() == "complete_below":
                    complete_below = float(value)
                continue
            try:
                levels.append(float(line))
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: not a number: {line!r}") from exc
    if complete_below is None:
        raise ValidationError(f"{path}: missing '# complete_below=<value>' header")
    return ExplicitSpectrum(levels, complete_below)


def save_spectrum(spec: ExplicitSpectrum, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# complete_below={spec.complete_below!r}\n")
        for x in spec.levels:
            fh.write(f"{x!r}\n")
