"""Power-of-two index sets, envelope vectors and guess enumeration."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

ENVELOPE_TOL = 1e-12


def pos_set(m: int) -> tuple[int, ...]:
    """``(1, 2, 4, ..., 2^floor(log2 m))``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out, l = [], 1
    while l <= m:
        out.append(l)
        l *= 2
    return tuple(out)


def _level(i: int) -> int:
    """Largest power of two that is at most ``i``."""
    return 1 << (int(i).bit_length() - 1)


def expansion(v: Mapping[int, float], m: int) -> np.ndarray:
    """Vector of length ``m`` with entry ``i`` equal to ``v[largest power of 2 <= i]``."""
    missing = [l for l in pos_set(m) if l not in v]
    if missing:
        raise ValueError(f"missing indices {missing}")
    return np.array([float(v[_level(i)]) for i in range(1, m + 1)])


@dataclass(frozen=True)
class GuessVector:
    """Thresholds ``t_l`` for ``l`` in ``pos_set(m)``, non-increasing."""

    m: int
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != len(pos_set(self.m)):
            raise ValueError("one threshold per power-of-two index is required")
        if any(v <= 0 for v in vals):
            raise ValueError("thresholds must be positive")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError("thresholds must be non-increasing")
        object.__setattr__(self, "values", vals)

    @property
    def levels(self) -> tuple[int, ...]:
        return pos_set(self.m)

    def __getitem__(self, l: int) -> float:
        return self.values[self.levels.index(l)]

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.levels, self.values))

    def expanded(self) -> np.ndarray:
        return expansion(self.as_dict(), self.m)

    def budgets(self) -> dict[int, float]:
        """``B_l = l * t_l``."""
        return {l: l * t for l, t in self.as_dict().items()}


def _upper_hull(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    pts = sorted(set(points))
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is not strictly above the chord
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def envelope_curve(B: Mapping[int, float], m: int) -> np.ndarray:
    """Upper concave envelope of the budget points, at ``x = 0..m``."""
    levels = pos_set(m)
    missing = [l for l in levels if l not in B]
    if missing:
        raise ValueError(f"missing budgets for {missing}")
    vals = [float(B[l]) for l in levels]
    if any(v < 0 for v in vals):
        raise ValueError("budgets must be nonnegative")
    tol = ENVELOPE_TOL * max(1.0, max(vals))
    for a, b in zip(vals, vals[1:]):
        if b < a - tol:
            raise ValueError("budgets must be non-decreasing")
        if b > 2 * a + tol:
            raise ValueError("budgets must satisfy B_l <= 2 B_{l/2}")
    pts = [(0.0, 0.0), (float(m), vals[-1])] + [(float(l), v) for l, v in zip(levels, vals)]
    hull = _upper_hull(pts)
    xs = np.array([p[0] for p in hull])
    ys = np.array([p[1] for p in hull])
    return np.interp(np.arange(m + 1, dtype=float), xs, ys)


def envelope_vector(B: Mapping[int, float], m: int) -> np.ndarray:
    """Non-increasing ``b`` whose prefix sums are the envelope curve."""
    curve = envelope_curve(B, m)
    b = np.diff(curve)
    # concavity makes b non-increasing; clear rounding noise
    return np.maximum(np.minimum.accumulate(b), 0.0)


def _powers_of_two(lo: float, hi: float, lo_closed: bool, hi_closed: bool) -> list[float]:
    if not (hi > 0):
        return []
    k = math.floor(math.log2(lo)) - 1 if lo > 0 else -1075
    out = []
    while True:
        v = math.ldexp(1.0, k)
        if v > hi or (v == hi and not hi_closed):
            break
        if v > lo or (v == lo and lo_closed):
            out.append(v)
        k += 1
    return out


def enumerate_guesses_loadbal(UB: float, m: int) -> list[GuessVector]:
    """All power-of-two vectors with ``2UB/m^2 <= t_l < 4UB`` and ``t_l / t_{2l}`` in {1, 2}.

    Ordered by ``t_1`` ascending, then by the halving pattern (lexicographic,
    "no halving" first).
    """
    if not UB > 0:
        raise ValueError("UB must be positive")
    lo, hi = 2.0 * UB / m**2, 4.0 * UB
    levels = pos_set(m)
    out = []
    for t1 in _powers_of_two(lo, hi, lo_closed=True, hi_closed=False):
        for halvings in itertools.product((0, 1), repeat=len(levels) - 1):
            ts = [t1]
            for h in halvings:
                ts.append(ts[-1] / 2 if h else ts[-1])
            if ts[-1] >= lo:
                out.append(GuessVector(m, tuple(ts)))
    return out


def enumerate_guesses_tree(UB: float, dim: int, n_vertices: int | None = None) -> list[GuessVector]:
    """Non-increasing power-of-two vectors over ``pos_set(dim)`` in ``(delta/2, 8UB + delta]``.

    ``delta = UB / n^2`` with ``n = n_vertices`` (default ``dim + 1``).
    Ordered lexicographically by exponents, smallest first.
    """
    if not UB > 0:
        raise ValueError("UB must be positive")
    n = dim + 1 if n_vertices is None else n_vertices
    if n < 2:
        raise ValueError("need at least two vertices")
    delta = UB / n**2
    powers = _powers_of_two(delta / 2, 8 * UB + delta, lo_closed=False, hi_closed=True)
    k = len(pos_set(dim))
    out = []
    for combo in itertools.combinations_with_replacement(range(len(powers)), k):
        ts = tuple(powers[c] for c in reversed(combo))
        out.append(GuessVector(dim, ts))
    out.sort(key=lambda g: g.values)
    return out


def tree_delta(UB: float, n_vertices: int) -> float:
    return UB / n_vertices**2


def canonical_guess_loadbal(expected_topl: Mapping[int, float], m: int) -> GuessVector:
    """Smallest powers of two with ``t_l >= 2 E[top_l(opt)] / l``."""
    ts = []
    for l in pos_set(m):
        target = 2.0 * expected_topl[l] / l
        ts.append(_smallest_power_at_least(target))
    return GuessVector(m, tuple(ts))


def canonical_guess_tree(taus: Mapping[int, float], dim: int, delta: float) -> GuessVector:
    """Largest powers of two with ``t_l <= 2 tau_l(opt) + delta``."""
    ts = [_largest_power_at_most(2.0 * taus[l] + delta) for l in pos_set(dim)]
    return GuessVector(dim, tuple(ts))


def _smallest_power_at_least(x: float) -> float:
    if not x > 0:
        raise ValueError("target must be positive")
    mant, exp = math.frexp(x)
    return math.ldexp(1.0, exp - 1) if mant == 0.5 else math.ldexp(1.0, exp)


def _largest_power_at_most(x: float) -> float:
    if not x > 0:
        raise ValueError("target must be positive")
    _, exp = math.frexp(x)
    return math.ldexp(1.0, exp - 1)


def monotone_sequence_count(M: int, k: int) -> int:
    """Number of non-increasing length-``k`` sequences over ``{0..M}``."""
    return math.comb(M + k, k)


def monotone_sequence_bound(M: int, k: int) -> float:
    return (2 * math.e) ** max(M, k)
