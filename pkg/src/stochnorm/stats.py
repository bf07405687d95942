"""Statistics of random vectors with independent coordinates.

The quantities here drive every guarantee in the package:

* ``expected_count_above(theta)``: expected number of coordinates above theta,
* ``tau(l)``: the smallest threshold where that count drops below ``l``,
* ``gamma(l)``: a closed-form proxy within factor 4 of ``E[top_l(Y)]``,

plus exact (enumeration) and Monte Carlo estimates of ``E[f(Y)]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .distributions import DiscreteRV
from .errors import CapExceededError
from .norms import Norm, TopL, sorted_desc

DEFAULT_JOINT_CAP = 10**7
COUNT_TOL = 1e-12
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ProductVector:
    """Random vector whose coordinates are independent ``DiscreteRV``s."""

    coords: tuple

    def __init__(self, coords: Sequence[DiscreteRV]):
        coords = tuple(coords)
        if not coords:
            raise ValueError("a product vector needs at least one coordinate")
        for c in coords:
            if not isinstance(c, DiscreteRV):
                raise TypeError("coordinates must be DiscreteRV")
        object.__setattr__(self, "coords", coords)

    @property
    def m(self) -> int:
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def joint_size(self) -> int:
        return math.prod(c.size for c in self.coords)

    def breakpoints(self) -> np.ndarray:
        """0 together with every support value, sorted."""
        return np.unique(np.concatenate([[0.0]] + [c.values for c in self.coords]))

    def outcomes(self, cap: int = DEFAULT_JOINT_CAP) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yield ``(values, probs)`` chunks covering the joint support."""
        total = self.joint_size()
        if total > cap:
            raise CapExceededError(
                f"joint support has {total} outcomes (cap {cap}); use the Monte Carlo estimator"
            )
        sizes = [c.size for c in self.coords]
        for start in range(0, total, _CHUNK):
            flat = np.arange(start, min(total, start + _CHUNK))
            idx = np.unravel_index(flat, sizes)
            vals = np.column_stack([c.values[k] for c, k in zip(self.coords, idx)])
            probs = np.prod(np.column_stack([c.probs[k] for c, k in zip(self.coords, idx)]), axis=1)
            yield vals, probs

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """``n`` independent draws as an ``(n, m)`` array."""
        return np.column_stack([c.sample(rng, n) for c in self.coords])


def expected_count_above(Y: ProductVector, theta: float) -> float:
    """``E[#{i : Y_i > theta}]``."""
    return math.fsum(c.tail(theta) for c in Y.coords)


def exceptional_mass(Y: ProductVector, theta: float) -> float:
    """``sum_i E[Y_i^{>=theta}]``."""
    return math.fsum(c.exceptional_mean(theta) for c in Y.coords)


def total_excess(Y: ProductVector, t: float) -> float:
    """``sum_i E[(Y_i - t)^+]``."""
    return math.fsum(c.excess_mean(t) for c in Y.coords)


def tau(Y: ProductVector, l: int) -> float:
    """``inf{theta >= 0 : E[N^{>theta}(Y)] < l}``.

    ``tau(Y, 0)`` is infinite and ``tau(Y, l)`` is 0 for ``l > m``.  The
    count is a right-continuous step function, so the infimum is one of the
    breakpoints.  Comparisons allow ``1e-12`` of rounding slack.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l == 0:
        return math.inf
    if l > Y.m:
        return 0.0
    for theta in Y.breakpoints():
        if expected_count_above(Y, float(theta)) < l - COUNT_TOL:
            return float(theta)
    raise AssertionError("count must vanish at the largest support value")


def tau_vector(Y: ProductVector, levels: Sequence[int]) -> dict[int, float]:
    return {l: tau(Y, l) for l in levels}


def gamma(Y: ProductVector, l: int) -> float:
    """``l * tau_l + sum_i E[(Y_i - tau_l)^+]``."""
    if not 1 <= l <= Y.m:
        raise ValueError(f"l={l} out of range")
    t = tau(Y, l)
    return l * t + total_excess(Y, t)


def gamma_min_form(Y: ProductVector, l: int) -> float:
    """``min_t (l * t + sum_i E[(Y_i - t)^+])`` over the breakpoints."""
    if not 1 <= l <= Y.m:
        raise ValueError(f"l={l} out of range")
    return min(l * float(t) + total_excess(Y, float(t)) for t in Y.breakpoints())


def integrate_count_above(Y: ProductVector, t: float) -> float:
    """``int_t^inf E[N^{>theta}] d theta``, exact on the step function."""
    pts = Y.breakpoints()
    pts = np.unique(np.concatenate([[t], pts[pts > t]]))
    total = []
    for a, b in zip(pts[:-1], pts[1:]):
        total.append(expected_count_above(Y, float(a)) * float(b - a))
    return math.fsum(total)


def _exact_expectations(Y: ProductVector, norms: Sequence[Norm], cap: int) -> list[float]:
    parts: list[list[float]] = [[] for _ in norms]
    for vals, probs in Y.outcomes(cap):
        for k, f in enumerate(norms):
            parts[k].append(float(probs @ f.evaluate_many(vals)))
    return [math.fsum(p) for p in parts]


def expected_norms_exact(Y: ProductVector, norms: Sequence[Norm], cap: int = DEFAULT_JOINT_CAP) -> list[float]:
    """Exact ``E[f(Y)]`` for several norms in a single enumeration pass."""
    return _exact_expectations(Y, list(norms), cap)


def expected_topl_exact(Y: ProductVector, l: int, cap: int = DEFAULT_JOINT_CAP) -> float:
    if not 1 <= l <= Y.m:
        raise ValueError(f"l={l} out of range")
    return _exact_expectations(Y, [TopL(l)], cap)[0]


def expected_norm(
    Y: ProductVector,
    f: Norm,
    method: str = "exact",
    n_samples: int = 10_000,
    seed: int = 0,
    cap: int = DEFAULT_JOINT_CAP,
) -> tuple[float, float]:
    """Estimate ``E[f(Y)]``.

    Returns ``(estimate, half_width)``.  ``method="exact"`` enumerates the
    joint support and has zero half-width; ``method="mc"`` averages
    ``n_samples`` draws from ``numpy.random.default_rng(seed)`` and reports a
    95% normal-approximation half-width.
    """
    if method == "exact":
        return _exact_expectations(Y, [f], cap)[0], 0.0
    if method == "mc":
        if n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        rng = np.random.default_rng(seed)
        vals = f.evaluate_many(Y.sample(rng, n_samples))
        est = float(vals.mean())
        if n_samples == 1:
            return est, math.inf
        return est, float(1.959963984540054 * vals.std(ddof=1) / math.sqrt(n_samples))
    raise ValueError(f"unknown method {method!r}")


def sorted_mean_vector(
    Y: ProductVector,
    method: str = "exact",
    n_samples: int = 10_000,
    seed: int = 0,
    cap: int = DEFAULT_JOINT_CAP,
) -> np.ndarray:
    """``E[Y sorted in non-increasing order]``, coordinate by coordinate."""
    if method == "exact":
        acc = np.zeros(Y.m)
        for vals, probs in Y.outcomes(cap):
            acc += probs @ sorted_desc(vals)
        return acc
    if method == "mc":
        rng = np.random.default_rng(seed)
        return sorted_desc(Y.sample(rng, n_samples)).mean(axis=0)
    raise ValueError(f"unknown method {method!r}")
