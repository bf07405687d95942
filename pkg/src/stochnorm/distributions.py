"""Finite discrete nonnegative random variables.

A :class:`DiscreteRV` stores its support as sorted, distinct values with
strictly positive probabilities.  All operations are exact on the finite
support; sums use :func:`math.fsum` so no probability mass is lost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceededError

PROB_TOL = 1e-9
DOMINANCE_TOL = 1e-12
DEFAULT_SUPPORT_CAP = 10**6


def _canonical(values, probs):
    values = np.asarray(values, dtype=float).ravel()
    probs = np.asarray(probs, dtype=float).ravel()
    if values.shape != probs.shape:
        raise ValueError("values and probs must have the same length")
    if values.size == 0:
        raise ValueError("a random variable needs at least one atom")
    if not np.all(np.isfinite(values)) or not np.all(np.isfinite(probs)):
        raise ValueError("values and probs must be finite")
    if np.any(values < 0):
        raise ValueError("values must be nonnegative")
    if np.any(probs < 0) or np.any(probs > 1 + PROB_TOL):
        raise ValueError("probabilities must lie in [0, 1]")
    keep = probs > 0
    values, probs = values[keep], probs[keep]
    uniq, inverse = np.unique(values, return_inverse=True)
    if uniq.size != values.size:
        probs = np.bincount(inverse.ravel(), weights=probs, minlength=uniq.size)
    else:
        order = np.argsort(values, kind="stable")
        probs = probs[order]
    total = math.fsum(probs)
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"probabilities sum to {total!r}, expected 1")
    uniq = uniq.copy()
    probs = probs.copy()
    uniq.setflags(write=False)
    probs.setflags(write=False)
    return uniq, probs


@dataclass(frozen=True, eq=False)
class DiscreteRV:
    """Nonnegative random variable with finite support.

    Parameters
    ----------
    values : array_like
        Support points, nonnegative.  Repeated values are merged.
    probs : array_like
        Probability of each value.  Must sum to one within ``1e-9``.
        Zero-probability atoms are discarded.
    """

    values: np.ndarray
    probs: np.ndarray

    def __init__(self, values, probs):
        v, p = _canonical(values, probs)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "probs", p)

    # constructors -----------------------------------------------------

    @classmethod
    def point(cls, value: float) -> "DiscreteRV":
        return cls([value], [1.0])

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "DiscreteRV":
        pairs = list(pairs)
        return cls([a for a, _ in pairs], [b for _, b in pairs])

    @classmethod
    def from_dict(cls, mapping: Mapping[float, float]) -> "DiscreteRV":
        return cls(list(mapping.keys()), list(mapping.values()))

    # basic accessors --------------------------------------------------

    @property
    def size(self) -> int:
        return int(self.values.size)

    def atoms(self) -> list[tuple[float, float]]:
        return [(float(v), float(p)) for v, p in zip(self.values, self.probs)]

    @property
    def max_value(self) -> float:
        return float(self.values[-1])

    def is_bernoulli(self) -> bool:
        """True when the support is ``{s}`` or ``{0, s}``."""
        nonzero = self.values[self.values > 0]
        return nonzero.size <= 1

    def __eq__(self, other):
        if not isinstance(other, DiscreteRV):
            return NotImplemented
        return (
            self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
            and bool(np.array_equal(self.probs, other.probs))
        )

    def __hash__(self):
        return hash((self.values.tobytes(), self.probs.tobytes()))

    def __repr__(self):
        inner = ", ".join(f"{v:g}: {p:g}" for v, p in self.atoms())
        return f"DiscreteRV({{{inner}}})"

    def allclose(self, other: "DiscreteRV", tol: float = 1e-12) -> bool:
        return (
            self.values.shape == other.values.shape
            and bool(np.allclose(self.values, other.values, atol=tol, rtol=0))
            and bool(np.allclose(self.probs, other.probs, atol=tol, rtol=0))
        )

    # moments ----------------------------------------------------------

    def mean(self) -> float:
        return math.fsum(self.values * self.probs)

    def tail(self, theta: float) -> float:
        """``Pr[X > theta]``."""
        return math.fsum(self.probs[self.values > theta])

    def tail_geq(self, theta: float) -> float:
        """``Pr[X >= theta]``."""
        return math.fsum(self.probs[self.values >= theta])

    def excess_mean(self, t: float) -> float:
        """``E[(X - t)^+]``."""
        return math.fsum(np.maximum(self.values - t, 0.0) * self.probs)

    def truncated_mean(self, theta: float) -> float:
        """``E[X^{<theta}]``, the mean of the part strictly below theta."""
        mask = self.values < theta
        return math.fsum(self.values[mask] * self.probs[mask])

    def exceptional_mean(self, theta: float) -> float:
        """``E[X^{>=theta}]``, the mean of the part at or above theta."""
        mask = self.values >= theta
        return math.fsum(self.values[mask] * self.probs[mask])

    # transformations --------------------------------------------------

    def scale(self, c: float) -> "DiscreteRV":
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        return DiscreteRV(self.values * c, self.probs)

    def restrict(self, theta: float, part: str) -> "DiscreteRV":
        """Split at ``theta``; the discarded part is moved to zero.

        ``part="below"`` keeps values ``< theta``; ``part="at_or_above"``
        keeps values ``>= theta``.
        """
        if part == "below":
            keep = self.values < theta
        elif part == "at_or_above":
            keep = self.values >= theta
        else:
            raise ValueError(f"unknown part {part!r}")
        return DiscreteRV(np.where(keep, self.values, 0.0), self.probs)

    def below(self, theta: float) -> "DiscreteRV":
        return self.restrict(theta, "below")

    def at_or_above(self, theta: float) -> "DiscreteRV":
        return self.restrict(theta, "at_or_above")

    def effective_size(self, lam: float) -> float:
        """``log_lam E[lam^X]`` computed in log space.

        For ``lam == 1`` this is the mean.
        """
        if lam < 1:
            raise ValueError("lambda must be >= 1")
        if lam == 1:
            return self.mean()
        log_lam = math.log(lam)
        terms = np.log(self.probs) + self.values * log_lam
        top = float(terms.max())
        return (top + math.log(math.fsum(np.exp(terms - top)))) / log_lam

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-CDF sampling with an explicit generator."""
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right")
        idx = np.minimum(idx, self.values.size - 1)
        out = self.values[idx]
        return float(out) if size is None else out


def bernoulli_trial(q: float, s: float) -> DiscreteRV:
    """Random variable equal to ``s`` with probability ``q`` and 0 otherwise."""
    if not (0 < q <= 1):
        raise ValueError("q must lie in (0, 1]")
    if not s > 0:
        raise ValueError("s must be positive")
    if q == 1:
        return DiscreteRV([s], [1.0])
    return DiscreteRV([0.0, s], [1.0 - q, q])


def modified_effective_size(q: float, s: float, lam: float) -> float:
    """``min(s, s * q * lam**s)``, a linear surrogate for the effective size."""
    return min(s, s * q * lam**s)


def convolve(x: DiscreteRV, y: DiscreteRV, cap: int = DEFAULT_SUPPORT_CAP) -> DiscreteRV:
    """Exact distribution of ``x + y`` for independent ``x`` and ``y``."""
    if x.size * y.size > cap:
        raise CapExceededError(
            f"convolution would create {x.size * y.size} atoms (cap {cap})"
        )
    vals = np.add.outer(x.values, y.values).ravel()
    probs = np.multiply.outer(x.probs, y.probs).ravel()
    uniq, inverse = np.unique(vals, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=probs, minlength=uniq.size)
    return DiscreteRV(uniq, merged)


def convolve_all(rvs: Iterable[DiscreteRV], cap: int = DEFAULT_SUPPORT_CAP) -> DiscreteRV:
    total = DiscreteRV.point(0.0)
    for rv in rvs:
        total = convolve(total, rv, cap=cap)
    return total


def round_up_to_geometric(x: DiscreteRV) -> DiscreteRV:
    """Round every nonzero value up to the next power of two."""
    vals = x.values.copy()
    nz = vals > 0
    vals[nz] = np.exp2(np.ceil(np.log2(vals[nz])))
    return DiscreteRV(vals, x.probs)


def _is_power_of_two(v: float) -> bool:
    if v <= 0:
        return False
    mant, _ = math.frexp(v)
    return mant == 0.5


def is_geometric(x: DiscreteRV) -> bool:
    return all(_is_power_of_two(float(v)) for v in x.values if v > 0)


def bernoulli_decompose(x: DiscreteRV) -> list[tuple[float, float]]:
    """Write a geometric r.v. as a sum of independent Bernoulli trials.

    Returns ``(q, s)`` pairs, one per nonzero support value, listed in
    decreasing order of ``s``.  The sum of independent trials is
    stochastically dominated by ``x``.
    """
    if not is_geometric(x):
        raise ValueError("support values must be zero or powers of two")
    pairs: list[tuple[float, float]] = []
    survive = 1.0
    for v, p in zip(x.values[::-1], x.probs[::-1]):
        if v == 0:
            continue
        q = min(1.0, float(p) / survive) if survive > 0 else 1.0
        if q > 1.0 - 1e-12:
            # the remaining mass is all on v; avoid a spurious atom at 0
            q = 1.0
        pairs.append((q, float(v)))
        survive *= 1.0 - q
    return pairs


def max_of_trials(pairs: Sequence[tuple[float, float]]) -> DiscreteRV:
    """Distribution of ``max_k B_k`` for independent trials (q_k, s_k)."""
    survive = 1.0
    atoms: dict[float, float] = {}
    for q, s in sorted(pairs, key=lambda qs: -qs[1]):
        atoms[s] = atoms.get(s, 0.0) + survive * q
        survive *= 1.0 - q
    values = list(atoms.keys()) + [0.0]
    probs = list(atoms.values()) + [survive]
    return DiscreteRV(values, probs)


def sum_of_trials(pairs: Sequence[tuple[float, float]]) -> DiscreteRV:
    return convolve_all(bernoulli_trial(q, s) for q, s in pairs)


def stochastically_dominates(a: DiscreteRV, b: DiscreteRV, tol: float = DOMINANCE_TOL) -> bool:
    """True when ``Pr[a >= v] >= Pr[b >= v] - tol`` for every threshold v."""
    grid = np.union1d(a.values, b.values)
    return all(a.tail_geq(v) >= b.tail_geq(v) - tol for v in grid)
