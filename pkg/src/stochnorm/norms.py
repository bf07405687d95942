"""Monotone symmetric norms on nonnegative vectors.

Every norm is an immutable object with a value oracle: ``f(x)`` for one
vector and ``f.evaluate_many(X)`` for the rows of a matrix.  Norms are not
tied to a dimension unless built with one; ``TopL(l)`` applied to a vector
with fewer than ``l`` coordinates returns the sum of all coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

NORM_TOL = 1e-9


def _as_rows(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    return X


def sorted_desc(X) -> np.ndarray:
    """Sort each row in non-increasing order."""
    return -np.sort(-_as_rows(X), axis=1)


def top_l(x, l: int) -> float:
    """Sum of the ``l`` largest coordinates of ``x``."""
    x = np.asarray(x, dtype=float)
    if not 1 <= l <= x.size:
        raise ValueError(f"l={l} out of range for a vector of length {x.size}")
    return float(np.sort(x)[::-1][:l].sum())


def ordered_norm(x, w) -> float:
    """``w . sorted(x, descending)`` for non-increasing nonnegative ``w``."""
    return float(Ordered(tuple(w))(x))


class Norm:
    """Base class.  Subclasses implement :meth:`evaluate_many`."""

    def evaluate_many(self, X) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def __call__(self, x) -> float:
        return float(self.evaluate_many(np.asarray(x, dtype=float)[None, :])[0])

    def unit_value(self) -> float:
        """``f(e_1)``."""
        return self([1.0])

    @property
    def normalized(self) -> bool:
        return abs(self.unit_value() - 1.0) <= NORM_TOL

    def as_normalized(self) -> "Norm":
        u = self.unit_value()
        if u <= 0:
            raise ValueError("norm vanishes on e_1")
        if abs(u - 1.0) <= NORM_TOL:
            return self
        return Scaled(self, 1.0 / u)

    def spec(self) -> str:
        raise ValueError(f"{type(self).__name__} has no textual form")


@dataclass(frozen=True)
class TopL(Norm):
    l: int

    def __post_init__(self):
        if self.l < 1:
            raise ValueError("l must be >= 1")

    def evaluate_many(self, X):
        S = sorted_desc(X)
        return S[:, : self.l].sum(axis=1)

    def spec(self):
        return f"top:{self.l}"


@dataclass(frozen=True)
class Ordered(Norm):
    weights: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty vector")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if np.any(np.diff(w) > 0):
            raise ValueError("weights must be non-increasing")
        if w[0] == 0:
            raise ValueError("leading weight must be positive")
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    def _padded(self, m: int) -> np.ndarray:
        w = np.zeros(m)
        k = min(m, len(self.weights))
        w[:k] = self.weights[:k]
        return w

    def evaluate_many(self, X):
        S = sorted_desc(X)
        return S @ self._padded(S.shape[1])

    def decomposed(self, x) -> float:
        """Same value through ``sum_l (w_l - w_{l+1}) top_l(x)``."""
        x = np.asarray(x, dtype=float)
        w = self._padded(x.size)
        diffs = w - np.append(w[1:], 0.0)
        s = np.cumsum(np.sort(x)[::-1])
        return float(diffs @ s)

    def spec(self):
        return "ordered:" + ",".join(repr(w) for w in self.weights)


@dataclass(frozen=True)
class Lp(Norm):
    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError("p must be >= 1")

    def evaluate_many(self, X):
        X = np.abs(_as_rows(X))
        if np.isinf(self.p):
            return X.max(axis=1) if X.shape[1] else np.zeros(X.shape[0])
        if self.p == 1:
            return X.sum(axis=1)
        # scale by the row max to avoid overflow
        mx = X.max(axis=1) if X.shape[1] else np.zeros(X.shape[0])
        safe = np.where(mx > 0, mx, 1.0)
        return mx * ((X / safe[:, None]) ** self.p).sum(axis=1) ** (1.0 / self.p)

    def spec(self):
        return "lp:inf" if np.isinf(self.p) else f"lp:{self.p!r}"


@dataclass(frozen=True)
class Scaled(Norm):
    base: Norm
    factor: float

    def __post_init__(self):
        if not self.factor > 0:
            raise ValueError("factor must be positive")

    def evaluate_many(self, X):
        return self.factor * self.base.evaluate_many(X)

    def spec(self):
        return f"max[{self.base.spec()}@{1.0 / self.factor!r}]"


@dataclass(frozen=True)
class MaxScaled(Norm):
    """``max_k f_k(x) / B_k``."""

    parts: tuple

    def __post_init__(self):
        parts = tuple((norm, float(b)) for norm, b in self.parts)
        if not parts:
            raise ValueError("max_scaled needs at least one norm")
        dims = {getattr(n, "dimension", None) for n, _ in parts} - {None}
        if len(dims) > 1:
            raise ValueError("dimension mismatch between norms")
        for _, b in parts:
            if not b > 0:
                raise ValueError("budgets must be positive")
        object.__setattr__(self, "parts", parts)

    def evaluate_many(self, X):
        vals = [norm.evaluate_many(X) / b for norm, b in self.parts]
        return np.max(np.vstack(vals), axis=0)

    def spec(self):
        return "max[" + ";".join(f"{n.spec()}@{b!r}" for n, b in self.parts) + "]"


@dataclass(frozen=True)
class CustomNorm(Norm):
    """Norm given only by a value oracle on single vectors.

    The oracle must be monotone and symmetric; this is not checked.
    """

    oracle: Callable[[np.ndarray], float]
    name: str = "custom"
    dimension: int | None = None

    def evaluate_many(self, X):
        X = _as_rows(X)
        return np.array([float(self.oracle(row)) for row in X])


def max_scaled(norms: Sequence[Norm], budgets: Sequence[float]) -> MaxScaled:
    if len(norms) != len(budgets):
        raise ValueError("need one budget per norm")
    return MaxScaled(tuple(zip(norms, budgets)))


def norm_dominance_bound(x, y, alpha: float, beta: float) -> bool:
    """Whether ``top_l(x) <= alpha * top_l(y) + beta`` for every ``l``.

    When this holds, every monotone symmetric norm satisfies
    ``f(x) <= alpha * f(y) + beta * f(e_1)``.
    """
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    m = max(x.size, y.size)
    x = np.pad(x, (0, m - x.size))
    y = np.pad(y, (0, m - y.size))
    return bool(np.all(np.cumsum(x) <= alpha * np.cumsum(y) + beta + NORM_TOL))


def parse_norm(text: str) -> Norm:
    """Parse ``top:l``, ``ordered:w1,w2,...``, ``lp:p`` or ``max[f@B;...]``."""
    text = text.strip()
    if text.startswith("max[") and text.endswith("]"):
        body = text[4:-1]
        parts = []
        for chunk in _split_top_level(body):
            head, sep, budget = chunk.rpartition("@")
            if not sep:
                raise ValueError(f"missing '@budget' in {chunk!r}")
            parts.append((parse_norm(head), float(budget)))
        return MaxScaled(tuple(parts))
    kind, sep, arg = text.partition(":")
    if not sep:
        raise ValueError(f"cannot parse norm {text!r}")
    if kind == "top":
        return TopL(int(arg))
    if kind == "ordered":
        return Ordered(tuple(float(v) for v in arg.split(",")))
    if kind == "lp":
        return Lp(float("inf") if arg in ("inf", "max") else float(arg))
    raise ValueError(f"unknown norm kind {kind!r}")


def _split_top_level(body: str) -> list[str]:
    out, depth, start = [], 0, 0
    for k, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == ";" and depth == 0:
            out.append(body[start:k])
            start = k + 1
    out.append(body[start:])
    return [c for c in out if c.strip()]
