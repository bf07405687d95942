"""Stochastic minimum-norm spanning trees and matroid bases.

Each element ``e`` carries an independent weight ``X_e``.  For a guess vector
``t`` over ``pos_set(r)`` (``r`` the rank) the relaxation is

    min  sum_e E[(X_e - t_1)^+] z_e
    s.t. sum_e Pr[X_e > t_l] z_e <= l      for every level l
         z in the base polytope.

A guess is scored by ``val(t) = LPOPT + f(expansion(t))``.  The best guess's
extreme point is rounded with rows scaled by ``1/l``, so the largest column
sum is ``nu = sum_l 1/l < 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import constants as K
from .distributions import DiscreteRV
from .envelope import GuessVector, enumerate_guesses_tree, pos_set
from .errors import GuaranteeViolation, InfeasibleError
from .matroid_lp import GraphicMatroid, Matroid, _UnionFind, solve_over_base_polytope
from .norms import Norm
from .rounding import BudgetedMatroidLP, iterative_round
from .stats import DEFAULT_JOINT_CAP, ProductVector, expected_norms_exact, tau

TOL = 1e-6


@dataclass(frozen=True, eq=False)
class BasisInstance:
    """A matroid with one weight distribution per ground element (in ground order)."""

    matroid: Matroid
    dist: tuple
    slack_size: int | None = None

    def __init__(self, matroid: Matroid, dist: Sequence[DiscreteRV], slack_size: int | None = None):
        dist = tuple(dist)
        if len(dist) != len(matroid.ground):
            raise ValueError("need one distribution per ground element")
        if any(not isinstance(x, DiscreteRV) for x in dist):
            raise TypeError("element weights must be DiscreteRV")
        if matroid.full_rank() < 1:
            raise ValueError("matroid rank must be at least 1")
        object.__setattr__(self, "matroid", matroid)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "slack_size", slack_size)

    @property
    def rank(self) -> int:
        return self.matroid.full_rank()

    @property
    def delta_size(self) -> int:
        # the additive slack is UB / size^2; rank + 1 unless set (trees use |V|)
        return self.rank + 1 if self.slack_size is None else self.slack_size

    def means(self) -> np.ndarray:
        return np.array([x.mean() for x in self.dist])

    def weights(self, basis: Sequence[int]) -> ProductVector:
        return ProductVector([self.dist[k] for k in basis])


@dataclass(frozen=True, eq=False)
class TreeInstance:
    """Connected multigraph on vertices ``0..n-1``; ``edges[k] = (u, v)`` has weight ``dist[k]``."""

    n_vertices: int
    edges: tuple
    dist: tuple

    def __init__(self, n_vertices: int, edges: Sequence[tuple[int, int]], dist: Sequence[DiscreteRV]):
        edges = tuple((int(u), int(v)) for u, v in edges)
        dist = tuple(dist)
        if n_vertices < 2:
            raise ValueError("need at least two vertices")
        if len(edges) != len(dist):
            raise ValueError("need one distribution per edge")
        for k, (u, v) in enumerate(edges):
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge {k} has an endpoint out of range")
            if u == v:
                raise ValueError(f"edge {k} is a self-loop")
        if any(not isinstance(x, DiscreteRV) for x in dist):
            raise TypeError("edge weights must be DiscreteRV")
        uf = _UnionFind(range(n_vertices))
        if sum(uf.union(u, v) for u, v in edges) != n_vertices - 1:
            raise ValueError("graph is not connected")
        object.__setattr__(self, "n_vertices", int(n_vertices))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "dist", dist)

    def matroid(self) -> GraphicMatroid:
        return GraphicMatroid.from_edge_list(self.n_vertices, self.edges)

    def as_basis(self) -> BasisInstance:
        return BasisInstance(self.matroid(), self.dist, slack_size=self.n_vertices)


def _as_basis(inst) -> BasisInstance:
    return inst.as_basis() if isinstance(inst, TreeInstance) else inst


class _EdgeStats:
    """``Pr[X_e > t]`` and ``E[(X_e - t)^+]`` per threshold, cached."""

    def __init__(self, dist: Sequence[DiscreteRV]):
        self.dist = dist
        self._tail: dict[float, np.ndarray] = {}
        self._excess: dict[float, np.ndarray] = {}

    def tail(self, t: float) -> np.ndarray:
        if t not in self._tail:
            self._tail[t] = np.array([x.tail(t) for x in self.dist])
        return self._tail[t]

    def excess(self, t: float) -> np.ndarray:
        if t not in self._excess:
            self._excess[t] = np.array([x.excess_mean(t) for x in self.dist])
        return self._excess[t]


def upper_bound(inst) -> float:
    """Weight of a minimum basis under the mean weights."""
    b = _as_basis(inst)
    cost = dict(zip(b.matroid.ground, b.means()))
    return math.fsum(cost[e] for e in b.matroid.greedy_min_basis(cost))


def mean_weight_basis(inst) -> tuple[int, ...]:
    b = _as_basis(inst)
    index = {e: k for k, e in enumerate(b.matroid.ground)}
    basis = b.matroid.greedy_min_basis(dict(zip(b.matroid.ground, b.means())))
    return tuple(sorted(index[e] for e in basis))


@dataclass
class BasisLP:
    z: np.ndarray  # aligned with the matroid ground set
    objective: float


def _lp(b: BasisInstance, guess: GuessVector, stats: _EdgeStats) -> BasisLP | None:
    if guess.m != b.rank:
        raise ValueError("guess dimension must equal the rank")
    A = np.array([stats.tail(guess[l]) for l in guess.levels])
    rhs = np.array([float(l) for l in guess.levels])
    c = stats.excess(guess[1])
    sol = solve_over_base_polytope(b.matroid, A, rhs, c)
    if sol is None:
        return None
    return BasisLP(np.clip(sol.point, 0.0, 1.0), sol.objective)


def lp_tree(inst, guess: GuessVector) -> BasisLP | None:
    """Optimal extreme point of the relaxation for ``guess``, or ``None`` if infeasible."""
    b = _as_basis(inst)
    return _lp(b, guess, _EdgeStats(b.dist))


@dataclass
class TreeRounding:
    basis: tuple  # ground-set indices
    cost: float
    lp_cost: float
    nu: float
    checks: dict = field(default_factory=dict)


def _round(b: BasisInstance, guess: GuessVector, lp: BasisLP, stats: _EdgeStats) -> TreeRounding:
    levels = guess.levels
    A = np.array([stats.tail(guess[l]) / l for l in levels])
    nu = math.fsum(1.0 / l for l in levels)
    c = stats.excess(guess[1])
    P = BudgetedMatroidLP(b.matroid, A, np.ones(len(levels)), c, lp.z, nu)
    rep = iterative_round(P)
    index = {e: k for k, e in enumerate(b.matroid.ground)}
    basis = tuple(sorted(index[e] for e in rep.basis))
    chi = np.zeros(len(b.dist))
    chi[list(basis)] = 1.0
    cost = float(c @ chi)
    checks = {"excess": (cost, lp.objective)}
    if cost > lp.objective + TOL * max(1.0, abs(lp.objective)):
        raise GuaranteeViolation("rounded excess exceeds LPOPT", checks)
    Y = b.weights(basis)
    for l in levels:
        count = float(stats.tail(guess[l]) @ chi)
        bound = l * (1.0 + nu)
        checks[f"count_above[{l}]"] = (count, bound)
        if count > bound + TOL or count >= 3 * l:
            raise GuaranteeViolation(f"expected count above t_{l} is not below 3l", checks)
        t3 = tau(Y, 3 * l)
        checks[f"tau[{3 * l}]"] = (t3, guess[l])
        if t3 > guess[l] + 1e-12:
            raise GuaranteeViolation(f"tau_{3 * l} exceeds t_{l}", checks)
    return TreeRounding(basis, cost, lp.objective, nu, checks)


def round_tree(inst, guess: GuessVector, lp: BasisLP) -> TreeRounding:
    """Round an LP point to a basis; asserts the excess and count bounds."""
    b = _as_basis(inst)
    return _round(b, guess, lp, _EdgeStats(b.dist))


@dataclass
class TreeGuessRecord:
    guess: GuessVector
    feasible: bool
    lp_value: float | None
    val: float | None  # LPOPT + f(expansion)


@dataclass
class TreeResult:
    basis: tuple
    UB: float
    delta: float
    selected: GuessVector | None
    val: float
    guesses: list
    rounding: TreeRounding | None
    expected_norm: float | None  # exact when affordable
    ratio_bound: float = K.TREE_RATIO


def candidate_guesses(inst) -> list[tuple[GuessVector, BasisLP | None]]:
    """Every guess with its LP solution (``None`` when infeasible); shareable across norms."""
    b = _as_basis(inst)
    UB = upper_bound(b)
    if UB == 0:
        return []
    stats = _EdgeStats(b.dist)
    return [(g, _lp(b, g, stats)) for g in enumerate_guesses_tree(UB, b.rank, b.delta_size)]


def _solve(b: BasisInstance, f: Norm, candidates, exact_cap: int) -> TreeResult:
    f = f.as_normalized()
    UB = upper_bound(b)
    delta = UB / b.delta_size**2
    if UB == 0:
        basis = mean_weight_basis(b)
        return TreeResult(basis, 0.0, 0.0, None, 0.0, [], None, 0.0)
    if candidates is None:
        candidates = candidate_guesses(b)
    records, best = [], None
    for g, lp in candidates:
        if lp is None:
            records.append(TreeGuessRecord(g, False, None, None))
            continue
        val = lp.objective + f(g.expanded())
        records.append(TreeGuessRecord(g, True, lp.objective, val))
        if best is None or val < best[0]:
            best = (val, g, lp)
    if best is None:
        raise InfeasibleError("no guess vector has a feasible LP")
    val, g, lp = best
    rnd = _round(b, g, lp, _EdgeStats(b.dist))
    Y = b.weights(rnd.basis)
    exact = None
    if Y.joint_size() <= exact_cap:
        exact = expected_norms_exact(Y, [f], cap=exact_cap)[0]
        rnd.checks["expected_norm"] = (exact, K.TREE_UPPER * val)
        if exact > K.TREE_UPPER * val + TOL:
            raise GuaranteeViolation("E[f] exceeds 126 val", rnd.checks)
    return TreeResult(rnd.basis, UB, delta, g, val, records, rnd, exact)


def solve_tree(inst: TreeInstance, f: Norm, candidates=None,
               exact_cap: int = DEFAULT_JOINT_CAP) -> TreeResult:
    """Spanning tree (edge indices) for the expected ``f``-norm of its weights."""
    return _solve(inst.as_basis(), f, candidates, exact_cap)


def solve_matroid_basis(inst: BasisInstance, f: Norm, candidates=None,
                        exact_cap: int = DEFAULT_JOINT_CAP) -> TreeResult:
    """Basis (ground-set indices) for the expected ``f``-norm of its weights."""
    return _solve(_as_basis(inst), f, candidates, exact_cap)


def tree_levels(inst: TreeInstance) -> tuple[int, ...]:
    return pos_set(inst.n_vertices - 1)


def mst_weight_vector(inst) -> np.ndarray:
    """Mean weights of the basis that is optimal under mean weights."""
    b = _as_basis(inst)
    return b.means()[list(mean_weight_basis(b))]
