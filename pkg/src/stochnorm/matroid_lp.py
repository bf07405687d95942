"""Matroids and linear programs over their base polytopes.

Three kinds are supported: partition matroids (explicit description),
graphic matroids (vertex-subset separation) and generic matroids given by a
rank oracle (exhaustive subset separation, small ground sets only).
Elements are arbitrary hashable labels; ``ground`` fixes their order, which
is also the coordinate order of LP points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import CapExceededError
from .simplex import solve_lp

SEPARATION_TOL = 1e-7
GENERIC_CAP = 20
GRAPHIC_VERTEX_CAP = 20


class Matroid:
    kind = "generic"
    ground: tuple

    def rank(self, subset: Iterable[Hashable]) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def full_rank(self) -> int:
        return self.rank(self.ground)

    def delete(self, elems: Iterable[Hashable]) -> "Matroid":  # pragma: no cover
        raise NotImplementedError

    def contract(self, elems: Iterable[Hashable]) -> "Matroid":  # pragma: no cover
        raise NotImplementedError

    def restrict(self, elems: Iterable[Hashable]) -> "Matroid":
        keep = set(elems)
        return self.delete([e for e in self.ground if e not in keep])

    def is_independent(self, subset) -> bool:
        subset = list(subset)
        return self.rank(subset) == len(subset)

    def is_basis(self, subset) -> bool:
        subset = list(subset)
        return len(set(subset)) == len(subset) and len(subset) == self.full_rank() and self.is_independent(subset)

    # LP description -------------------------------------------------
    def base_rows(self):
        """Initial rows ``(elements, rhs, is_equality)`` of the base polytope."""
        return [(self.ground, self.full_rank(), True)]

    def separate(self, z: dict) -> list[tuple[tuple, int, bool]]:
        """Rank rows ``z(A) <= r(A)`` violated by more than the tolerance."""
        return []

    def greedy_min_basis(self, cost: dict) -> list:
        """Minimum-cost basis; ties broken by ground-set order."""
        order = sorted(range(len(self.ground)), key=lambda k: (cost[self.ground[k]], k))
        chosen: list = []
        r = 0
        for k in order:
            e = self.ground[k]
            nr = self.rank(chosen + [e])
            if nr > r:
                chosen.append(e)
                r = nr
        return chosen


@dataclass(frozen=True, eq=False)
class PartitionMatroid(Matroid):
    """Pick at most ``capacities[p]`` elements from each part ``parts[p]``."""

    parts: tuple
    capacities: tuple

    kind = "partition"

    def __post_init__(self):
        parts = tuple(tuple(p) for p in self.parts)
        caps = tuple(int(k) for k in self.capacities)
        if len(parts) != len(caps):
            raise ValueError("one capacity per part")
        if any(k < 0 for k in caps):
            raise ValueError("capacities must be nonnegative")
        flat = [e for p in parts for e in p]
        if len(set(flat)) != len(flat):
            raise ValueError("parts must be disjoint")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "capacities", caps)
        object.__setattr__(self, "ground", tuple(flat))
        object.__setattr__(self, "_part_of", {e: k for k, p in enumerate(parts) for e in p})

    def rank(self, subset):
        counts = [0] * len(self.parts)
        for e in set(subset):
            counts[self._part_of[e]] += 1
        return sum(min(c, k) for c, k in zip(counts, self.capacities))

    def delete(self, elems):
        gone = set(elems)
        parts = tuple(tuple(e for e in p if e not in gone) for p in self.parts)
        caps = tuple(min(k, len(p)) for k, p in zip(self.capacities, parts))
        return PartitionMatroid(parts, caps)

    def contract(self, elems):
        gone = set(elems)
        caps, parts = [], []
        for p, k in zip(self.parts, self.capacities):
            hit = sum(1 for e in p if e in gone)
            rest = tuple(e for e in p if e not in gone)
            parts.append(rest)
            caps.append(min(max(k - hit, 0), len(rest)))
        return PartitionMatroid(tuple(parts), tuple(caps))

    def base_rows(self):
        rows = []
        for p, k in zip(self.parts, self.capacities):
            if p:
                rows.append((p, min(k, len(p)), True))
        for p, k in zip(self.parts, self.capacities):
            if min(k, len(p)) > 1:
                rows.extend(((e,), 1, False) for e in p)
        return rows


def assignment_matroid(m: int, n: int) -> PartitionMatroid:
    """Elements ``(i, j)``; each job ``j`` picks exactly one machine ``i``."""
    parts = tuple(tuple((i, j) for i in range(m)) for j in range(n))
    return PartitionMatroid(parts, (1,) * n)


class _UnionFind:
    def __init__(self, items):
        self.parent = {v: v for v in items}

    def find(self, v):
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True, eq=False)
class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; ``edges`` maps a label to its endpoints."""

    vertices: tuple
    edges: tuple  # of (label, u, v)

    kind = "graphic"

    def __post_init__(self):
        verts = tuple(self.vertices)
        edges = tuple((lab, u, v) for lab, u, v in self.edges)
        vs = set(verts)
        for lab, u, v in edges:
            if u not in vs or v not in vs:
                raise ValueError(f"edge {lab!r} has an endpoint outside the vertex set")
        labels = [e[0] for e in edges]
        if len(set(labels)) != len(labels):
            raise ValueError("edge labels must be distinct")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "ground", tuple(labels))
        object.__setattr__(self, "_ends", {lab: (u, v) for lab, u, v in edges})

    @classmethod
    def from_edge_list(cls, n_vertices: int, pairs: Sequence[tuple[int, int]]) -> "GraphicMatroid":
        return cls(tuple(range(n_vertices)), tuple((k, u, v) for k, (u, v) in enumerate(pairs)))

    def endpoints(self, label):
        return self._ends[label]

    def rank(self, subset):
        uf = _UnionFind(self.vertices)
        return sum(1 for e in set(subset) if uf.union(*self._ends[e]))

    def delete(self, elems):
        gone = set(elems)
        return GraphicMatroid(self.vertices, tuple(e for e in self.edges if e[0] not in gone))

    def contract(self, elems):
        uf = _UnionFind(self.vertices)
        gone = set(elems)
        for e in gone:
            uf.union(*self._ends[e])
        verts = tuple(sorted({uf.find(v) for v in self.vertices}))
        edges = tuple((lab, uf.find(u), uf.find(v)) for lab, u, v in self.edges if lab not in gone)
        return GraphicMatroid(verts, edges)

    def base_rows(self):
        rows = [(self.ground, self.full_rank(), True)]
        rows.extend(((lab,), 0, False) for lab, u, v in self.edges if u == v)
        return rows

    def separate(self, z):
        verts = sorted({u for _, u, _ in self.edges} | {v for _, _, v in self.edges})
        if len(verts) > GRAPHIC_VERTEX_CAP:
            raise CapExceededError(f"{len(verts)} vertices exceed the separation cap {GRAPHIC_VERTEX_CAP}")
        pos = {v: k for k, v in enumerate(verts)}
        masks = np.arange(1, 1 << len(verts), dtype=np.int64)
        sizes = np.zeros(masks.size, dtype=np.int64)
        for k in range(len(verts)):
            sizes += (masks >> k) & 1
        lhs = np.zeros(masks.size)
        inside = []
        for lab, u, v in self.edges:
            bit = (1 << pos[u]) | (1 << pos[v])
            inc = (masks & bit) == bit
            inside.append(inc)
            lhs += z[lab] * inc
        viol = lhs - (sizes - 1)
        order = np.argsort(-viol, kind="stable")
        out = []
        for idx in order[:25]:
            if viol[idx] <= SEPARATION_TOL:
                break
            elems = tuple(lab for (lab, _, _), inc in zip(self.edges, inside) if inc[idx])
            out.append((elems, int(sizes[idx] - 1), False))
        return out


class GenericMatroid(Matroid):
    """Matroid given by a rank oracle on frozensets of labels."""

    kind = "generic"

    def __init__(self, ground: Sequence[Hashable], rank_fn: Callable[[frozenset], int]):
        self.ground = tuple(ground)
        if len(set(self.ground)) != len(self.ground):
            raise ValueError("ground set labels must be distinct")
        self._rank_fn = rank_fn
        self._cache: dict[frozenset, int] = {}

    def rank(self, subset):
        key = frozenset(subset)
        if key not in self._cache:
            self._cache[key] = int(self._rank_fn(key))
        return self._cache[key]

    def delete(self, elems):
        gone = set(elems)
        return GenericMatroid([e for e in self.ground if e not in gone], self._rank_fn)

    def contract(self, elems):
        C = frozenset(elems)
        base = self._rank_fn
        rc = int(base(C))
        return GenericMatroid([e for e in self.ground if e not in C],
                              lambda S, C=C, rc=rc: int(base(frozenset(S) | C)) - rc)

    def base_rows(self):
        rows = [(self.ground, self.full_rank(), True)]
        rows.extend(((e,), self.rank([e]), False) for e in self.ground)
        return rows

    def separate(self, z):
        N = len(self.ground)
        if N > GENERIC_CAP:
            raise CapExceededError(f"generic separation limited to {GENERIC_CAP} elements (got {N})")
        found = []
        for size in range(2, N):
            for combo in itertools.combinations(self.ground, size):
                lhs = math.fsum(z[e] for e in combo)
                r = self.rank(combo)
                if lhs > r + SEPARATION_TOL:
                    found.append((combo, r, False))
        found.sort(key=lambda row: -(math.fsum(z[e] for e in row[0]) - row[1]))
        return found[:25]


class UniformMatroid(GenericMatroid):
    """Every set of at most ``k`` elements is independent."""

    kind = "uniform"

    def __init__(self, ground: Sequence[Hashable], k: int):
        if k < 0:
            raise ValueError("rank must be nonnegative")
        self.k = int(k)
        super().__init__(ground, lambda S, k=self.k: min(k, len(S)))


def uniform_matroid(elements: Sequence[Hashable], k: int) -> UniformMatroid:
    return UniformMatroid(elements, k)


def check_rank_axioms(M: Matroid, samples: int = 200, seed: int = 0) -> bool:
    """Spot-check normalization, monotonicity and submodularity."""
    rng = np.random.default_rng(seed)
    U = list(M.ground)
    if M.rank([]) != 0:
        return False
    for _ in range(samples):
        a = [e for e in U if rng.random() < 0.5]
        b = [e for e in U if rng.random() < 0.5]
        ra, rb = M.rank(a), M.rank(b)
        if ra > len(set(a)):
            return False
        union = list(set(a) | set(b))
        inter = list(set(a) & set(b))
        if ra + rb < M.rank(union) + M.rank(inter):
            return False
        if M.rank(union) < ra:
            return False
    return True


# -------------------------------------------------------------------------
# LPs over base polytopes


@dataclass
class LinearProgramSolution:
    point: np.ndarray  # aligned with ``ground``
    objective: float
    ground: tuple
    tight: tuple  # descriptions of tight rows ("rank", elems) / ("extra", i) / ("zero", e)
    rank_rows: list

    def as_dict(self) -> dict:
        return dict(zip(self.ground, (float(v) for v in self.point)))


def solve_over_base_polytope(M: Matroid, A=None, b=None, c=None, sense: str = "min",
                             max_rounds: int = 500) -> LinearProgramSolution | None:
    """Optimal extreme point of ``{z in B(M) : A z <= b}``; ``None`` when infeasible."""
    U = M.ground
    n = len(U)
    index = {e: k for k, e in enumerate(U)}
    c = np.zeros(n) if c is None else np.asarray(c, dtype=float).ravel()
    if c.size != n:
        raise ValueError("cost vector length must match the ground set")
    if sense == "max":
        c = -c
    elif sense != "min":
        raise ValueError("sense must be 'min' or 'max'")
    A = np.zeros((0, n)) if A is None else np.asarray(A, dtype=float).reshape(-1, n)
    b = np.zeros(0) if b is None else np.asarray(b, dtype=float).ravel()
    if n == 0:
        if np.any(b < -1e-9):
            return None
        return LinearProgramSolution(np.zeros(0), 0.0, U, (), [])

    rows = list(M.base_rows())
    seen = {(tuple(sorted(map(repr, r[0]))), r[2]) for r in rows}
    for _ in range(max_rounds):
        eq = [(el, rhs) for el, rhs, is_eq in rows if is_eq]
        ub = [(el, rhs) for el, rhs, is_eq in rows if not is_eq]
        A_eq = np.zeros((len(eq), n))
        for k, (el, _) in enumerate(eq):
            A_eq[k, [index[e] for e in el]] = 1.0
        A_r = np.zeros((len(ub), n))
        for k, (el, _) in enumerate(ub):
            A_r[k, [index[e] for e in el]] = 1.0
        A_ub = np.vstack([A_r, A])
        b_ub = np.concatenate([[rhs for _, rhs in ub], b])
        res = solve_lp(c, A_ub, b_ub, A_eq, np.array([rhs for _, rhs in eq], dtype=float))
        if not res.feasible:
            return None
        z = res.x
        new = [r for r in M.separate(dict(zip(U, z)))
               if (tuple(sorted(map(repr, r[0]))), r[2]) not in seen]
        if not new:
            tight = []
            for el, rhs, is_eq in rows:
                if abs(sum(z[index[e]] for e in el) - rhs) <= SEPARATION_TOL:
                    tight.append(("rank", el))
            slack = b - A @ z if A.size else np.zeros(0)
            tight.extend(("extra", k) for k in np.flatnonzero(np.abs(slack) <= SEPARATION_TOL))
            tight.extend(("zero", U[k]) for k in np.flatnonzero(z <= SEPARATION_TOL))
            obj = float(np.asarray(c) @ z)
            return LinearProgramSolution(z, -obj if sense == "max" else obj, U, tuple(tight), rows)
        for r in new:
            seen.add((tuple(sorted(map(repr, r[0]))), r[2]))
        rows.extend(new)
    raise RuntimeError("constraint generation did not converge")


def base_polytope_rank_rows(M: Matroid) -> list[tuple[tuple, int]]:
    """All rank rows ``z(A) <= r(A)`` for a small ground set (testing aid)."""
    if len(M.ground) > GENERIC_CAP:
        raise CapExceededError("ground set too large for full enumeration")
    out = []
    for size in range(1, len(M.ground) + 1):
        for combo in itertools.combinations(M.ground, size):
            out.append((combo, M.rank(combo)))
    return out


def in_base_polytope(M: Matroid, z: dict, tol: float = 1e-7) -> bool:
    """Full check against every rank row (small ground sets only)."""
    if any(z.get(e, 0.0) < -tol for e in M.ground):
        return False
    if abs(math.fsum(z.get(e, 0.0) for e in M.ground) - M.full_rank()) > tol:
        return False
    return all(math.fsum(z.get(e, 0.0) for e in A) <= r + tol for A, r in base_polytope_rank_rows(M))


def kruskal_mst(n_vertices: int, edges: Sequence[tuple[int, int]], weights: Sequence[float]) -> list[int]:
    """Indices of a minimum spanning forest; ties broken by edge index."""
    uf = _UnionFind(range(n_vertices))
    order = sorted(range(len(edges)), key=lambda k: (weights[k], k))
    return [k for k in order if uf.union(*edges[k])]
