"""Exhaustive ground truth for small instances.

Every candidate solution is evaluated exactly by enumerating the joint
support of its cost vector.  Ties are broken by the enumeration order
(lexicographic assignments, lexicographic edge-index subsets).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExceededError
from .loadbal import LoadBalInstance, load_vector
from .matroid_lp import Matroid
from .norms import Norm
from .stats import DEFAULT_JOINT_CAP, ProductVector, expected_norms_exact

ENUM_CAP = 10**6
SUBSET_CAP = 10**7


@dataclass
class OracleResult:
    best: tuple
    opt_value: float
    evaluated_count: int
    values: dict | None = None  # solution -> E[f], filled when requested


def _as_list(f):
    if isinstance(f, Norm):
        return [f], True
    return list(f), False


def brute_force_loadbal(inst: LoadBalInstance, f, cap: int = ENUM_CAP,
                        joint_cap: int = DEFAULT_JOINT_CAP, keep_values: bool = False):
    """Optimal assignment for one norm, or a list of results for a list of norms."""
    norms, single = _as_list(f)
    if inst.m ** inst.n > cap:
        raise CapExceededError(f"{inst.m}^{inst.n} assignments exceed the cap {cap}")
    best = [None] * len(norms)
    vals = [dict() for _ in norms] if keep_values else None
    count = 0
    for sigma in itertools.product(range(inst.m), repeat=inst.n):
        Y = load_vector(inst, sigma)
        ev = expected_norms_exact(Y, norms, cap=joint_cap)
        count += 1
        for k, v in enumerate(ev):
            if best[k] is None or v < best[k][1]:
                best[k] = (sigma, v)
            if keep_values:
                vals[k][sigma] = v
    out = [OracleResult(b[0], b[1], count, vals[k] if keep_values else None) for k, b in enumerate(best)]
    return out[0] if single else out


def spanning_tree_count(n_vertices: int, edges: Sequence[tuple[int, int]]) -> int:
    """Kirchhoff's matrix-tree count (multi-edges counted separately)."""
    if n_vertices == 1:
        return 1
    L = np.zeros((n_vertices, n_vertices))
    for u, v in edges:
        if u == v:
            continue
        L[u, u] += 1
        L[v, v] += 1
        L[u, v] -= 1
        L[v, u] -= 1
    return int(round(np.linalg.det(L[1:, 1:])))


def _bases(M: Matroid):
    r = M.full_rank()
    for combo in itertools.combinations(range(len(M.ground)), r):
        elems = [M.ground[k] for k in combo]
        if M.rank(elems) == r:
            yield combo


def brute_force_basis(M: Matroid, dists: Sequence, f, cap: int = SUBSET_CAP,
                      joint_cap: int = DEFAULT_JOINT_CAP, keep_values: bool = False):
    """Optimal basis (as a tuple of ground-set indices) for the expected f-norm."""
    norms, single = _as_list(f)
    r = M.full_rank()
    if math.comb(len(M.ground), r) > cap:
        raise CapExceededError(f"{math.comb(len(M.ground), r)} candidate subsets exceed the cap {cap}")
    best = [None] * len(norms)
    vals = [dict() for _ in norms] if keep_values else None
    count = 0
    for combo in _bases(M):
        Y = ProductVector([dists[k] for k in combo])
        ev = expected_norms_exact(Y, norms, cap=joint_cap)
        count += 1
        for k, v in enumerate(ev):
            if best[k] is None or v < best[k][1]:
                best[k] = (combo, v)
            if keep_values:
                vals[k][combo] = v
    if count == 0:
        raise ValueError("matroid has no basis")
    out = [OracleResult(b[0], b[1], count, vals[k] if keep_values else None) for k, b in enumerate(best)]
    return out[0] if single else out


def brute_force_tree(inst, f, cap: int = ENUM_CAP, joint_cap: int = DEFAULT_JOINT_CAP,
                     keep_values: bool = False):
    """Optimal spanning tree (tuple of edge indices) for the expected f-norm."""
    count = spanning_tree_count(inst.n_vertices, inst.edges)
    if count > cap:
        raise CapExceededError(f"{count} spanning trees exceed the cap {cap}")
    return brute_force_basis(inst.matroid(), inst.dist, f, joint_cap=joint_cap, keep_values=keep_values)
