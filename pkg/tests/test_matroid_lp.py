import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochnorm.errors import CapExceededError
from stochnorm.matroid_lp import (GenericMatroid, GraphicMatroid, PartitionMatroid,
                                  assignment_matroid, check_rank_axioms, in_base_polytope,
                                  kruskal_mst, solve_over_base_polytope, uniform_matroid)
from stochnorm.simplex import tight_rank

TRIANGLE = GraphicMatroid.from_edge_list(3, [(0, 1), (1, 2), (0, 2)])


def random_graph(rng, n, extra):
    order = rng.permutation(n)
    pairs = [(int(order[k]), int(order[rng.integers(0, k)])) for k in range(1, n)]
    for _ in range(extra):
        u, v = rng.choice(n, size=2, replace=False)
        pairs.append((int(u), int(v)))
    return pairs


class TestMatroids:
    def test_assignment_polytope(self):
        M = assignment_matroid(2, 1)
        assert M.full_rank() == 1
        assert in_base_polytope(M, {(0, 0): 0.3, (1, 0): 0.7})
        assert in_base_polytope(M, {(0, 0): 1.0, (1, 0): 0.0})
        assert not in_base_polytope(M, {(0, 0): 0.0, (1, 0): 0.0})

    def test_graphic_rank(self):
        assert TRIANGLE.full_rank() == 2
        assert TRIANGLE.rank([0, 1, 2]) == 2 and TRIANGLE.rank([0]) == 1
        assert TRIANGLE.is_basis([0, 2]) and not TRIANGLE.is_basis([0])

    def test_contract_creates_loops(self):
        M = GraphicMatroid.from_edge_list(2, [(0, 1), (0, 1)]).contract([0])
        assert M.rank([1]) == 0

    def test_partition_validation(self):
        with pytest.raises(ValueError):
            PartitionMatroid(((0, 1), (1, 2)), (1, 1))
        with pytest.raises(ValueError):
            PartitionMatroid(((0,),), (1, 1))

    def test_graphic_validation(self):
        with pytest.raises(ValueError):
            GraphicMatroid((0, 1), ((0, 0, 5),))

    def test_uniform(self):
        U = uniform_matroid("abcd", 2)
        assert U.full_rank() == 2 and U.rank("abc") == 2 and U.k == 2

    @pytest.mark.parametrize("M", [
        TRIANGLE, assignment_matroid(2, 3), uniform_matroid(range(5), 3),
        GraphicMatroid.from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
    ])
    def test_rank_axioms(self, M):
        assert check_rank_axioms(M)

    def test_axiom_check_catches_non_matroid(self):
        bad = GenericMatroid(range(4), lambda S: 0 if len(S) == 2 else min(len(S), 3))
        assert not check_rank_axioms(bad)

    def test_generic_cap(self):
        M = GenericMatroid(range(25), lambda S: min(len(S), 2))
        with pytest.raises(CapExceededError):
            M.separate({e: 0.1 for e in M.ground})


class TestBasePolytopeLP:
    def test_triangle(self):
        sol = solve_over_base_polytope(TRIANGLE, c=[1, 1, 1])
        assert sol.objective == pytest.approx(2.0)
        assert sum(sol.point) == pytest.approx(2.0)

    def test_partition(self):
        sol = solve_over_base_polytope(assignment_matroid(2, 1), c=[0, 1])
        assert np.allclose(sol.point, [1, 0])

    def test_extra_row_respected(self):
        sol = solve_over_base_polytope(assignment_matroid(2, 1), A=[[1, 0]], b=[0], c=[0, 1])
        assert np.allclose(sol.point, [0, 1])

    def test_infeasible_extra_rows(self):
        M = assignment_matroid(2, 1)
        assert solve_over_base_polytope(M, A=[[1, 0], [0, 1]], b=[0.2, 0.2]) is None

    def test_max_sense(self):
        sol = solve_over_base_polytope(TRIANGLE, c=[1, 2, 3], sense="max")
        assert sol.objective == pytest.approx(5.0)

    @settings(max_examples=40)
    @given(st.integers(0, 10_000))
    def test_mst_exactness(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        pairs = random_graph(rng, n, int(rng.integers(0, 6)))
        w = rng.integers(0, 10, size=len(pairs)).astype(float)
        M = GraphicMatroid.from_edge_list(n, pairs)
        sol = solve_over_base_polytope(M, c=w)
        mst = kruskal_mst(n, pairs, w)
        assert sol.objective == pytest.approx(float(w[mst].sum()), abs=1e-7)

    @settings(max_examples=40)
    @given(st.integers(0, 10_000))
    def test_extreme_point_and_feasibility(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 6))
        pairs = random_graph(rng, n, int(rng.integers(1, 4)))
        M = GraphicMatroid.from_edge_list(n, pairs)
        N = len(pairs)
        A = rng.random((2, N))
        b = A.sum(axis=1) * (n - 1) / N + 0.1
        sol = solve_over_base_polytope(M, A=A, b=b, c=rng.normal(size=N))
        if sol is None:
            return
        z = sol.point
        assert in_base_polytope(M, dict(zip(M.ground, z)))
        assert np.all(A @ z <= b + 1e-7)
        # every rank row of the full description, plus the extras
        rows = []
        for size in range(1, N + 1):
            for combo in itertools.combinations(range(N), size):
                r = M.rank(combo)
                row = np.zeros(N)
                row[list(combo)] = 1
                rows.append((row, r))
        A_all = np.vstack([np.array([r for r, _ in rows]), A])
        b_all = np.concatenate([[rhs for _, rhs in rows], b])
        assert tight_rank(z, A_all, b_all) == N
