import numpy as np
import pytest

from stochnorm import constants as K
from stochnorm.distributions import DiscreteRV
from stochnorm.envelope import GuessVector, canonical_guess_tree, enumerate_guesses_tree, pos_set
from stochnorm.instances import random_tree
from stochnorm.matroid_lp import GraphicMatroid, kruskal_mst, uniform_matroid
from stochnorm.norms import Lp, TopL
from stochnorm.oracle import brute_force_basis, brute_force_tree
from stochnorm.sptree import (BasisInstance, TreeInstance, candidate_guesses, lp_tree,
                              mst_weight_vector, round_tree, solve_matroid_basis, solve_tree,
                              tree_levels, upper_bound)
from stochnorm.stats import expected_norm, tau


def pt(x):
    return DiscreteRV.point(float(x))


def triangle(weights=(1, 1, 1)):
    return TreeInstance(3, [(0, 1), (1, 2), (0, 2)], [pt(w) for w in weights])


def small_instances(count, seed0=0, **kw):
    return [random_tree(np.random.default_rng(seed0 + s), max_vertices=4, max_edges=5, **kw)
            for s in range(count)]


class TestInstance:
    def test_validation(self):
        with pytest.raises(ValueError):
            TreeInstance(1, [], [])
        with pytest.raises(ValueError):
            TreeInstance(3, [(0, 1)], [pt(1)])
        with pytest.raises(ValueError):
            TreeInstance(2, [(0, 0), (0, 1)], [pt(1), pt(1)])
        with pytest.raises(ValueError):
            TreeInstance(2, [(0, 2)], [pt(1)])

    def test_basis_instance_needs_rank(self):
        with pytest.raises(ValueError):
            BasisInstance(uniform_matroid([0], 0), [pt(1)])

    def test_levels_and_ub(self):
        inst = triangle((1, 2, 5))
        assert tree_levels(inst) == (1, 2)
        assert upper_bound(inst) == 3
        assert sorted(mst_weight_vector(inst)) == [1, 2]


class TestLP:
    def test_threshold_above_support(self):
        inst = triangle((1, 2, 3))
        lp = lp_tree(inst, GuessVector(2, (4.0, 4.0)))
        assert lp.objective == pytest.approx(0.0)

    def test_unit_weights_slack(self):
        lp = lp_tree(triangle(), GuessVector(2, (1.0, 1.0)))
        assert lp is not None and lp.objective == pytest.approx(0.0)

    def test_low_threshold_infeasible(self):
        # every edge exceeds 0.5, so the level-1 row needs z(E) = 2 <= 1
        assert lp_tree(triangle(), GuessVector(2, (0.5, 0.5))) is None

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lp_tree(triangle(), GuessVector(1, (1.0,)))


class TestRounding:
    def test_triangle_fractional(self):
        inst = triangle()
        g = GuessVector(2, (2.0, 2.0))
        lp = lp_tree(inst, g)
        rnd = round_tree(inst, g, lp)
        assert len(rnd.basis) == 2 and rnd.nu == pytest.approx(1.5)

    @pytest.mark.parametrize("inst", small_instances(15, seed0=40), ids=lambda i: f"n{i.n_vertices}")
    def test_guarantees_on_every_feasible_guess(self, inst):
        for g, lp in candidate_guesses(inst)[::3]:
            if lp is None:
                continue
            rnd = round_tree(inst, g, lp)
            assert rnd.cost <= lp.objective + 1e-6
            for l in g.levels:
                count, bound = rnd.checks[f"count_above[{l}]"]
                assert count < 3 * l and count <= bound + 1e-6
                assert rnd.checks[f"tau[{3 * l}]"][0] <= g[l]
            assert set(rnd.basis) <= {k for k, v in enumerate(lp.z) if v > 1e-9}


class TestSolve:
    def test_two_vertices(self):
        inst = TreeInstance(2, [(0, 1)], [pt(2)])
        assert solve_tree(inst, TopL(1)).basis == (0,)

    def test_parallel_edges(self):
        inst = TreeInstance(2, [(0, 1), (0, 1)], [DiscreteRV.from_dict({0: 0.5, 4: 0.5}), pt(1)])
        res = solve_tree(inst, TopL(1))
        opt = brute_force_tree(inst, TopL(1))
        assert res.expected_norm <= K.TREE_RATIO * opt.opt_value

    @pytest.mark.parametrize("seed", range(10))
    def test_deterministic_matches_mst_within_constant(self, seed):
        inst = random_tree(np.random.default_rng(seed), max_vertices=5, max_edges=7, deterministic=True)
        w = [x.mean() for x in inst.dist]
        mst = kruskal_mst(inst.n_vertices, inst.edges, w)
        for f in (TopL(1), Lp(2.0)):
            res = solve_tree(inst, f)
            best = f(np.array([w[k] for k in mst]))
            assert res.expected_norm <= K.TREE_RATIO * best + 1e-9
            # the mean-weight optimum is also the brute-force optimum
            assert brute_force_tree(inst, f).opt_value == pytest.approx(best)

    @pytest.mark.parametrize("inst", small_instances(20, seed0=70), ids=lambda i: f"n{i.n_vertices}")
    def test_chain_against_brute_force(self, inst):
        f = TopL(min(2, inst.n_vertices - 1))
        res = solve_tree(inst, f)
        opt = brute_force_tree(inst, f)
        UB, n = res.UB, inst.n_vertices
        assert UB / n - 1e-9 <= opt.opt_value <= UB + 1e-9
        Ystar = inst.as_basis().weights(opt.best)
        assert tau(Ystar, 1) <= 4 * UB + 1e-9
        # the canonical guess is enumerated and its val is at most 32 OPT + (n-1) delta
        dim = n - 1
        delta = UB / n**2
        if UB > 0:
            gstar = canonical_guess_tree({l: tau(Ystar, l) for l in pos_set(dim)}, dim, delta)
            assert gstar in enumerate_guesses_tree(UB, dim, n)
            assert res.val <= 32 * opt.opt_value + dim * delta + 1e-9
            assert res.expected_norm <= K.TREE_UPPER * res.val + 1e-9
        assert res.expected_norm <= K.TREE_RATIO * opt.opt_value + 1e-9
        assert all(r.val is None or r.val >= res.val for r in res.guesses)

    def test_zero_weights(self):
        res = solve_tree(triangle((0, 0, 0)), TopL(1))
        assert res.UB == 0 and len(res.basis) == 2


class TestMatroidBasis:
    @pytest.mark.parametrize("inst", small_instances(5, seed0=7), ids=lambda i: f"n{i.n_vertices}")
    def test_graphic_agrees_with_tree(self, inst):
        f = Lp(2.0)
        a = solve_tree(inst, f)
        b = solve_matroid_basis(inst.as_basis(), f)
        assert a.basis == b.basis and a.expected_norm == pytest.approx(b.expected_norm)

    def test_uniform_picks_cheapest(self):
        w = [3.0, 1.0, 4.0, 2.0]
        inst = BasisInstance(uniform_matroid(range(4), 2), [pt(x) for x in w])
        res = solve_matroid_basis(inst, TopL(2))
        assert res.basis == (1, 3)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_uniform_stochastic_ratio(self, k):
        rng = np.random.default_rng(k)
        dists = [DiscreteRV(rng.choice(6, size=2, replace=False) * 1.0, [0.5, 0.5]) for _ in range(5)]
        M = uniform_matroid(range(5), k)
        res = solve_matroid_basis(BasisInstance(M, dists), TopL(1))
        opt = brute_force_basis(M, dists, TopL(1))
        assert res.expected_norm <= K.TREE_RATIO * opt.opt_value + 1e-9

    def test_rank_one(self):
        inst = BasisInstance(uniform_matroid(range(3), 1), [pt(5), pt(2), pt(7)])
        assert solve_matroid_basis(inst, TopL(1)).basis == (1,)

    def test_graphic_labels_map_to_indices(self):
        M = GraphicMatroid((0, 1, 2), (("a", 0, 1), ("b", 1, 2), ("c", 0, 2)))
        inst = BasisInstance(M, [pt(1), pt(1), pt(5)])
        assert solve_matroid_basis(inst, TopL(2)).basis == (0, 1)

    def test_expected_norm_is_exact(self):
        inst = small_instances(1, seed0=3)[0]
        res = solve_tree(inst, TopL(1))
        Y = inst.as_basis().weights(res.basis)
        assert res.expected_norm == expected_norm(Y, TopL(1))[0]
