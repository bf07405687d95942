import itertools

import numpy as np
import pytest

from stochnorm.distributions import DiscreteRV
from stochnorm.errors import CapExceededError
from stochnorm.instances import random_loadbal, random_tree
from stochnorm.loadbal import LoadBalInstance, load_vector
from stochnorm.matroid_lp import uniform_matroid
from stochnorm.norms import Lp, TopL
from stochnorm.oracle import brute_force_basis, brute_force_loadbal, brute_force_tree, spanning_tree_count
from stochnorm.sptree import TreeInstance
from stochnorm.stats import expected_norm


def pt(x):
    return DiscreteRV.point(float(x))


def test_loadbal_deterministic():
    inst = LoadBalInstance([[pt(1), pt(3)], [pt(2), pt(1)]])
    res = brute_force_loadbal(inst, TopL(1))
    assert res.best == (0, 1) and res.opt_value == 1 and res.evaluated_count == 4


def test_loadbal_identical_coins():
    coin = DiscreteRV.from_dict({0: 0.5, 1: 0.5})
    res = brute_force_loadbal(LoadBalInstance.identical(2, [coin, coin]), TopL(1))
    # splitting the jobs gives E[max] = 0.75, stacking gives 1.0
    assert res.opt_value == pytest.approx(0.75)
    assert res.best in ((0, 1), (1, 0))


def test_loadbal_many_norms_one_pass():
    inst = random_loadbal(np.random.default_rng(0), max_m=2, max_n=3)
    many = brute_force_loadbal(inst, [TopL(1), Lp(2.0)])
    assert many[0].opt_value == brute_force_loadbal(inst, TopL(1)).opt_value
    assert many[1].opt_value == brute_force_loadbal(inst, Lp(2.0)).opt_value


def test_loadbal_values_are_kept():
    inst = random_loadbal(np.random.default_rng(1), max_m=2, max_n=2)
    res = brute_force_loadbal(inst, TopL(1), keep_values=True)
    assert len(res.values) == inst.m ** inst.n
    assert min(res.values.values()) == res.opt_value
    for sigma, v in res.values.items():
        assert v == expected_norm(load_vector(inst, sigma), TopL(1))[0]


def test_loadbal_cap():
    inst = LoadBalInstance([[pt(1)] * 10] * 4)
    with pytest.raises(CapExceededError):
        brute_force_loadbal(inst, TopL(1), cap=1000)


@pytest.mark.parametrize("seed", range(5))
def test_loadbal_symmetric_under_machine_relabeling(seed):
    inst = random_loadbal(np.random.default_rng(seed), max_m=3, max_n=3)
    perm = np.random.default_rng(seed + 100).permutation(inst.m)
    relabeled = LoadBalInstance([inst.dist[int(p)] for p in perm])
    a = brute_force_loadbal(inst, Lp(2.0)).opt_value
    b = brute_force_loadbal(relabeled, Lp(2.0)).opt_value
    assert a == pytest.approx(b, abs=1e-12)


@pytest.mark.parametrize("n, edges, count", [
    (3, [(0, 1), (1, 2), (0, 2)], 3),
    (4, [(a, b) for a, b in itertools.combinations(range(4), 2)], 16),
    (2, [(0, 1), (0, 1), (0, 1)], 3),
    (4, [(0, 1), (1, 2), (2, 3)], 1),
])
def test_spanning_tree_count(n, edges, count):
    assert spanning_tree_count(n, edges) == count


def test_tree_triangle():
    inst = TreeInstance(3, [(0, 1), (1, 2), (0, 2)], [pt(1), pt(1), pt(5)])
    res = brute_force_tree(inst, TopL(2))
    assert res.best == (0, 1) and res.opt_value == 2 and res.evaluated_count == 3


@pytest.mark.parametrize("seed", range(5))
def test_tree_symmetric_under_edge_relabeling(seed):
    inst = random_tree(np.random.default_rng(seed), max_vertices=4, max_edges=5)
    perm = np.random.default_rng(seed + 50).permutation(len(inst.edges))
    relabeled = TreeInstance(inst.n_vertices, [inst.edges[int(p)] for p in perm],
                             [inst.dist[int(p)] for p in perm])
    a = brute_force_tree(inst, TopL(1)).opt_value
    b = brute_force_tree(relabeled, TopL(1)).opt_value
    assert a == pytest.approx(b, abs=1e-12)


def test_basis_uniform():
    res = brute_force_basis(uniform_matroid(range(4), 2), [pt(3), pt(1), pt(4), pt(2)], TopL(2))
    assert res.best == (1, 3) and res.opt_value == 3 and res.evaluated_count == 6


def test_basis_cap():
    with pytest.raises(CapExceededError):
        brute_force_basis(uniform_matroid(range(30), 15), [pt(1)] * 30, TopL(1), cap=100)
