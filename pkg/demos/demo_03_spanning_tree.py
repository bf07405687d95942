"""
Spanning trees with random edge weights
=======================================

Each edge weight is random and we want a spanning tree whose weight vector
has small expected norm.  The algorithm solves one LP over the spanning-tree
polytope per threshold guess and keeps the guess with the smallest
``LP value + f(thresholds)``.  With point-mass weights the minimum spanning
tree is optimal for every norm, which makes a handy sanity check.
"""

# %%
import numpy as np

from stochnorm.instances import random_tree
from stochnorm.matroid_lp import kruskal_mst
from stochnorm.norms import Lp, TopL
from stochnorm.oracle import brute_force_tree
from stochnorm.sptree import solve_tree

inst = random_tree(np.random.default_rng(2), max_vertices=5, max_edges=7, exact_size=True)
print(f"{inst.n_vertices} vertices, {len(inst.edges)} edges")
for k, ((u, v), x) in enumerate(zip(inst.edges, inst.dist)):
    print(f"  edge {k}: {u}-{v}  {x.atoms()}")

# %%
print(f"{'norm':6s} {'tree':14s}  alg    opt   ratio  guesses")
for f in (TopL(1), TopL(2), Lp(2.0)):
    res = solve_tree(inst, f)
    opt = brute_force_tree(inst, f).opt_value / f.unit_value()
    n_feas = sum(r.feasible for r in res.guesses)
    print(f"{f.spec():6s} {str(res.basis):14s} {res.expected_norm:5.2f}  {opt:5.2f}  {res.expected_norm / opt:5.3f}"
          f"  {n_feas}/{len(res.guesses)}")

# %%
# Deterministic weights: compare with Kruskal.
det = random_tree(np.random.default_rng(5), max_vertices=5, max_edges=7, deterministic=True, exact_size=True)
w = [x.mean() for x in det.dist]
mst = kruskal_mst(det.n_vertices, det.edges, w)
res = solve_tree(det, TopL(1))
print("MST weights  ", sorted(w[k] for k in mst))
print("solver tree  ", sorted(w[k] for k in res.basis))
