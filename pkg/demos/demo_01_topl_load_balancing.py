"""
Minimizing the expected top-l load
==================================

Jobs with random sizes go to machines.  For the sum of the ``l`` largest
machine loads there is a constant-factor algorithm: binary search over a
threshold ``t`` for which a small LP is feasible, then round the LP point
with iterative rounding.  Here we run it on a small instance and compare
with exhaustive search.
"""

# %%
import numpy as np

from stochnorm import DiscreteRV
from stochnorm.loadbal import LoadBalInstance, load_vector, solve_topl, upper_bound
from stochnorm.oracle import brute_force_loadbal
from stochnorm.norms import TopL
from stochnorm.stats import expected_topl_exact

rng = np.random.default_rng(7)


def job():
    size = float(rng.integers(1, 5))
    return DiscreteRV.from_dict({0: 0.4, size: 0.6})


inst = LoadBalInstance([[job() for _ in range(5)] for _ in range(3)])
print(f"{inst.m} machines, {inst.n} jobs, UB = {upper_bound(inst):.2f}")

# %%
# Solve for each ``l`` and compare with the optimum over all 3^5 assignments.
print(" l  probes     t     alg     opt   ratio")
for l in range(1, inst.m + 1):
    res = solve_topl(inst, l, eps=0.01)
    alg = expected_topl_exact(load_vector(inst, res.sigma), l)
    opt = brute_force_loadbal(inst, TopL(l)).opt_value
    print(f"{l:2d}  {res.probes:6d}  {res.t:5.2f}  {alg:6.3f}  {opt:6.3f}  {alg / opt:6.3f}")

# %%
# The rounding step records each inequality it asserted, with its bound.
for name, (value, bound) in res.rounding.checks.items():
    print(f"{name:16s} {value:8.3f} <= {bound:8.3f}")
