"""
Load balancing for an arbitrary norm
====================================

For a general monotone symmetric norm the algorithm guesses a threshold for
every power-of-two ``l``, keeps the guesses whose LP is feasible, and picks
the one whose envelope vector has the smallest norm.  The same guess sweep
serves every norm, so several objectives can share it.
"""

# %%
import numpy as np

from stochnorm import DiscreteRV
from stochnorm.loadbal import LoadBalInstance, candidate_guesses, load_vector, solve_minnorm
from stochnorm.norms import Lp, Ordered, TopL, max_scaled
from stochnorm.oracle import brute_force_loadbal
from stochnorm.stats import expected_norm

# Three machines, four jobs; job j on machine i is either 0 or a fixed size.
rng = np.random.default_rng(3)
inst = LoadBalInstance([[DiscreteRV.from_dict({0: 1 - q, float(s): q})
                         for q, s in zip(rng.uniform(0.2, 0.9, 4), rng.integers(1, 5, 4))]
                        for _ in range(3)])
norms = [TopL(1), Lp(2.0), Ordered((1.0, 0.5, 0.25)), max_scaled([TopL(1), TopL(3)], [1.0, 2.0])]

# %%
# One sweep over the guesses.
cands = candidate_guesses(inst)
feasible = sum(frac is not None for _, frac in cands)
print(f"{len(cands)} guesses, {feasible} with a feasible LP")

# %%
# Each norm selects its own guess and rounds it.
opts = brute_force_loadbal(inst, norms)
print(f"{'norm':28s} {'selected guess':22s}   alg     opt   ratio")
for f, opt in zip(norms, opts):
    res = solve_minnorm(inst, f, mode="bernoulli", candidates=cands)
    alg = expected_norm(load_vector(inst, res.sigma), f.as_normalized())[0]
    best = opt.opt_value / f.unit_value()
    print(f"{f.spec():28s} {str(res.selected.values):22s} {alg:6.3f}  {best:6.3f}  {alg / best:6.3f}")

# %%
# The general-distribution variant accepts any job sizes; its guarantee is
# weaker but its rounding checks are the same kind of linear inequalities.
res = solve_minnorm(inst, Lp(2.0), mode="general", candidates=cands)
print("general mode assignment:", res.sigma)
print("largest row violation:", round(res.rounding.max_violation, 3), "allowed:", res.rounding.nu)
