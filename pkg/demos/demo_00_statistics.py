"""
Statistics of a random load vector
==================================

The algorithms never look at a norm of a random vector directly.  They work
through a handful of scalar statistics that can be written as linear
functions of the per-coordinate distributions.  This script computes them
for a small vector and compares them with exact expectations.
"""

# %%
# A product distribution with three independent coordinates.
import numpy as np

from stochnorm import DiscreteRV, ProductVector
from stochnorm.norms import Lp, TopL
from stochnorm.stats import (exceptional_mass, expected_count_above, expected_norm,
                             expected_topl_exact, gamma, sorted_mean_vector, tau)

Y = ProductVector([
    DiscreteRV.from_dict({0: 0.5, 2: 0.5}),
    DiscreteRV.from_dict({1: 0.9, 6: 0.1}),
    DiscreteRV.from_dict({0.5: 1.0}),
])

# %%
# ``tau(Y, l)`` is the smallest threshold above which fewer than ``l``
# coordinates are expected to lie.  ``gamma(Y, l)`` turns it into a proxy for
# the expected sum of the ``l`` largest coordinates, accurate to a factor 4.
print(" l   tau     gamma   E[top_l]  gamma/E")
for l in range(1, Y.m + 1):
    e = expected_topl_exact(Y, l)
    print(f"{l:2d}  {tau(Y, l):5.2f}  {gamma(Y, l):7.3f}  {e:8.3f}  {gamma(Y, l) / e:6.3f}")

# %%
# The expected histogram is a step function of the threshold.
for theta in (0.0, 0.5, 1.0, 2.0, 6.0):
    print(f"E[#coords > {theta}] = {expected_count_above(Y, theta):.2f}")

# %%
# The exceptional mass at a threshold decides which side of ``l * theta`` the
# expected top-l value falls on, up to a factor 2.
l, theta = 1, 1.0
mass = exceptional_mass(Y, theta)
print(f"exceptional mass {mass:.2f} vs l*theta {l * theta}: E[top_1] = {expected_topl_exact(Y, 1):.3f}")

# %%
# The sorted-mean vector lower-bounds every expected norm.
s = sorted_mean_vector(Y)
for f in (TopL(1), TopL(2), Lp(2.0)):
    exact, _ = expected_norm(Y, f)
    mc, hw = expected_norm(Y, f, method="mc", n_samples=20_000, seed=1)
    print(f"{f.spec():8s} f(E[Y sorted]) = {f(s):.3f}   E[f(Y)] = {exact:.3f}   MC {mc:.3f} +/- {hw:.3f}")
assert np.all(np.diff(s) <= 0)
