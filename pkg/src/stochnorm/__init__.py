"""Approximation algorithms for stochastic minimum-norm optimization.

Load balancing on unrelated machines and spanning trees (or matroid bases)
with independent discrete random sizes, judged by the expected value of a
monotone symmetric norm of the random cost vector.
"""

from .distributions import DiscreteRV, convolve, convolve_all
from .errors import (CapExceededError, GuaranteeViolation, InfeasibleError,
                     InstanceParseError, UnboundedError)
from .loadbal import LoadBalInstance, load_vector, solve_minnorm, solve_topl
from .norms import Lp, MaxScaled, Ordered, TopL, max_scaled, parse_norm
from .oracle import brute_force_basis, brute_force_loadbal, brute_force_tree
from .sptree import BasisInstance, TreeInstance, solve_matroid_basis, solve_tree
from .stats import ProductVector, expected_norm, gamma, tau

__all__ = [
    "DiscreteRV", "convolve", "convolve_all",
    "CapExceededError", "GuaranteeViolation", "InfeasibleError", "InstanceParseError", "UnboundedError",
    "LoadBalInstance", "load_vector", "solve_minnorm", "solve_topl",
    "Lp", "MaxScaled", "Ordered", "TopL", "max_scaled", "parse_norm",
    "brute_force_basis", "brute_force_loadbal", "brute_force_tree",
    "BasisInstance", "TreeInstance", "solve_matroid_basis", "solve_tree",
    "ProductVector", "expected_norm", "gamma", "tau",
]

__version__ = "0.1.0"
