"""Numerical constants behind the approximation guarantees.

Each constant is the product of the smaller bounds it is built from, so the
derivations can be checked by reading this file top to bottom.
"""

import math

# E[f(Y)] <= (1 + 3 + 3) * LB' for the proxy lower bound of a norm.
PROXY_LOWER = 7
# E[f(Y)] <= 4 * PROXY_LOWER * f(E[Y sorted]).
EXPECTED_NORM = 4 * PROXY_LOWER
# E[f(Y)] <= 2 * PROXY_LOWER * (excess + f(tau vector)).
TAU_EXPR_UPPER = 2 * PROXY_LOWER
# excess + f(tau vector) <= 8 * E[f(Y)].
TAU_EXPR_LOWER = 8

# Approximate statistics: guess vectors are within factor 2 of tau and the
# additive slack per coordinate is kappa.
APX_STATS_LOWER = 32

# Budgeted spanning tree: alpha = 1, beta = 3 in the approximate-statistics bound.
TREE_ALPHA = 1
TREE_BETA = 3
TREE_UPPER = 2 * PROXY_LOWER * (TREE_ALPHA + 2) * TREE_BETA  # 126
TREE_RATIO = TREE_UPPER * (APX_STATS_LOWER + 1)  # 4158

# Top-l load balancing: exceptional + truncated-high + truncated-low parts.
TOPL_EXCEPTIONAL = 1
TOPL_HIGH = 72
TOPL_LOW = 232
TOPL_UPPER = TOPL_EXCEPTIONAL + TOPL_HIGH + TOPL_LOW  # 305
TOPL_RATIO = 2 * TOPL_UPPER  # 610, times (1 + eps)

# Bernoulli min-norm load balancing, per-l bound (in units of l * t_l).
BER_EXCEPTIONAL = 6
BER_HIGH = 104
BER_LOW = 296
BER_UPPER = BER_EXCEPTIONAL + BER_HIGH + BER_LOW  # 406
# f(b(t*)) <= 12 * OPT for the canonical guess.
GUESS_ENVELOPE = 12
# majorization (2 * EXPECTED_NORM) times per-l bound times the guess factor.
BER_RATIO = 2 * EXPECTED_NORM * BER_UPPER * GUESS_ENVELOPE

# Rounding parameters (largest column sum) of the auxiliary programs.
NU_TOPL = 1
NU_MINNORM = 5

# Big-lambda cap: effective-size rows use lambda in 1..LAMBDA_FACTOR * m.
LAMBDA_FACTOR = 100

# General distributions, per-l bounds after rounding.
GEN_EXCEPTIONAL = 6
GEN_TRUNC_SLOPE = 16
GEN_TRUNC_OFFSET = 44


def general_per_l_constant(m: int) -> float:
    """Constant kappa_m with E[top_l(load)] <= kappa_m * l * t_l.

    Uses a Chernoff bound on each machine's truncated load (mean at least
    ``GEN_TRUNC_OFFSET`` in units of t_l) and a union bound over machines.
    For ``alpha >= e**2`` the tail is at most ``m * exp(-44 * alpha)``.
    The threshold grows as log m / log log m for large m.
    """
    alpha0 = math.e ** 2
    if m > 16:
        alpha0 = max(alpha0, math.log(m) / math.log(math.log(m)))
    integral = alpha0 + m * math.exp(-GEN_TRUNC_OFFSET * alpha0) / GEN_TRUNC_OFFSET
    # bounded part is at most 60 * l * t * E[max ratio]; see loadbal.round_general
    return GEN_EXCEPTIONAL + 60.0 * integral


def general_ratio(m: int) -> float:
    return 2 * EXPECTED_NORM * general_per_l_constant(m) * GUESS_ENVELOPE
