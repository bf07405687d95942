"""Stochastic load balancing on unrelated machines.

Three algorithms share one LP family.  For a threshold ``t`` each job size
splits into an exceptional part (values ``>= t``) and a truncated part
(values ``< t``).  The LP bounds the expected exceptional mass directly and
bounds the truncated load through effective sizes at many scales
``lambda = 1..100m``.  A fractional solution is turned into an assignment
with :func:`stochnorm.rounding.iterative_round`.

* :func:`solve_topl`: top-l norm, binary search over ``t``.
* :func:`solve_minnorm` with ``mode="bernoulli"``: any monotone symmetric
  norm, Bernoulli job sizes.
* :func:`solve_minnorm` with ``mode="general"``: any norm, any discrete
  job sizes, weaker guarantee.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import constants as K
from .distributions import DiscreteRV, convolve_all
from .envelope import GuessVector, envelope_vector, enumerate_guesses_loadbal
from .errors import GuaranteeViolation, InfeasibleError
from .matroid_lp import assignment_matroid
from .norms import Norm
from .rounding import BudgetedMatroidLP, iterative_round
from .simplex import solve_lp
from .stats import DEFAULT_JOINT_CAP, ProductVector, expected_topl_exact

TOL = 1e-6
BETA_RHS = 6.0


@dataclass(frozen=True, eq=False)
class LoadBalInstance:
    """``dist[i][j]`` is the size of job ``j`` on machine ``i``."""

    dist: tuple

    def __init__(self, dist: Sequence[Sequence[DiscreteRV]]):
        rows = tuple(tuple(r) for r in dist)
        if not rows or not rows[0]:
            raise ValueError("need at least one machine and one job")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("every machine needs a distribution for every job")
        for r in rows:
            for x in r:
                if not isinstance(x, DiscreteRV):
                    raise TypeError("job sizes must be DiscreteRV")
        object.__setattr__(self, "dist", rows)

    @property
    def m(self) -> int:
        return len(self.dist)

    @property
    def n(self) -> int:
        return len(self.dist[0])

    @cached_property
    def means(self) -> np.ndarray:
        return np.array([[x.mean() for x in row] for row in self.dist])

    def is_bernoulli(self) -> bool:
        return all(x.is_bernoulli() for row in self.dist for x in row)

    @classmethod
    def identical(cls, m: int, jobs: Sequence[DiscreteRV]) -> "LoadBalInstance":
        return cls([list(jobs) for _ in range(m)])


def load_vector(inst: LoadBalInstance, sigma: Sequence[int]) -> ProductVector:
    """Machine loads under ``sigma`` (``sigma[j]`` is the machine of job ``j``)."""
    sigma = validate_assignment(inst, sigma)
    coords = []
    for i in range(inst.m):
        jobs = [inst.dist[i][j] for j in range(inst.n) if sigma[j] == i]
        coords.append(convolve_all(jobs))
    return ProductVector(coords)


def validate_assignment(inst: LoadBalInstance, sigma) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != inst.n:
        raise ValueError(f"assignment covers {len(sigma)} jobs, expected {inst.n}")
    if any(not 0 <= s < inst.m for s in sigma):
        raise ValueError("assignment uses a machine index out of range")
    return sigma


def upper_bound(inst: LoadBalInstance) -> float:
    """``sum_j min_i E[X_ij]``; the optimum of every normalized norm lies in ``[UB/m, UB]``."""
    return math.fsum(inst.means.min(axis=0))


def cheapest_assignment(inst: LoadBalInstance) -> tuple[int, ...]:
    return tuple(int(np.argmin(inst.means[:, j])) for j in range(inst.n))


# -------------------------------------------------------------------------
# per-threshold coefficient tables


class _Threshold:
    """Job statistics relative to one threshold ``t``."""

    def __init__(self, inst: LoadBalInstance, t: float):
        self.t = t
        m, n = inst.m, inst.n
        self.exc = np.array([[x.exceptional_mean(t) for x in row] for row in inst.dist])
        self.trunc = np.array([[x.truncated_mean(t) for x in row] for row in inst.dist])
        self.n_lambda = K.LAMBDA_FACTOR * m
        lams = np.arange(1, self.n_lambda + 1, dtype=float)
        beta = np.zeros((m, n, lams.size))
        for i in range(m):
            for j in range(n):
                beta[i, j] = _effective_sizes(inst.dist[i][j], t, lams)
        self.beta = beta  # beta[i, j, lam - 1] = beta_lam(X_ij^{<t} / 4t)

    def beta_at(self, lam: int) -> np.ndarray:
        return self.beta[:, :, lam - 1]


def _effective_sizes(x: DiscreteRV, t: float, lams: np.ndarray) -> np.ndarray:
    """``beta_lam(X^{<t} / 4t)`` for every ``lam`` in ``lams``."""
    v = np.where(x.values < t, x.values, 0.0) / (4.0 * t)
    logp = np.log(x.probs)
    out = np.empty(lams.size)
    out[lams == 1] = float(v @ x.probs)
    big = lams > 1
    L = np.log(lams[big])
    terms = logp[None, :] + v[None, :] * L[:, None]
    top = terms.max(axis=1)
    out[big] = (top + np.log(np.exp(terms - top[:, None]).sum(axis=1))) / L
    # the true value lies in [0, max v]; clear log-space rounding noise
    return np.clip(out, 0.0, float(v.max()))


class _Tables:
    def __init__(self, inst: LoadBalInstance):
        self.inst = inst
        self._cache: dict[float, _Threshold] = {}

    def at(self, t: float) -> _Threshold:
        if t not in self._cache:
            self._cache[t] = _Threshold(self.inst, t)
        return self._cache[t]


# -------------------------------------------------------------------------
# LP construction


@dataclass
class FractionalAssignment:
    z: np.ndarray  # m x n
    yhat: np.ndarray  # m (top-l) or m x |POS| (general)
    objective: float = 0.0
    rows: int = 0

    def support(self, tol: float = 1e-9) -> list[tuple[int, int]]:
        m, n = self.z.shape
        return [(i, j) for j in range(n) for i in range(m) if self.z[i, j] > tol]


def _z_index(m: int, i: int, j: int) -> int:
    # ground order of assignment_matroid: job-major
    return j * m + i


def _truncation_rows(thr: _Threshold, m: int, n: int, n_var: int, y_col):
    """Effective-size rows ``sum_j beta z_ij - 4 lam yhat_i <= 6``, redundant ones skipped.

    A row is redundant when ``sum_j beta <= 6``: with ``z <= 1`` and
    ``yhat >= 0`` it can never bind.
    """
    rows, rhs = [], []
    for i in range(m):
        totals = thr.beta[i].sum(axis=0)
        for lam in np.flatnonzero(totals > BETA_RHS) + 1:
            row = np.zeros(n_var)
            for j in range(n):
                row[_z_index(m, i, j)] = thr.beta[i, j, lam - 1]
            row[y_col(i)] = -4.0 * lam
            rows.append(row)
            rhs.append(BETA_RHS)
    return rows, rhs


def _assignment_rows(m: int, n: int, n_var: int):
    A_eq = np.zeros((n, n_var))
    for j in range(n):
        for i in range(m):
            A_eq[j, _z_index(m, i, j)] = 1.0
    return A_eq


def lp_topl(inst: LoadBalInstance, l: int, t: float, tables: _Tables | None = None) -> FractionalAssignment | None:
    """Feasible point of the top-l relaxation at threshold ``t``, or ``None``."""
    if not 1 <= l <= inst.m:
        raise ValueError(f"l={l} out of range")
    if not t > 0:
        raise ValueError("t must be positive")
    tables = tables or _Tables(inst)
    thr = tables.at(t)
    m, n = inst.m, inst.n
    n_z = m * n
    n_var = n_z + m
    rows, rhs = [], []
    exc = np.zeros(n_var)
    for i in range(m):
        for j in range(n):
            exc[_z_index(m, i, j)] = thr.exc[i, j]
    rows.append(exc)
    rhs.append(l * t)
    r, b = _truncation_rows(thr, m, n, n_var, lambda i: n_z + i)
    rows += r
    rhs += b
    ysum = np.zeros(n_var)
    ysum[n_z:] = 1.0
    rows.append(ysum)
    rhs.append(float(l))
    res = solve_lp(exc, np.array(rows), np.array(rhs), _assignment_rows(m, n, n_var), np.ones(n))
    if not res.feasible:
        return None
    z = np.zeros((m, n))
    for i in range(m):
        for j in range(n):
            z[i, j] = res.x[_z_index(m, i, j)]
    return FractionalAssignment(z=z, yhat=res.x[n_z:].copy(), objective=res.objective, rows=len(rows))


def lp_general(inst: LoadBalInstance, guess: GuessVector, tables: _Tables | None = None) -> FractionalAssignment | None:
    """Feasible point of the multi-threshold relaxation for ``guess``, or ``None``.

    ``yhat[:, k]`` belongs to level ``pos_set(m)[k]``.  Levels whose threshold
    equals the previous level's share that level's ``yhat`` column.
    """
    if guess.m != inst.m:
        raise ValueError("guess dimension must equal the number of machines")
    tables = tables or _Tables(inst)
    m, n = inst.m, inst.n
    levels = guess.levels
    n_z = m * n
    n_var = n_z + m * len(levels)
    rows, rhs = [], []
    obj = np.zeros(n_var)
    for k, l in enumerate(levels):
        thr = tables.at(guess.values[k])
        exc = np.zeros(n_var)
        for i in range(m):
            for j in range(n):
                exc[_z_index(m, i, j)] = thr.exc[i, j]
        rows.append(exc)
        rhs.append(l * thr.t)
        obj += exc / (l * thr.t)
        r, b = _truncation_rows(thr, m, n, n_var, lambda i, k=k: n_z + i * len(levels) + k)
        rows += r
        rhs += b
        ysum = np.zeros(n_var)
        for i in range(m):
            ysum[n_z + i * len(levels) + k] = 1.0
        rows.append(ysum)
        rhs.append(float(l))
    A_eq = [_assignment_rows(m, n, n_var)]
    b_eq = [np.ones(n)]
    thr1 = tables.at(guess.values[0])
    for i in range(m):
        for j in range(n):
            if thr1.exc[i, j] > thr1.t:
                row = np.zeros((1, n_var))
                row[0, _z_index(m, i, j)] = 1.0
                A_eq.append(row)
                b_eq.append(np.zeros(1))
    res = solve_lp(obj, np.array(rows), np.array(rhs), np.vstack(A_eq), np.concatenate(b_eq))
    if not res.feasible:
        return None
    z = np.zeros((m, n))
    for i in range(m):
        for j in range(n):
            z[i, j] = res.x[_z_index(m, i, j)]
    yhat = res.x[n_z:].reshape(m, len(levels)).copy()
    for k in range(1, len(levels)):
        if guess.values[k] == guess.values[k - 1]:
            yhat[:, k] = yhat[:, k - 1]
    return FractionalAssignment(z=z, yhat=yhat, objective=res.objective, rows=len(rows))


# -------------------------------------------------------------------------
# rounding


@dataclass
class RoundingResult:
    sigma: tuple
    checks: dict = field(default_factory=dict)
    exact_checked: bool = False
    nu: float = 0.0
    column_sum: float = 0.0
    max_violation: float = 0.0


def _round(inst, frac, rows, rhs, cost, nu):
    """Iteratively round ``frac.z`` against budget rows given as m x n matrices."""
    m, n = inst.m, inst.n
    M = assignment_matroid(m, n)
    A = np.array([[R[i, j] for (i, j) in M.ground] for R in rows]).reshape(len(rows), m * n)
    c = np.array([cost[i, j] for (i, j) in M.ground])
    z = np.array([frac.z[i, j] for (i, j) in M.ground])
    z = np.clip(z, 0.0, 1.0)
    P = BudgetedMatroidLP(M, A, np.asarray(rhs, dtype=float), c, z, nu)
    supp = z > 1e-9
    colsum = float(P.column_sums()[supp].max(initial=0.0))
    if colsum > nu + 1e-9:
        raise GuaranteeViolation("column sums exceed nu", {"column_sum": colsum, "nu": nu})
    rep = iterative_round(P)
    sigma = [0] * n
    for (i, j) in rep.basis:
        sigma[j] = i
    return tuple(sigma), rep, colsum


def _lambda_choice(yhat: np.ndarray, m: int) -> np.ndarray:
    lam = np.ones(yhat.shape, dtype=int)
    low = yhat < 0.5
    with np.errstate(divide="ignore"):
        inv = np.where(yhat > 0, np.floor(1.0 / np.where(yhat > 0, yhat, 1.0)), np.inf)
    lam[low] = np.minimum(K.LAMBDA_FACTOR * m, inv[low]).astype(int)
    return lam


def _assigned(sigma, m, n):
    X = np.zeros((m, n))
    for j, i in enumerate(sigma):
        X[i, j] = 1.0
    return X


def _exact_topl(inst, sigma, levels, cap):
    Y = load_vector(inst, sigma)
    if Y.joint_size() > cap:
        return None
    return {l: expected_topl_exact(Y, l, cap=cap) for l in levels}


def round_topl(inst: LoadBalInstance, l: int, t: float, frac: FractionalAssignment,
               tables: _Tables | None = None, exact_cap: int = DEFAULT_JOINT_CAP) -> RoundingResult:
    """Round a top-l LP point; asserts the per-machine budget bounds."""
    tables = tables or _Tables(inst)
    thr = tables.at(t)
    m = inst.m
    lam = _lambda_choice(frac.yhat, m)
    low = frac.yhat < 0.5
    rows, rhs, kinds = [], [], []
    for i in range(m):
        R = np.zeros((m, inst.n))
        if low[i]:
            R[i] = thr.beta[i, :, lam[i] - 1]
            rhs.append(10.0)
        else:
            R[i] = thr.trunc[i] / (4 * t)
            rhs.append(4 * frac.yhat[i] + 6)
        rows.append(R)
        kinds.append("low" if low[i] else "high")
    sigma, rep, colsum = _round(inst, frac, rows, rhs, thr.exc, K.NU_TOPL)
    X = _assigned(sigma, m, inst.n)
    exc = float((thr.exc * X).sum())
    checks = {"exceptional": (exc, l * t)}
    if exc > l * t + TOL * max(1.0, l * t):
        raise GuaranteeViolation("exceptional mass exceeds l*t", checks)
    for i in range(m):
        load = float(rows[i][i] @ X[i])
        bound = 11.0 if low[i] else 4 * frac.yhat[i] + 7
        checks[f"{kinds[i]}[{i}]"] = (load, float(bound))
        if load > bound + TOL:
            raise GuaranteeViolation(f"machine {i} budget exceeded", checks)
    res = RoundingResult(sigma, checks, nu=K.NU_TOPL, column_sum=colsum, max_violation=rep.max_violation)
    exact = _exact_topl(inst, sigma, [l], exact_cap)
    if exact is not None:
        res.exact_checked = True
        res.checks["expected_topl"] = (exact[l], K.TOPL_UPPER * l * t)
        if exact[l] > K.TOPL_UPPER * l * t + TOL:
            raise GuaranteeViolation("E[top_l] exceeds 305 l t", res.checks)
    return res


@dataclass
class TopLResult:
    sigma: tuple
    t: float
    UB: float
    probes: int
    frac: FractionalAssignment | None
    rounding: RoundingResult | None


def solve_topl(inst: LoadBalInstance, l: int, eps: float = 0.01,
               exact_cap: int = DEFAULT_JOINT_CAP) -> TopLResult:
    """Assignment with ``E[top_l] <= 305 l t`` and ``t <= 2 OPT / l + eps UB / m^2``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not 1 <= l <= inst.m:
        raise ValueError(f"l={l} out of range")
    UB = upper_bound(inst)
    if UB == 0:
        return TopLResult(cheapest_assignment(inst), 0.0, 0.0, 0, None, None)
    tables = _Tables(inst)
    lo, hi = 0.0, 2.0 * UB / l
    best = lp_topl(inst, l, hi, tables)
    probes = 1
    if best is None:
        raise GuaranteeViolation("top-l LP infeasible at the upper end of the search", {"t": hi, "UB": UB})
    width = eps * UB / inst.m**2
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        frac = lp_topl(inst, l, mid, tables)
        probes += 1
        if frac is None:
            lo = mid
        else:
            hi, best = mid, frac
    rnd = round_topl(inst, l, hi, best, tables, exact_cap)
    return TopLResult(rnd.sigma, hi, UB, probes, best, rnd)


def pos_t(guess: GuessVector) -> list[int]:
    """Levels where the threshold halves (and level 1)."""
    d = guess.as_dict()
    return [l for l in guess.levels if l == 1 or d[l] == d[l // 2] / 2]


def pos_e(guess: GuessVector) -> list[int]:
    """Levels whose threshold equals the next level's (and the last level)."""
    d = guess.as_dict()
    return [l for l in guess.levels if 2 * l not in d or d[l] == d[2 * l]]


def _minnorm_rows(inst, guess, frac, tables, bernoulli: bool):
    m = inst.m
    levels = guess.levels
    k_of = {l: k for k, l in enumerate(levels)}
    Pt, Pe = pos_t(guess), set(pos_e(guess))
    rows, rhs, labels = [], [], []
    cost = np.zeros((m, inst.n))
    for l in Pt:
        if l in Pe:
            thr = tables.at(guess[l])
            rows.append(thr.exc / (l * thr.t))
            rhs.append(1.0)
            labels.append(("exceptional", l, None))
            cost += thr.exc / (l * thr.t)
    for l in Pt:
        thr = tables.at(guess[l])
        y = frac.yhat[:, k_of[l]]
        lam = _lambda_choice(y, m) if bernoulli else np.ones(m, dtype=int)
        for i in range(m):
            R = np.zeros((m, inst.n))
            if bernoulli and y[i] < 0.5:
                R[i] = thr.beta[i, :, lam[i] - 1]
                rhs.append(10.0)
                labels.append(("low", l, i))
            else:
                R[i] = thr.trunc[i] / (4 * thr.t)
                rhs.append(4 * y[i] + 6)
                labels.append(("high", l, i))
            rows.append(R)
    return rows, rhs, labels, cost


def _check_exceptional(inst, guess, sigma, tables, checks):
    X = _assigned(sigma, inst.m, inst.n)
    for l in guess.levels:
        thr = tables.at(guess[l])
        exc = float((thr.exc * X).sum())
        bound = K.BER_EXCEPTIONAL * l * thr.t
        checks[f"exceptional[{l}]"] = (exc, bound)
        if exc > bound + TOL * max(1.0, bound):
            raise GuaranteeViolation(f"exceptional mass at level {l} exceeds 6 l t_l", checks)


def round_bernoulli(inst: LoadBalInstance, guess: GuessVector, frac: FractionalAssignment,
                    tables: _Tables | None = None, exact_cap: int = DEFAULT_JOINT_CAP) -> RoundingResult:
    """Round the multi-threshold LP point for Bernoulli job sizes (nu = 5)."""
    if not inst.is_bernoulli():
        raise ValueError("round_bernoulli needs Bernoulli job sizes")
    tables = tables or _Tables(inst)
    rows, rhs, labels, cost = _minnorm_rows(inst, guess, frac, tables, bernoulli=True)
    sigma, rep, colsum = _round(inst, frac, rows, rhs, cost, K.NU_MINNORM)
    checks: dict = {"max_row_violation": (rep.max_violation, K.NU_MINNORM)}
    _check_exceptional(inst, guess, sigma, tables, checks)
    res = RoundingResult(sigma, checks, nu=K.NU_MINNORM, column_sum=colsum, max_violation=rep.max_violation)
    exact = _exact_topl(inst, sigma, guess.levels, exact_cap)
    if exact is not None:
        res.exact_checked = True
        for l in guess.levels:
            bound = K.BER_UPPER * l * guess[l]
            res.checks[f"expected_topl[{l}]"] = (exact[l], bound)
            if exact[l] > bound + TOL:
                raise GuaranteeViolation(f"E[top_{l}] exceeds 406 l t_l", res.checks)
    return res


def round_general(inst: LoadBalInstance, guess: GuessVector, frac: FractionalAssignment,
                  tables: _Tables | None = None, exact_cap: int = DEFAULT_JOINT_CAP) -> RoundingResult:
    """Round the multi-threshold LP point for arbitrary job sizes (nu = 5)."""
    tables = tables or _Tables(inst)
    m, n = inst.m, inst.n
    rows, rhs, labels, cost = _minnorm_rows(inst, guess, frac, tables, bernoulli=False)
    sigma, rep, colsum = _round(inst, frac, rows, rhs, cost, K.NU_MINNORM)
    checks: dict = {"max_row_violation": (rep.max_violation, K.NU_MINNORM)}
    _check_exceptional(inst, guess, sigma, tables, checks)
    X = _assigned(sigma, m, n)
    for k, l in enumerate(guess.levels):
        thr = tables.at(guess[l])
        for i in range(m):
            load = float(thr.trunc[i] @ X[i])
            bound = (K.GEN_TRUNC_SLOPE * frac.yhat[i, k] + K.GEN_TRUNC_OFFSET) * thr.t
            checks[f"truncated[{l},{i}]"] = (load, float(bound))
            if load > bound + TOL * max(1.0, bound):
                raise GuaranteeViolation(f"truncated load on machine {i} at level {l} too large", checks)
    res = RoundingResult(sigma, checks, nu=K.NU_MINNORM, column_sum=colsum, max_violation=rep.max_violation)
    exact = _exact_topl(inst, sigma, guess.levels, exact_cap)
    if exact is not None:
        res.exact_checked = True
        kappa = K.general_per_l_constant(m)
        for l in guess.levels:
            bound = kappa * l * guess[l]
            res.checks[f"expected_topl[{l}]"] = (exact[l], bound)
            if exact[l] > bound + TOL:
                raise GuaranteeViolation(f"E[top_{l}] exceeds kappa_m l t_l", res.checks)
    return res


@dataclass
class GuessRecord:
    guess: GuessVector
    feasible: bool
    proxy: float | None  # f(b(t)) for feasible guesses


@dataclass
class MinNormResult:
    sigma: tuple
    mode: str
    UB: float
    selected: GuessVector | None
    proxy: float
    guesses: list
    rounding: RoundingResult | None
    ratio_bound: float


def candidate_guesses(inst: LoadBalInstance, tables: _Tables | None = None):
    """Every guess with a feasible LP point, in enumeration order."""
    tables = tables or _Tables(inst)
    UB = upper_bound(inst)
    out = []
    for g in enumerate_guesses_loadbal(UB, inst.m):
        out.append((g, lp_general(inst, g, tables)))
    return out


def guess_proxy(f: Norm, guess: GuessVector) -> float:
    """``f(b(t))`` where ``b`` is the envelope of ``B_l = l t_l``."""
    return f(envelope_vector(guess.budgets(), guess.m))


def solve_minnorm(inst: LoadBalInstance, f: Norm, mode: str = "bernoulli",
                  candidates=None, exact_cap: int = DEFAULT_JOINT_CAP) -> MinNormResult:
    """Assignment for the expected ``f``-norm of the load vector.

    ``candidates`` may hold the output of :func:`candidate_guesses` so that
    several norms can share one sweep over the guesses.
    """
    if mode not in ("bernoulli", "general"):
        raise ValueError("mode must be 'bernoulli' or 'general'")
    if mode == "bernoulli" and not inst.is_bernoulli():
        raise ValueError("mode='bernoulli' needs Bernoulli job sizes")
    f = f.as_normalized()
    ratio = K.BER_RATIO if mode == "bernoulli" else K.general_ratio(inst.m)
    UB = upper_bound(inst)
    if UB == 0:
        return MinNormResult(cheapest_assignment(inst), mode, 0.0, None, 0.0, [], None, ratio)
    tables = _Tables(inst)
    if candidates is None:
        candidates = candidate_guesses(inst, tables)
    records, best = [], None
    for g, frac in candidates:
        if frac is None:
            records.append(GuessRecord(g, False, None))
            continue
        val = guess_proxy(f, g)
        records.append(GuessRecord(g, True, val))
        if best is None or val < best[0]:
            best = (val, g, frac)
    if best is None:
        raise InfeasibleError("no guess vector has a feasible LP")
    val, g, frac = best
    if mode == "bernoulli":
        rnd = round_bernoulli(inst, g, frac, tables, exact_cap)
    else:
        rnd = round_general(inst, g, frac, tables, exact_cap)
    return MinNormResult(rnd.sigma, mode, UB, g, val, records, rnd, ratio)


def all_assignments(inst: LoadBalInstance):
    return itertools.product(range(inst.m), repeat=inst.n)
