"""Iterative rounding of budgeted matroid LPs.

Given a fractional point ``z`` in the base polytope of a matroid, budget
rows ``A z <= b`` (``A >= 0``) whose column sums are at most ``nu``, and a
cost vector ``c``, :func:`iterative_round` returns a basis ``B`` with

* ``c(B) <= c . z``,
* ``A chi_B <= b + nu``,
* ``B`` inside the support of ``z``.

Each pass re-solves the residual LP to an extreme point, then fixes
coordinates at 0 or 1 or, if all are fractional, drops every budget row
whose worst-case remaining overshoot ``sum_e A_ie (1 - z_e)`` is at most
``nu``.  At an extreme point with every coordinate fractional there is
always such a row: the tight rank rows form a chain of at most ``r`` sets,
so at least ``|supp| - r`` budget rows are tight, while the total overshoot
over all rows is at most ``nu (|supp| - r)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import GuaranteeViolation, InfeasibleError
from .matroid_lp import Matroid, in_base_polytope, solve_over_base_polytope

log = logging.getLogger(__name__)

FIX_TOL = 1e-9
POST_TOL = 1e-6


@dataclass
class BudgetedMatroidLP:
    matroid: Matroid
    A: np.ndarray  # k x |ground|
    b: np.ndarray
    c: np.ndarray
    z: np.ndarray  # fractional point aligned with matroid.ground
    nu: float

    def __post_init__(self):
        n = len(self.matroid.ground)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.c = np.asarray(self.c, dtype=float).ravel()
        self.z = np.asarray(self.z, dtype=float).ravel()
        if self.b.size != self.A.shape[0]:
            raise ValueError("one right-hand side per budget row")
        if self.c.size != n or self.z.size != n:
            raise ValueError("cost and point must match the ground set")
        if np.any(self.A < 0):
            raise ValueError("budget matrix must be nonnegative")

    def column_sums(self) -> np.ndarray:
        return self.A.sum(axis=0)

    def validate(self, check_polytope: bool = False) -> None:
        supp = self.z > FIX_TOL
        worst = float(self.column_sums()[supp].max(initial=0.0))
        if worst > self.nu + 1e-9:
            raise ValueError(f"column sum {worst} exceeds nu={self.nu}")
        if check_polytope and not in_base_polytope(self.matroid, dict(zip(self.matroid.ground, self.z))):
            raise ValueError("point is not in the base polytope")


@dataclass
class RoundingReport:
    basis: list
    cost: float
    lp_cost: float
    loads: np.ndarray
    rhs: np.ndarray
    iterations: int
    dropped_rows: list = field(default_factory=list)
    fallback_drops: int = 0

    @property
    def max_violation(self) -> float:
        if self.loads.size == 0:
            return 0.0
        return float(np.max(self.loads - self.rhs))


def iterative_round(P: BudgetedMatroidLP, *, check: bool = True) -> RoundingReport:
    """Round ``P.z`` to a basis; postconditions are checked before returning."""
    M0 = P.matroid
    U = M0.ground
    index = {e: k for k, e in enumerate(U)}
    supp = [e for e in U if P.z[index[e]] > FIX_TOL]
    M = M0.restrict(supp)
    resid = P.b.astype(float).copy()
    active = list(range(P.A.shape[0]))
    chosen: list = []
    dropped: list = []
    fallback = 0
    iterations = 0
    limit = len(U) + P.A.shape[0] + 1

    while M.ground:
        iterations += 1
        if iterations > limit:
            raise GuaranteeViolation("rounding loop did not make progress",
                                     {"iterations": iterations, "limit": limit})
        cols = [index[e] for e in M.ground]
        cost = P.c[cols]
        if not active:
            basis = M.greedy_min_basis(dict(zip(M.ground, cost)))
            chosen.extend(basis)
            break
        A_act = P.A[np.ix_(active, cols)]
        sol = solve_over_base_polytope(M, A_act, resid[active], cost)
        if sol is None:
            raise InfeasibleError("residual rounding LP became infeasible")
        z = sol.point
        zeros = [e for e, v in zip(M.ground, z) if v <= FIX_TOL]
        ones = [e for e, v in zip(M.ground, z) if v >= 1 - FIX_TOL]
        if zeros or ones:
            if ones:
                chosen.extend(ones)
                resid -= P.A[:, [index[e] for e in ones]].sum(axis=1)
                M = M.contract(ones)
            if zeros:
                M = M.delete(zeros)
            # contraction may create loops; they can never be in a basis
            loops = [e for e in M.ground if M.rank([e]) == 0]
            if loops:
                M = M.delete(loops)
            continue
        overshoot = P.A[np.ix_(active, cols)] @ (1.0 - z)
        drop = [i for i, o in zip(active, overshoot) if o <= P.nu + 1e-9]
        if not drop:
            k = int(np.argmin(overshoot))
            drop = [active[k]]
            fallback += 1
            log.warning("no row within nu; dropping row %d with overshoot %.6g", active[k], overshoot[k])
        dropped.extend(drop)
        active = [i for i in active if i not in drop]

    chi = np.zeros(len(U))
    chi[[index[e] for e in chosen]] = 1.0
    report = RoundingReport(
        basis=sorted(chosen, key=lambda e: index[e]),
        cost=float(P.c @ chi),
        lp_cost=float(P.c @ P.z),
        loads=P.A @ chi,
        rhs=P.b.copy(),
        iterations=iterations,
        dropped_rows=dropped,
        fallback_drops=fallback,
    )
    if check:
        _check(P, report, set(supp))
    return report


def _check(P: BudgetedMatroidLP, rep: RoundingReport, supp: set) -> None:
    diag = {"cost": rep.cost, "lp_cost": rep.lp_cost, "max_violation": rep.max_violation,
            "nu": P.nu, "iterations": rep.iterations}
    if not P.matroid.is_basis(rep.basis):
        raise GuaranteeViolation("rounded set is not a basis", diag)
    if rep.cost > rep.lp_cost + POST_TOL * max(1.0, abs(rep.lp_cost)):
        raise GuaranteeViolation("rounded cost exceeds the fractional cost", diag)
    if rep.loads.size and np.any(rep.loads > rep.rhs + P.nu + POST_TOL):
        raise GuaranteeViolation("budget violated by more than nu", diag)
    if not set(rep.basis) <= supp:
        raise GuaranteeViolation("basis leaves the support of the fractional point", diag)


def round_point(matroid: Matroid, A, b, c, z, nu: float, check: bool = True) -> RoundingReport:
    P = BudgetedMatroidLP(matroid, A, b, c, z, nu)
    P.validate()
    return iterative_round(P, check=check)

