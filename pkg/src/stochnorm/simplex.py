"""Dense two-phase tableau simplex with Bland's pivoting rule.

Solves ``min c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` and
``x >= 0``.  The returned point is always a basic feasible solution, which
is what iterative rounding relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnboundedError

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    objective: float = float("nan")
    # basic column indices; columns n.. n+k_ub-1 are the slacks of A_ub rows
    basis: tuple = ()
    iterations: int = 0
    dropped_eq_rows: tuple = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run(T, basis, allowed, tol, max_iter):
    """Bland's rule on tableau ``T`` (objective in the last row)."""
    it = 0
    rows = T.shape[0] - 1
    while True:
        d = T[-1, :-1]
        cand = np.flatnonzero((d < -tol) & allowed)
        if cand.size == 0:
            return it
        j = int(cand[0])
        colj = T[:rows, j]
        ok = colj > tol
        if not ok.any():
            raise UnboundedError("objective is unbounded below")
        ratios = np.full(rows, np.inf)
        ratios[ok] = T[:rows, -1][ok] / colj[ok]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, j)
        basis[r] = j
        it += 1
        if it > max_iter:
            raise RuntimeError("simplex iteration limit reached")


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, tol: float = PIVOT_TOL,
             feas_tol: float = FEAS_TOL, max_iter: int = 100_000) -> LPResult:
    """Minimize ``c.x`` over the polyhedron; ``status`` is "optimal" or "infeasible".

    Raises :class:`UnboundedError` when the objective is unbounded.
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    k_ub, k_eq = A_ub.shape[0], A_eq.shape[0]
    R = k_ub + k_eq

    A = np.zeros((R, n + k_ub))
    A[:k_ub, :n] = A_ub
    A[:k_ub, n:] = np.eye(k_ub)
    A[k_ub:, :n] = A_eq
    b = np.concatenate([b_ub, b_eq])
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # slack columns give a starting basis for nonnegated inequality rows
    need_art = [i for i in range(R) if i >= k_ub or neg[i]]
    n_art = len(need_art)
    N = n + k_ub + n_art
    T = np.zeros((R + 1, N + 1))
    T[:R, : n + k_ub] = A
    T[:R, -1] = b
    basis = [0] * R
    for i in range(k_ub):
        if not neg[i]:
            basis[i] = n + i
    for a, i in enumerate(need_art):
        T[i, n + k_ub + a] = 1.0
        basis[i] = n + k_ub + a

    it = 0
    if n_art:
        T[-1, n + k_ub:N] = 1.0
        for i in need_art:
            T[-1] -= T[i]
        allowed = np.ones(N, dtype=bool)
        it += _run(T, basis, allowed, tol, max_iter)
        if -T[-1, -1] > feas_tol * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LPResult("infeasible", iterations=it)
        # drive remaining artificials out of the basis
        drop = []
        for r in range(R):
            if basis[r] >= n + k_ub:
                row = T[r, : n + k_ub]
                nz = np.flatnonzero(np.abs(row) > tol)
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
                else:
                    drop.append(r)
        keep = [r for r in range(R) if r not in drop]
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[r] for r in keep]
        T = np.hstack([T[:, : n + k_ub], T[:, -1:]])
        dropped = tuple(drop)
    else:
        dropped = ()

    # phase 2
    cost = np.zeros(n + k_ub)
    cost[:n] = c
    T[-1, :] = 0.0
    T[-1, :-1] = cost
    for r, j in enumerate(basis):
        if cost[j] != 0:
            T[-1] -= cost[j] * T[r]
    allowed = np.ones(n + k_ub, dtype=bool)
    it += _run(T, basis, allowed, tol, max_iter)

    full = np.zeros(n + k_ub)
    for r, j in enumerate(basis):
        full[j] = T[r, -1]
    full[np.abs(full) < 1e-13] = 0.0
    x = np.maximum(full[:n], 0.0)
    return LPResult("optimal", x=x, objective=float(c @ x), basis=tuple(basis),
                    iterations=it, dropped_eq_rows=dropped)


def tight_rank(x, A_ub=None, b_ub=None, A_eq=None, tol: float = 1e-7) -> int:
    """Rank of the constraints active at ``x`` (equalities, tight rows, zero coordinates)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    rows = []
    if A_eq is not None and len(A_eq):
        rows.append(np.asarray(A_eq, dtype=float).reshape(-1, n))
    if A_ub is not None and len(A_ub):
        A_ub = np.asarray(A_ub, dtype=float).reshape(-1, n)
        slack = np.asarray(b_ub, dtype=float) - A_ub @ x
        rows.append(A_ub[np.abs(slack) <= tol])
    rows.append(np.eye(n)[np.abs(x) <= tol])
    M = np.vstack(rows) if rows else np.zeros((0, n))
    if M.size == 0:
        return 0
    return int(np.linalg.matrix_rank(M, tol=1e-8))
