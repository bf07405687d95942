"""Acceptance property suites.

Each ``criterion_*`` function draws its own seeded corpus, checks one family
of guarantees exactly and returns a :class:`CriterionResult`.  The test
suite and the ``verify`` command both call :func:`run_all`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import constants as K
from . import instances as gen
from .distributions import (DiscreteRV, bernoulli_decompose, convolve_all,
                            stochastically_dominates, sum_of_trials)
from .envelope import (canonical_guess_loadbal, canonical_guess_tree, enumerate_guesses_loadbal,
                       enumerate_guesses_tree, monotone_sequence_bound, monotone_sequence_count,
                       pos_set)
from .errors import GuaranteeViolation
from .loadbal import (candidate_guesses, load_vector, solve_minnorm, solve_topl,
                      upper_bound)
from .norms import Lp, Ordered, TopL, max_scaled
from .oracle import brute_force_loadbal, brute_force_tree
from .rounding import POST_TOL, iterative_round
from .sptree import candidate_guesses as tree_candidates
from .sptree import mst_weight_vector, solve_tree
from .sptree import upper_bound as tree_upper_bound
from .stats import (exceptional_mass, expected_norms_exact,
                    expected_topl_exact, gamma, sorted_mean_vector, tau)

EXACT_TOL = 1e-9


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    checks: int = 0
    metrics: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.metrics.items()))
        return f"[{status}] criterion {self.number:2d} {self.title}: {self.checks} checks, {self.seconds:.2f}s" + (
            f" ({extra})" if extra else "")

    def as_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "checks": self.checks, "metrics": self.metrics, "failures": self.failures[:20]}


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


class _Tally:
    def __init__(self):
        self.checks = 0
        self.failures: list[str] = []

    def check(self, ok: bool, msg: str):
        self.checks += 1
        if not ok:
            self.failures.append(msg)


def _finish(number, title, tally, start, **metrics) -> CriterionResult:
    return CriterionResult(number, title, not tally.failures, time.perf_counter() - start,
                           tally.checks, metrics, tally.failures)


def _ratio(alg: float, opt: float) -> float:
    if opt > 0:
        return alg / opt
    return 1.0 if alg <= EXACT_TOL else math.inf


# -------------------------------------------------------------------------
# criteria 1-5: statistics of product vectors


def criterion_gamma_sandwich(seed: int = 1, count: int = 200) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(count):
        Y = gen.random_product_vector(rng, max_m=6, max_atoms=3)
        for l in range(1, Y.m + 1):
            e = expected_topl_exact(Y, l)
            g = gamma(Y, l)
            T.check(e <= g + EXACT_TOL and g <= 4 * e + EXACT_TOL,
                    f"vector {k}, l={l}: E[top]={e}, Gamma={g}")
            if e > 0:
                worst = max(worst, g / e)
    elapsed = time.perf_counter() - start
    T.check(elapsed < 10.0, f"runtime {elapsed:.2f}s exceeds 10s")
    return _finish(1, "Gamma sandwich", T, start, max_gamma_ratio=worst)


def criterion_proxy_bounds(seed: int = 1, count: int = 200) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    for k in range(count):
        Y = gen.random_product_vector(rng, max_m=6, max_atoms=3)
        tops = {l: expected_topl_exact(Y, l) for l in range(1, Y.m + 1)}
        for theta in Y.breakpoints():
            theta = float(theta)
            if theta <= 0:
                continue
            mass = exceptional_mass(Y, theta)
            for l, e in tops.items():
                if mass <= l * theta:
                    T.check(e <= 2 * l * theta + EXACT_TOL, f"vector {k}, l={l}, theta={theta}: upper")
                else:
                    T.check(e > l * theta / 2 - EXACT_TOL, f"vector {k}, l={l}, theta={theta}: lower")
    return _finish(2, "proxy bounds", T, start)


def criterion_effective_size(seed: int = 1, count: int = 200) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    for k in range(count):
        X = gen.random_rv(rng, max_atoms=4, grid=None)
        for lam in (2, 4, 8):
            b = X.effective_size(lam)
            for c in (0.0, 0.5, 1.0, 2.0):
                T.check(X.tail_geq(b + c) <= lam ** (-c) + EXACT_TOL, f"rv {k}, lam={lam}, c={c}: tail")
            T.check(X.exceptional_mean(b + 1) <= (b + 3) / lam + EXACT_TOL,
                    f"rv {k}, lam={lam}: exceptional mean")
    worst = math.inf
    for k in range(count):
        theta = float(rng.uniform(0.5, 4.0))
        n_terms = int(rng.integers(1, 7))
        xs = [gen.random_rv(rng, max_atoms=3, lo=0.0, hi=theta, grid=None) for _ in range(n_terms)]
        S = convolve_all(xs)
        lhs = S.exceptional_mean(theta)
        for lam in range(1, 9):
            total = math.fsum(x.scale(1.0 / (4 * theta)).effective_size(lam) for x in xs)
            rhs = theta * (total - 6.0) / (4 * lam)
            T.check(lhs >= rhs - EXACT_TOL, f"sum {k}, lam={lam}: volume bound")
            worst = min(worst, lhs - rhs)
    return _finish(3, "effective-size bounds", T, start, min_volume_margin=worst)


def criterion_bernoulli_decomposition(seed: int = 1, count: int = 100) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(count):
        R = gen.random_geometric_rv(rng, max_atoms=6)
        pairs = bernoulli_decompose(R)
        B = sum_of_trials(pairs) if pairs else DiscreteRV.point(0.0)
        for t, p in R.atoms():
            if t == 0:
                continue
            window = math.fsum(q for v, q in B.atoms() if t <= v < 2 * t)
            worst = max(worst, abs(p - window))
            T.check(abs(p - window) <= 1e-12, f"rv {k}, t={t}: Pr[R=t]={p}, window={window}")
        T.check(stochastically_dominates(R, B.scale(0.5)), f"rv {k}: B/2 not dominated by R")
        T.check(stochastically_dominates(B, R), f"rv {k}: R not dominated by B")
    return _finish(4, "Bernoulli decomposition", T, start, max_abs_error=worst)


def _norm_family(rng, m: int) -> list:
    norms = [TopL(l) for l in range(1, m + 1)]
    for _ in range(3):
        w = np.sort(rng.random(m))[::-1]
        w[0] = max(w[0], 1e-3)
        norms.append(Ordered(tuple(w)))
    norms.append(Lp(2.0))
    norms.append(max_scaled([TopL(1), TopL(m)], [1.0, float(rng.uniform(1.0, m + 1.0))]))
    return norms


def criterion_expectation_of_norm(seed: int = 1, count: int = 200) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(count):
        Y = gen.random_product_vector(rng, max_m=5, max_atoms=3)
        norms = _norm_family(rng, Y.m)
        mean_sorted = sorted_mean_vector(Y)
        exact = expected_norms_exact(Y, norms)
        for f, e in zip(norms, exact):
            lower = f(mean_sorted)
            T.check(lower <= e + EXACT_TOL, f"vector {k}, {f.spec()}: f(E[Y sorted])={lower} > E[f]={e}")
            T.check(e <= K.EXPECTED_NORM * lower + EXACT_TOL, f"vector {k}, {f.spec()}: upper constant")
            if lower > 0:
                worst = max(worst, e / lower)
    return _finish(5, "expectation of norm", T, start, max_ratio=worst, constant=K.EXPECTED_NORM)


# -------------------------------------------------------------------------
# criterion 6: iterative rounding


def criterion_iterative_rounding(seed: int = 1, count: int = 200) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    errors = 0
    worst = -math.inf
    for k in range(count):
        P = gen.random_budgeted_lp(rng, max_ground=10, max_rows=4)
        try:
            rep = iterative_round(P, check=False)
        except Exception as exc:  # any exit here is a hard error
            errors += 1
            T.check(False, f"instance {k}: {type(exc).__name__}: {exc}")
            continue
        T.check(P.matroid.is_basis(rep.basis), f"instance {k}: not a basis")
        T.check(rep.cost <= rep.lp_cost + POST_TOL, f"instance {k}: cost {rep.cost} > {rep.lp_cost}")
        T.check(not rep.loads.size or bool(np.all(rep.loads <= rep.rhs + P.nu + POST_TOL)),
                f"instance {k}: budget violation {rep.max_violation} > nu={P.nu}")
        index = {e: i for i, e in enumerate(P.matroid.ground)}
        T.check(all(P.z[index[e]] > 1e-9 for e in rep.basis), f"instance {k}: outside support")
        if rep.loads.size and P.nu > 0:
            worst = max(worst, rep.max_violation / P.nu)
    return _finish(6, "iterative rounding", T, start, hard_errors=errors, max_violation_over_nu=worst)


# -------------------------------------------------------------------------
# criteria 7-9: load balancing


def criterion_topl(seed: int = 1, count: int = 50, eps: float = 0.01) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(count):
        inst = gen.random_loadbal(rng, max_m=3, max_n=4, max_atoms=2)
        for l in pos_set(inst.m):
            try:
                res = solve_topl(inst, l, eps)
            except GuaranteeViolation as exc:
                T.check(False, f"instance {k}, l={l}: {exc}")
                continue
            opt = brute_force_loadbal(inst, TopL(l)).opt_value
            alg = expected_topl_exact(load_vector(inst, res.sigma), l)
            r = _ratio(alg, opt)
            worst = max(worst, r)
            T.check(r <= 611, f"instance {k}, l={l}: ratio {r}")
    elapsed = time.perf_counter() - start
    T.check(elapsed < 120.0, f"runtime {elapsed:.1f}s exceeds 2 min")
    return _finish(7, "top-l load balancing", T, start, max_ratio=worst, bound=611,
                   composed_constant=K.TOPL_RATIO)


def _loadbal_norms(m: int) -> list:
    return [TopL(1), TopL(2), Lp(2.0), max_scaled([TopL(1), TopL(m)], [1.0, 2.0])]


def _minnorm_suite(number, title, mode, seed, count, make) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    worst = 0.0
    ratios = []
    bounds = set()
    for k in range(count):
        inst = make(rng)
        norms = _loadbal_norms(inst.m)
        cands = candidate_guesses(inst)
        opts = brute_force_loadbal(inst, norms)
        for f, o in zip(norms, opts):
            fn = f.as_normalized()
            try:
                res = solve_minnorm(inst, f, mode, candidates=cands)
            except GuaranteeViolation as exc:
                T.check(False, f"instance {k}, {f.spec()}: {exc}")
                continue
            bounds.add(res.ratio_bound)
            if res.rounding is not None:
                T.check(res.rounding.exact_checked, f"instance {k}: per-level bounds not checked exactly")
            alg = expected_norms_exact(load_vector(inst, res.sigma), [fn])[0]
            opt = o.opt_value / f.unit_value()
            r = _ratio(alg, opt)
            ratios.append(r)
            worst = max(worst, r)
            T.check(r <= res.ratio_bound, f"instance {k}, {f.spec()}: ratio {r} > {res.ratio_bound}")
    return _finish(number, title, T, start, max_ratio=worst,
                   mean_ratio=float(np.mean(ratios)) if ratios else 0.0,
                   composed_constant=max(bounds) if bounds else float("nan"))


def criterion_bernoulli_loadbal(seed: int = 1, count: int = 30) -> CriterionResult:
    return _minnorm_suite(8, "Bernoulli min-norm load balancing", "bernoulli", seed, count,
                          lambda rng: gen.random_loadbal(rng, 3, 4, bernoulli=True))


def criterion_general_loadbal(seed: int = 1, count: int = 30) -> CriterionResult:
    return _minnorm_suite(9, "general-distribution load balancing", "general", seed, count,
                          lambda rng: gen.random_loadbal(rng, 3, 4, max_atoms=3, exact_atoms=True))


# -------------------------------------------------------------------------
# criterion 10: spanning trees


def criterion_spanning_tree(seed: int = 1, count: int = 50, deterministic: int = 10) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    worst, worst_mst = 0.0, 0.0
    norms = [TopL(1), TopL(2), Lp(2.0)]
    for k in range(count + deterministic):
        det = k >= count
        inst = gen.random_tree(rng, max_vertices=5, max_edges=8, max_atoms=3, deterministic=det)
        cands = tree_candidates(inst)
        opts = brute_force_tree(inst, norms)
        for f, o in zip(norms, opts):
            fn = f.as_normalized()
            try:
                res = solve_tree(inst, f, candidates=cands)
            except GuaranteeViolation as exc:
                T.check(False, f"instance {k}, {f.spec()}: {exc}")
                continue
            basis = inst.as_basis()
            alg = expected_norms_exact(basis.weights(res.basis), [fn])[0]
            opt = o.opt_value / f.unit_value()
            r = _ratio(alg, opt)
            worst = max(worst, r)
            T.check(r <= K.TREE_RATIO, f"instance {k}, {f.spec()}: ratio {r}")
            if det:
                mst = fn(mst_weight_vector(inst))
                rm = _ratio(alg, mst)
                worst_mst = max(worst_mst, rm)
                T.check(rm <= K.TREE_RATIO, f"instance {k}, {f.spec()}: ratio vs MST {rm}")
    return _finish(10, "spanning tree", T, start, max_ratio=worst, max_ratio_vs_mst=worst_mst,
                   bound=K.TREE_RATIO)


# -------------------------------------------------------------------------
# criterion 11: guess coverage


def criterion_guess_coverage(seed: int = 1, count: int = 30) -> CriterionResult:
    start, T = time.perf_counter(), _Tally()
    rng = np.random.default_rng(seed)
    largest = 0
    for k in range(count):
        inst = gen.random_loadbal(rng, 3, 4, max_atoms=2)
        UB = upper_bound(inst)
        if UB == 0:
            continue
        guesses = enumerate_guesses_loadbal(UB, inst.m)
        members = set(g.values for g in guesses)
        levels = pos_set(inst.m)
        for f, o in zip(_loadbal_norms(inst.m), brute_force_loadbal(inst, _loadbal_norms(inst.m))):
            Y = load_vector(inst, o.best)
            tops = {l: expected_topl_exact(Y, l) for l in levels}
            star = canonical_guess_loadbal(tops, inst.m)
            T.check(star.values in members, f"loadbal {k}, {f.spec()}: canonical guess {star.values} missing")
        n_powers = len({v for g in guesses for v in g.values})
        T.check(len(guesses) <= monotone_sequence_count(n_powers - 1, len(levels))
                <= monotone_sequence_bound(n_powers - 1, len(levels)),
                f"loadbal {k}: |T|={len(guesses)} above the monotone-sequence bound")
        largest = max(largest, len(guesses))
    for k in range(count):
        inst = gen.random_tree(rng, 5, 8, 3)
        UB = tree_upper_bound(inst)
        if UB == 0:
            continue
        dim = inst.n_vertices - 1
        guesses = enumerate_guesses_tree(UB, dim, inst.n_vertices)
        members = set(g.values for g in guesses)
        delta = UB / inst.n_vertices**2
        levels = pos_set(dim)
        for f, o in zip([TopL(1), TopL(2), Lp(2.0)], brute_force_tree(inst, [TopL(1), TopL(2), Lp(2.0)])):
            Y = inst.as_basis().weights(o.best)
            star = canonical_guess_tree({l: tau(Y, l) for l in levels}, dim, delta)
            T.check(star.values in members, f"tree {k}, {f.spec()}: canonical guess {star.values} missing")
        n_powers = len({v for g in guesses for v in g.values})
        T.check(len(guesses) <= monotone_sequence_count(n_powers - 1, len(levels))
                <= monotone_sequence_bound(n_powers - 1, len(levels)),
                f"tree {k}: |T|={len(guesses)} above the monotone-sequence bound")
        largest = max(largest, len(guesses))
    return _finish(11, "guess-set coverage", T, start, largest_guess_set=largest)


# -------------------------------------------------------------------------
# criterion 12: determinism


def criterion_determinism(seed: int = 1) -> CriterionResult:
    import os
    import tempfile

    from .cli import run

    start, T = time.perf_counter(), _Tally()
    with tempfile.TemporaryDirectory() as tmp:
        jobs = [
            (["gen", "--kind", "loadbal", "--machines", "2", "--jobs", "3", "--bernoulli"], ["--norm", "top:1", "--mode", "bernoulli"]),
            (["gen", "--kind", "loadbal", "--machines", "3", "--jobs", "3"], ["--norm", "top:2", "--mode", "topl"]),
            (["gen", "--kind", "loadbal", "--machines", "2", "--jobs", "3"], ["--norm", "lp:2", "--mode", "general", "--method", "mc"]),
            (["gen", "--kind", "tree", "--vertices", "4", "--edges", "6"], ["--norm", "top:2", "--method", "mc"]),
        ]
        for k, (g, s) in enumerate(jobs):
            path = os.path.join(tmp, f"inst{k}.json")
            code, text = run(g + ["--seed", str(seed), "--out", path])
            T.check(code == 0, f"gen {k} exited with {code}")
            if code != 0:
                continue
            outs = [run(["solve", path, "--seed", str(seed)] + s) for _ in range(2)]
            T.check(outs[0][0] == 0, f"solve {k} exited with {outs[0][0]}")
            T.check(outs[0] == outs[1], f"solve {k}: reports differ between runs")
            regen = os.path.join(tmp, f"again{k}.json")
            run(g + ["--seed", str(seed), "--out", regen])
            with open(path, "rb") as a, open(regen, "rb") as b:
                T.check(a.read() == b.read(), f"gen {k}: files differ between runs")
    return _finish(12, "determinism", T, start)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_gamma_sandwich,
    2: criterion_proxy_bounds,
    3: criterion_effective_size,
    4: criterion_bernoulli_decomposition,
    5: criterion_expectation_of_norm,
    6: criterion_iterative_rounding,
    7: criterion_topl,
    8: criterion_bernoulli_loadbal,
    9: criterion_general_loadbal,
    10: criterion_spanning_tree,
    11: criterion_guess_coverage,
    12: criterion_determinism,
}


def run_all(selected=None, echo=None) -> list[CriterionResult]:
    out = []
    for number in sorted(selected or CRITERIA):
        res = CRITERIA[number]()
        if echo:
            echo(res.line())
        out.append(res)
    return out
