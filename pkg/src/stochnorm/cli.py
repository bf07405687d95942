"""Command-line driver.

Every command prints one JSON document to stdout (keys sorted, so reports
are byte-stable for a fixed seed).  Diagnostics go to stderr.

Exit codes: 0 success, 1 a runtime guarantee or property check failed,
2 infeasible problem, size cap exceeded or malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import constants as K
from . import instances as io
from .envelope import pos_set
from .errors import CapExceededError, GuaranteeViolation, InfeasibleError, InstanceParseError
from .loadbal import LoadBalInstance, load_vector, solve_minnorm, solve_topl
from .norms import Norm, TopL, parse_norm
from .oracle import brute_force_basis, brute_force_loadbal, brute_force_tree
from .sptree import TreeInstance, solve_matroid_basis, solve_tree
from .stats import DEFAULT_JOINT_CAP, expected_norm, expected_topl_exact, gamma, tau

EXIT_OK, EXIT_GUARANTEE, EXIT_INPUT = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# -------------------------------------------------------------------------
# helpers


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def _dump(doc: dict) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2)


def _assertions(checks: dict) -> list[dict]:
    rows = []
    for name, (value, bound) in sorted(checks.items()):
        rows.append({"check": name, "value": value, "bound": bound, "margin": bound - value})
    return rows


def _objective(Y, f: Norm, method: str, samples: int, seed: int) -> dict:
    if method == "auto":
        method = "exact" if Y.joint_size() <= DEFAULT_JOINT_CAP else "mc"
    value, half = expected_norm(Y, f, method=method, n_samples=samples, seed=seed)
    return {"method": method, "value": value, "half_width": half,
            "samples": samples if method == "mc" else None}


def _load(path: str, kind: str | None):
    doc = io.load(path)
    if kind and kind != doc.kind:
        raise InstanceParseError(f"file holds a {doc.kind} instance, not {kind}", f"{path}: kind")
    return doc


def _norm(args, doc) -> Norm:
    if args.norm:
        try:
            return parse_norm(args.norm)
        except ValueError as exc:
            raise InstanceParseError(str(exc), "--norm") from None
    if doc.norm is None:
        raise InstanceParseError("no norm given on the command line or in the instance", "norm")
    return doc.norm


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InstanceParseError(f"expected comma-separated integers, got {text!r}", what) from None


# -------------------------------------------------------------------------
# solving, shared by solve and bench


def _solve_loadbal(inst: LoadBalInstance, f: Norm, mode: str, eps: float):
    if mode == "auto":
        mode = "topl" if isinstance(f, TopL) else ("bernoulli" if inst.is_bernoulli() else "general")
    if mode == "topl":
        if not isinstance(f, TopL):
            raise InstanceParseError("mode topl needs a top:l norm", "--mode")
        res = solve_topl(inst, min(f.l, inst.m), eps)
        checks = res.rounding.checks if res.rounding else {}
        detail = {"t": res.t, "UB": res.UB, "probes": res.probes, "epsilon": eps,
                  "ratio_bound": K.TOPL_RATIO * (1 + eps)}
        return mode, res.sigma, checks, detail
    res = solve_minnorm(inst, f, mode)
    guesses = [{"t": list(r.guess.values), "feasible": r.feasible, "proxy": r.proxy} for r in res.guesses]
    detail = {"UB": res.UB, "selected": list(res.selected.values) if res.selected else None,
              "proxy": res.proxy, "ratio_bound": res.ratio_bound, "guesses": guesses}
    checks = res.rounding.checks if res.rounding else {}
    return mode, res.sigma, checks, detail


def _solve_basis(inst, f: Norm):
    res = solve_tree(inst, f) if isinstance(inst, TreeInstance) else solve_matroid_basis(inst, f)
    guesses = [{"t": list(r.guess.values), "feasible": r.feasible, "lp_value": r.lp_value, "val": r.val}
               for r in res.guesses]
    detail = {"UB": res.UB, "delta": res.delta, "val": res.val, "ratio_bound": res.ratio_bound,
              "selected": list(res.selected.values) if res.selected else None, "guesses": guesses}
    checks = res.rounding.checks if res.rounding else {}
    return res.basis, checks, detail


def _weights(inst, solution):
    if isinstance(inst, LoadBalInstance):
        return load_vector(inst, solution)
    b = inst.as_basis() if isinstance(inst, TreeInstance) else inst
    return b.weights(solution)


# -------------------------------------------------------------------------
# commands


def cmd_solve(args) -> tuple[int, dict]:
    doc = _load(args.instance, args.kind)
    f = _norm(args, doc)
    inst = doc.instance
    report = {"command": "solve", "kind": doc.kind, "norm": f.spec(), "seed": args.seed}
    if isinstance(inst, LoadBalInstance):
        mode, sigma, checks, detail = _solve_loadbal(inst, f, args.mode, args.epsilon)
        report.update(mode=mode, solution={"assignment": list(sigma)}, **detail)
        Y = load_vector(inst, sigma)
    else:
        basis, checks, detail = _solve_basis(inst, f)
        key = "tree_edges" if isinstance(inst, TreeInstance) else "basis"
        report.update(mode="basis", solution={key: list(basis)}, **detail)
        Y = _weights(inst, basis)
    report["objective"] = _objective(Y, f, args.method, args.samples, args.seed)
    report["assertions"] = _assertions(checks)
    return EXIT_OK, report


def cmd_stats(args) -> tuple[int, dict]:
    doc = _load(args.instance, args.kind)
    inst = doc.instance
    if isinstance(inst, LoadBalInstance):
        sol = _int_list(args.solution, "--solution") if args.solution else [0] * inst.n
        sol = list(sol)
    else:
        if not args.solution:
            raise InstanceParseError("--solution (element indices) is required", "--solution")
        sol = _int_list(args.solution, "--solution")
        b = inst.as_basis() if isinstance(inst, TreeInstance) else inst
        if any(not 0 <= e < len(b.dist) for e in sol):
            raise InstanceParseError("element index out of range", "--solution")
    Y = _weights(inst, sol)
    exact = Y.joint_size() <= DEFAULT_JOINT_CAP
    rows = []
    for l in range(1, Y.m + 1):
        row = {"l": l, "tau": tau(Y, l), "gamma": gamma(Y, l)}
        if exact:
            row["expected_topl"] = expected_topl_exact(Y, l)
            row["half_width"] = 0.0
        else:
            row["expected_topl"], row["half_width"] = expected_norm(
                Y, TopL(l), method="mc", n_samples=args.samples, seed=args.seed)
        rows.append(row)
    return EXIT_OK, {"command": "stats", "kind": doc.kind, "solution": sol, "dimension": Y.m,
                     "method": "exact" if exact else "mc", "levels": list(pos_set(Y.m)), "table": rows}


def _oracle(inst, f: Norm):
    if isinstance(inst, LoadBalInstance):
        return brute_force_loadbal(inst, f)
    if isinstance(inst, TreeInstance):
        return brute_force_tree(inst, f)
    return brute_force_basis(inst.matroid, inst.dist, f)


def cmd_oracle(args) -> tuple[int, dict]:
    doc = _load(args.instance, args.kind)
    f = _norm(args, doc)
    res = _oracle(doc.instance, f)
    return EXIT_OK, {"command": "oracle", "kind": doc.kind, "norm": f.spec(), "best": list(res.best),
                     "opt_value": res.opt_value, "evaluated_count": res.evaluated_count}


def _generate(args, rng):
    if args.kind == "loadbal":
        m, n = args.machines, args.jobs
        if args.bernoulli:
            dist = [[io.random_bernoulli(rng) for _ in range(n)] for _ in range(m)]
        else:
            dist = [[io.random_rv(rng, args.atoms) for _ in range(n)] for _ in range(m)]
        return LoadBalInstance(dist)
    if args.kind == "tree":
        return io.random_tree(rng, max_vertices=args.vertices, max_edges=max(args.edges, args.vertices - 1),
                              max_atoms=args.atoms, deterministic=args.deterministic, exact_size=True)
    raise InstanceParseError("gen supports loadbal and tree", "--kind")


def cmd_gen(args) -> tuple[int, dict]:
    rng = np.random.default_rng(args.seed)
    inst = _generate(args, rng)
    norm = parse_norm(args.norm) if args.norm else None
    text = io.dumps(inst, norm) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return EXIT_OK, {"command": "gen", "kind": args.kind, "seed": args.seed, "path": args.out}
    return EXIT_OK, io.to_document(inst, norm)


def cmd_bench(args) -> tuple[int, dict]:
    """Algorithm-vs-oracle ratios on random instances, one row per (instance, norm)."""
    rng = np.random.default_rng(args.seed)
    norms = [parse_norm(s) for s in args.norms.split(";")]
    rows = []
    for k in range(args.count):
        if args.kind == "loadbal":
            inst = io.random_loadbal(rng, args.machines, args.jobs, args.atoms, bernoulli=args.bernoulli)
        elif args.kind == "tree":
            inst = io.random_tree(rng, args.vertices, args.edges, args.atoms)
        else:
            raise InstanceParseError("bench supports loadbal and tree", "--kind")
        for f in norms:
            if isinstance(inst, LoadBalInstance):
                mode, sol, _, detail = _solve_loadbal(inst, f, args.mode, args.epsilon)
            else:
                mode, (sol, _, detail) = "basis", _solve_basis(inst, f)
            fn = f.as_normalized()
            alg = expected_norm(_weights(inst, sol), fn)[0]
            opt = _oracle(inst, f).opt_value / f.unit_value()
            ratio = alg / opt if opt > 0 else (1.0 if alg == 0 else math.inf)
            rows.append({"instance": k, "norm": f.spec(), "mode": mode, "alg": alg, "opt": opt,
                         "ratio": ratio, "ratio_bound": detail["ratio_bound"]})
    worst = max((r["ratio"] for r in rows), default=0.0)
    code = EXIT_OK if all(r["ratio"] <= r["ratio_bound"] for r in rows) else EXIT_GUARANTEE
    return code, {"command": "bench", "kind": args.kind, "seed": args.seed,
                  "columns": ["instance", "norm", "mode", "alg", "opt", "ratio", "ratio_bound"],
                  "rows": rows, "max_ratio": worst}


def cmd_verify(args) -> tuple[int, dict]:
    from .verify import CRITERIA, run_all

    selected = _int_list(args.criteria, "--criteria") if args.criteria else sorted(CRITERIA)
    unknown = [c for c in selected if c not in CRITERIA]
    if unknown:
        raise InstanceParseError(f"unknown criteria {unknown}", "--criteria")
    results = run_all(selected, echo=lambda s: print(s, file=sys.stderr))
    ok = all(r.passed for r in results)
    return (EXIT_OK if ok else EXIT_GUARANTEE), {
        "command": "verify", "passed": ok, "criteria": [r.as_dict() for r in results]}


# -------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stochnorm", description="Stochastic minimum-norm load balancing and spanning trees.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("instance", help="instance JSON file")
            sp.add_argument("--kind", choices=io.KINDS)
        sp.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")

    s = sub.add_parser("solve", help="run the approximation algorithm")
    common(s)
    s.add_argument("--norm", help="norm spec, e.g. top:2, ordered:1,0.5, lp:2, max[top:1@1;top:3@2]")
    s.add_argument("--mode", choices=("auto", "topl", "bernoulli", "general"), default="auto")
    s.add_argument("--epsilon", type=float, default=0.01, help="binary-search slack")
    s.add_argument("--method", choices=("auto", "exact", "mc"), default="auto")
    s.add_argument("--samples", type=int, default=20_000)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("stats", help="tau, Gamma and E[top_l] for a solution")
    common(s)
    s.add_argument("--solution", help="assignment (job -> machine) or element indices, comma-separated")
    s.add_argument("--samples", type=int, default=20_000)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("oracle", help="exact optimum by enumeration")
    common(s)
    s.add_argument("--norm")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", help="algorithm-vs-oracle ratio sweep")
    common(s, instance=False)
    s.add_argument("--kind", choices=("loadbal", "tree"), default="loadbal")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--norms", default="top:1;lp:2", help="semicolon-separated norm specs")
    s.add_argument("--mode", choices=("auto", "topl", "bernoulli", "general"), default="auto")
    s.add_argument("--epsilon", type=float, default=0.01)
    s.add_argument("--machines", type=int, default=3)
    s.add_argument("--jobs", type=int, default=4)
    s.add_argument("--vertices", type=int, default=5)
    s.add_argument("--edges", type=int, default=8)
    s.add_argument("--atoms", type=int, default=2)
    s.add_argument("--bernoulli", action="store_true")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("verify", help="run the acceptance property suites")
    s.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="write a random instance")
    common(s, instance=False)
    s.add_argument("--kind", choices=("loadbal", "tree"), required=True)
    s.add_argument("--machines", type=int, default=2)
    s.add_argument("--jobs", type=int, default=3)
    s.add_argument("--vertices", type=int, default=4)
    s.add_argument("--edges", type=int, default=5)
    s.add_argument("--atoms", type=int, default=2)
    s.add_argument("--bernoulli", action="store_true")
    s.add_argument("--deterministic", action="store_true", help="point-mass edge weights")
    s.add_argument("--norm")
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=cmd_gen)
    return p


def _execute(argv: Sequence[str]) -> tuple[int, dict, bool]:
    """Exit code, document, and whether the document is an error report."""
    try:
        args = build_parser().parse_args(list(argv))
        if not 0 <= getattr(args, "seed", 0) < 2**64:
            raise _UsageError("--seed must be a 64-bit unsigned integer")
        code, doc = args.func(args)
        return code, doc, False
    except _UsageError as exc:
        return EXIT_INPUT, {"error": "usage", "message": str(exc)}, True
    except InstanceParseError as exc:
        return EXIT_INPUT, {"error": "parse", "message": str(exc), "path": exc.path}, True
    except (InfeasibleError, CapExceededError) as exc:
        return EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}, True
    except OSError as exc:
        return EXIT_INPUT, {"error": "io", "message": str(exc)}, True
    except ValueError as exc:  # invalid arguments rejected by the library
        return EXIT_INPUT, {"error": "invalid", "message": str(exc)}, True
    except GuaranteeViolation as exc:
        return EXIT_GUARANTEE, {"error": "guarantee", "message": str(exc),
                                "diagnostics": exc.diagnostics}, True


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Execute one command; returns the exit code and the report text."""
    code, doc, _ = _execute(argv)
    return code, _dump(doc) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    code, doc, failed = _execute(sys.argv[1:] if argv is None else argv)
    (sys.stderr if failed else sys.stdout).write(_dump(doc) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
