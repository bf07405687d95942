"""Instance files and random instance generators.

An instance file is one JSON document::

    {"schema_version": 1, "kind": "loadbal", "norm": "top:2",
     "sizes": [[[[0, 0.5], [2, 0.5]], ...], ...]}      # sizes[i][j] = atom list

    {"schema_version": 1, "kind": "tree", "vertices": 3,
     "edges": [{"u": 0, "v": 1, "weight": [[1, 1.0]]}, ...]}

    {"schema_version": 1, "kind": "matroid",
     "matroid": {"type": "uniform", "elements": 4, "rank": 2},
     "weights": [[[1, 1.0]], ...]}

An atom list is ``[[value, probability], ...]``.  Matroid types are
``uniform``, ``partition`` (``parts``: lists of element indices,
``capacities``) and ``graphic`` (``vertices``, ``edges``: ``[u, v]`` pairs).
The ``norm`` field is optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .distributions import DiscreteRV
from .errors import InstanceParseError
from .loadbal import LoadBalInstance
from .matroid_lp import GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid
from .norms import Norm, parse_norm
from .rounding import BudgetedMatroidLP
from .sptree import BasisInstance, TreeInstance
from .stats import ProductVector

SCHEMA_VERSION = 1
KINDS = ("loadbal", "tree", "matroid")


@dataclass
class InstanceFile:
    kind: str
    instance: Any  # LoadBalInstance | TreeInstance | BasisInstance
    norm: Norm | None = None


# -------------------------------------------------------------------------
# parsing


def _expect(cond: bool, msg: str, path: str):
    if not cond:
        raise InstanceParseError(msg, path)


def _int(x, path: str, lo: int | None = None) -> int:
    _expect(isinstance(x, int) and not isinstance(x, bool), "expected an integer", path)
    if lo is not None:
        _expect(x >= lo, f"must be at least {lo}", path)
    return x


def _list(x, path: str) -> list:
    _expect(isinstance(x, list), "expected a list", path)
    return x


def _atoms(x, path: str) -> DiscreteRV:
    atoms = _list(x, path)
    _expect(len(atoms) > 0, "atom list is empty", path)
    vals, probs = [], []
    for k, a in enumerate(atoms):
        p = f"{path}[{k}]"
        _expect(isinstance(a, list) and len(a) == 2, "atom must be [value, probability]", p)
        for v in a:
            _expect(isinstance(v, (int, float)) and not isinstance(v, bool), "expected a number", p)
        _expect(np.isfinite(a[0]) and a[0] >= 0, "value must be finite and nonnegative", p)
        _expect(0 <= a[1] <= 1, "probability must lie in [0, 1]", p)
        vals.append(float(a[0]))
        probs.append(float(a[1]))
    try:
        return DiscreteRV(vals, probs)
    except ValueError as exc:
        raise InstanceParseError(str(exc), path) from None


def _matroid(d, path: str) -> Matroid:
    _expect(isinstance(d, dict), "expected an object", path)
    kind = d.get("type")
    if kind == "uniform":
        n = _int(d.get("elements"), f"{path}.elements", 1)
        r = _int(d.get("rank"), f"{path}.rank", 1)
        _expect(r <= n, "rank exceeds the number of elements", f"{path}.rank")
        return UniformMatroid(range(n), r)
    if kind == "partition":
        parts = _list(d.get("parts"), f"{path}.parts")
        caps = _list(d.get("capacities"), f"{path}.capacities")
        _expect(len(parts) == len(caps), "one capacity per part", f"{path}.capacities")
        clean = []
        for k, part in enumerate(parts):
            clean.append(tuple(_int(e, f"{path}.parts[{k}][{q}]", 0)
                               for q, e in enumerate(_list(part, f"{path}.parts[{k}]"))))
        flat = sorted(e for p in clean for e in p)
        _expect(flat == list(range(len(flat))), "parts must cover 0..N-1 exactly once", f"{path}.parts")
        caps = [_int(c, f"{path}.capacities[{k}]", 0) for k, c in enumerate(caps)]
        # weights are matched to elements by label, so part order is free
        return PartitionMatroid(tuple(clean), tuple(caps))
    if kind == "graphic":
        n = _int(d.get("vertices"), f"{path}.vertices", 1)
        pairs = []
        for k, e in enumerate(_list(d.get("edges"), f"{path}.edges")):
            p = f"{path}.edges[{k}]"
            _expect(isinstance(e, list) and len(e) == 2, "edge must be [u, v]", p)
            u, v = (_int(x, p, 0) for x in e)
            _expect(u < n and v < n, "endpoint out of range", p)
            pairs.append((u, v))
        return GraphicMatroid.from_edge_list(n, pairs)
    raise InstanceParseError(f"unknown matroid type {kind!r}", f"{path}.type")


def parse_instance(doc: dict) -> InstanceFile:
    """Build an instance from a decoded JSON document."""
    _expect(isinstance(doc, dict), "instance must be a JSON object", "$")
    _expect("schema_version" in doc, "missing schema_version", "schema_version")
    _expect(doc["schema_version"] == SCHEMA_VERSION,
            f"unsupported schema_version {doc['schema_version']!r}", "schema_version")
    kind = doc.get("kind")
    _expect(kind in KINDS, f"kind must be one of {', '.join(KINDS)}", "kind")
    norm = None
    if doc.get("norm") is not None:
        _expect(isinstance(doc["norm"], str), "norm must be a string", "norm")
        try:
            norm = parse_norm(doc["norm"])
        except ValueError as exc:
            raise InstanceParseError(str(exc), "norm") from None

    if kind == "loadbal":
        sizes = _list(doc.get("sizes"), "sizes")
        _expect(len(sizes) > 0, "need at least one machine", "sizes")
        rows = []
        for i, row in enumerate(sizes):
            row = _list(row, f"sizes[{i}]")
            rows.append([_atoms(x, f"sizes[{i}][{j}]") for j, x in enumerate(row)])
        _expect(len(rows[0]) > 0, "need at least one job", "sizes[0]")
        for i, row in enumerate(rows):
            _expect(len(row) == len(rows[0]), "every machine needs every job", f"sizes[{i}]")
        return InstanceFile(kind, LoadBalInstance(rows), norm)

    if kind == "tree":
        n = _int(doc.get("vertices"), "vertices", 2)
        edges, dist = [], []
        for k, e in enumerate(_list(doc.get("edges"), "edges")):
            p = f"edges[{k}]"
            _expect(isinstance(e, dict), "edge must be an object", p)
            u = _int(e.get("u"), f"{p}.u", 0)
            v = _int(e.get("v"), f"{p}.v", 0)
            _expect(u < n and v < n, "endpoint out of range", p)
            _expect(u != v, "self-loops are not allowed", p)
            edges.append((u, v))
            dist.append(_atoms(e.get("weight"), f"{p}.weight"))
        try:
            inst = TreeInstance(n, edges, dist)
        except ValueError as exc:
            raise InstanceParseError(str(exc), "edges") from None
        return InstanceFile(kind, inst, norm)

    M = _matroid(doc.get("matroid"), "matroid")
    weights = _list(doc.get("weights"), "weights")
    _expect(len(weights) == len(M.ground), f"expected {len(M.ground)} weight lists", "weights")
    by_label = {k: _atoms(w, f"weights[{k}]") for k, w in enumerate(weights)}
    try:
        inst = BasisInstance(M, [by_label[e] for e in M.ground])
    except ValueError as exc:
        raise InstanceParseError(str(exc), "matroid") from None
    return InstanceFile(kind, inst, norm)


def loads(text: str) -> InstanceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"invalid JSON ({exc.msg})", f"line {exc.lineno} column {exc.colno}") from None
    return parse_instance(doc)


def load(path: str | Path) -> InstanceFile:
    try:
        return loads(Path(path).read_text(encoding="utf-8"))
    except InstanceParseError as exc:
        raise InstanceParseError(str(exc), str(path)) from None


# -------------------------------------------------------------------------
# serialization


def _atom_list(x: DiscreteRV) -> list:
    return [[float(v), float(p)] for v, p in x.atoms()]


def _matroid_doc(M: Matroid) -> dict:
    if isinstance(M, UniformMatroid):
        _check_labels(M)
        return {"type": "uniform", "elements": len(M.ground), "rank": M.k}
    if isinstance(M, PartitionMatroid):
        _check_labels(M)
        return {"type": "partition", "parts": [list(p) for p in M.parts],
                "capacities": list(M.capacities)}
    if isinstance(M, GraphicMatroid):
        _check_labels(M)
        return {"type": "graphic", "vertices": len(M.vertices),
                "edges": [[u, v] for _, u, v in M.edges]}
    raise TypeError(f"cannot serialize matroid of type {type(M).__name__}")


def _check_labels(M: Matroid):
    if sorted(M.ground) != list(range(len(M.ground))):
        raise TypeError("only matroids labelled 0..N-1 can be serialized")


def to_document(inst, norm: Norm | None = None) -> dict:
    if isinstance(inst, InstanceFile):
        inst, norm = inst.instance, inst.norm if norm is None else norm
    doc: dict = {"schema_version": SCHEMA_VERSION}
    if isinstance(inst, LoadBalInstance):
        doc["kind"] = "loadbal"
        doc["sizes"] = [[_atom_list(x) for x in row] for row in inst.dist]
    elif isinstance(inst, TreeInstance):
        doc["kind"] = "tree"
        doc["vertices"] = inst.n_vertices
        doc["edges"] = [{"u": u, "v": v, "weight": _atom_list(x)}
                        for (u, v), x in zip(inst.edges, inst.dist)]
    elif isinstance(inst, BasisInstance):
        doc["kind"] = "matroid"
        doc["matroid"] = _matroid_doc(inst.matroid)
        by_label = dict(zip(inst.matroid.ground, inst.dist))
        doc["weights"] = [_atom_list(by_label[k]) for k in range(len(inst.dist))]
    else:
        raise TypeError(f"unsupported instance type {type(inst).__name__}")
    if norm is not None:
        doc["norm"] = norm.spec()
    return doc


def dumps(inst, norm: Norm | None = None) -> str:
    return json.dumps(to_document(inst, norm), sort_keys=True, indent=1)


def same_instance(a, b) -> bool:
    """Structural equality of two instances (distributions compared exactly)."""
    if type(a) is not type(b):
        return False
    return to_document(a) == to_document(b)


# -------------------------------------------------------------------------
# random generators


def random_rv(rng: np.random.Generator, max_atoms: int = 3, lo: float = 0.0, hi: float = 4.0,
              grid: float | None = 0.5) -> DiscreteRV:
    """Random discrete RV with 1..max_atoms atoms in ``[lo, hi]`` (on a grid when given)."""
    k = int(rng.integers(1, max_atoms + 1))
    if grid:
        pool = np.arange(lo, hi + grid / 2, grid)
        k = min(k, pool.size)
        vals = rng.choice(pool, size=k, replace=False)
    else:
        vals = rng.uniform(lo, hi, size=k)
    probs = rng.dirichlet(np.ones(k))
    return DiscreteRV(vals, probs)


def random_geometric_rv(rng: np.random.Generator, max_atoms: int = 6) -> DiscreteRV:
    """Random RV supported on powers of two (0 allowed)."""
    k = int(rng.integers(1, max_atoms + 1))
    exps = rng.choice(np.arange(-3, 5), size=k, replace=False)
    vals = np.ldexp(1.0, exps)
    if rng.random() < 0.3:
        vals[0] = 0.0
    return DiscreteRV(vals, rng.dirichlet(np.ones(k)))


def random_bernoulli(rng: np.random.Generator, sizes=(0.5, 1.0, 2.0, 3.0)) -> DiscreteRV:
    s = float(rng.choice(sizes))
    if rng.random() < 0.1:
        return DiscreteRV.point(s)
    p = float(rng.uniform(0.1, 0.9))
    return DiscreteRV([0.0, s], [1.0 - p, p])


def random_product_vector(rng: np.random.Generator, max_m: int = 6, max_atoms: int = 3) -> ProductVector:
    m = int(rng.integers(1, max_m + 1))
    return ProductVector([random_rv(rng, max_atoms) for _ in range(m)])


def random_loadbal(rng: np.random.Generator, max_m: int = 3, max_n: int = 4, max_atoms: int = 2,
                   bernoulli: bool = False, exact_atoms: bool = False) -> LoadBalInstance:
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(1, max_n + 1))

    def job():
        if bernoulli:
            return random_bernoulli(rng)
        if exact_atoms:
            vals = rng.choice(np.arange(0, 8.5, 0.5), size=max_atoms, replace=False)
            return DiscreteRV(vals, rng.dirichlet(np.ones(max_atoms)))
        return random_rv(rng, max_atoms)

    return LoadBalInstance([[job() for _ in range(n)] for _ in range(m)])


def random_tree(rng: np.random.Generator, max_vertices: int = 5, max_edges: int = 8,
                max_atoms: int = 3, deterministic: bool = False, exact_size: bool = False) -> TreeInstance:
    """Random connected multigraph: a random spanning tree plus extra random edges.

    With ``exact_size`` the graph has exactly ``max_vertices`` vertices and
    ``max(max_edges, max_vertices - 1)`` edges.
    """
    n = max_vertices if exact_size else int(rng.integers(2, max_vertices + 1))
    order = rng.permutation(n)
    edges = [(int(order[k]), int(order[rng.integers(0, k)])) for k in range(1, n)]
    room = max(max_edges - (n - 1), 0)
    extra = room if exact_size else int(rng.integers(0, room + 1))
    for _ in range(extra):
        u, v = rng.choice(n, size=2, replace=False)
        edges.append((int(u), int(v)))
    if deterministic:
        dist = [DiscreteRV.point(float(rng.integers(1, 9)) / 2) for _ in edges]
    else:
        dist = [random_rv(rng, max_atoms) for _ in edges]
    return TreeInstance(n, edges, dist)


def random_basis_point(rng: np.random.Generator, M: Matroid, n_bases: int = 3) -> np.ndarray:
    """Convex combination of a few random bases (greedy under random costs)."""
    index = {e: k for k, e in enumerate(M.ground)}
    z = np.zeros(len(M.ground))
    weights = rng.dirichlet(np.ones(n_bases))
    for w in weights:
        basis = M.greedy_min_basis(dict(zip(M.ground, rng.random(len(M.ground)))))
        z[[index[e] for e in basis]] += w
    return z


def random_budgeted_lp(rng: np.random.Generator, max_ground: int = 10, max_rows: int = 4) -> BudgetedMatroidLP:
    """Random partition or graphic instance whose point satisfies its budget rows."""
    if rng.random() < 0.5:
        n_parts = int(rng.integers(1, 4))
        sizes = rng.integers(1, max(2, max_ground // n_parts) + 1, size=n_parts)
        parts, e = [], 0
        for s in sizes:
            parts.append(tuple(range(e, e + int(s))))
            e += int(s)
        caps = tuple(int(rng.integers(1, len(p) + 1)) for p in parts)
        M: Matroid = PartitionMatroid(tuple(parts), caps)
    else:
        n = int(rng.integers(2, 6))
        order = rng.permutation(n)
        pairs = [(int(order[k]), int(order[rng.integers(0, k)])) for k in range(1, n)]
        while len(pairs) < max_ground and rng.random() < 0.8:
            u, v = rng.choice(n, size=2, replace=False)
            pairs.append((int(u), int(v)))
        M = GraphicMatroid.from_edge_list(n, pairs)
    N = len(M.ground)
    z = random_basis_point(rng, M)
    k = int(rng.integers(1, max_rows + 1))
    A = rng.random((k, N)) * (rng.random((k, N)) < 0.7)
    b = A @ z
    c = rng.random(N)
    nu = float(A.sum(axis=0).max(initial=0.0))
    return BudgetedMatroidLP(M, A, b, c, z, nu)
