"""Hypergraph fibrations and quotients by balanced partitions, with the copy map ``R_phi``."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .admissible import AdmissibleSystem, BuiltinResponse, PolynomialResponse, SchemaError
from .model import Hyperedge, Hypernetwork, HypernetworkError, Vertex
from .partition import Partition, PartitionError, is_balanced

__all__ = [
    "FibrationMap",
    "FibrationReport",
    "ConditionResult",
    "QuotientResult",
    "check_fibration",
    "quotient",
    "r_phi",
    "apply_r_phi",
    "check_semiconjugacy",
    "semiconjugacy_error",
    "inclusion_map",
    "identity_map",
    "parse_map",
    "format_map",
    "CONDITIONS",
]

CONDITIONS = {
    "1": "vertices map to vertices",
    "2": "hyperedges map to hyperedges",
    "3": "vertex and hyperedge types preserved",
    "4": "ordered sources preserved",
    "5": "targets preserved",
    "6": "in-edge sets map bijectively",
}


@dataclass(frozen=True)
class FibrationMap:
    vmap: Mapping[str, str]
    hmap: Mapping[str, str]

    def __call__(self, x: str) -> str:
        return self.vmap[x] if x in self.vmap else self.hmap[x]

    def is_surjective(self, target: Hypernetwork) -> bool:
        return set(self.vmap.values()) == set(target.vertex) and set(self.hmap.values()) == set(target.edge)

    def is_injective(self) -> bool:
        return (len(set(self.vmap.values())) == len(self.vmap)
                and len(set(self.hmap.values())) == len(self.hmap))


@dataclass(frozen=True)
class ConditionResult:
    condition: str
    ok: bool
    offending: tuple[str, ...] = ()


@dataclass(frozen=True)
class FibrationReport:
    conditions: tuple[ConditionResult, ...]

    def __bool__(self):
        return all(c.ok for c in self.conditions)

    @property
    def failed(self) -> list[str]:
        return [c.condition for c in self.conditions if not c.ok]

    def lines(self) -> list[str]:
        out = []
        for c in self.conditions:
            status = "pass" if c.ok else "FAIL"
            tail = f" [{', '.join(c.offending)}]" if c.offending else ""
            out.append(f"condition {c.condition} ({CONDITIONS[c.condition]}): {status}{tail}")
        return out


def check_fibration(net: Hypernetwork, target: Hypernetwork, phi: FibrationMap) -> FibrationReport:
    """Check the six fibration conditions; each result lists offending ids."""
    bad: dict[str, list[str]] = {c: [] for c in CONDITIONS}
    for v in net.vertex_ids:
        if phi.vmap.get(v) not in target.vertex:
            bad["1"].append(v)
        elif net.vtype(v) != target.vtype(phi.vmap[v]):
            bad["3"].append(v)
    for h in sorted(net.hyperedges, key=lambda h: h.id):
        image = phi.hmap.get(h.id)
        if image not in target.edge:
            bad["2"].append(h.id)
            continue
        h2 = target.edge[image]
        if h.etype != h2.etype:
            bad["3"].append(h.id)
        if tuple(phi.vmap.get(u) for u in h.sources) != h2.sources:
            bad["4"].append(h.id)
        if phi.vmap.get(h.target) != h2.target:
            bad["5"].append(h.id)
    for v in net.vertex_ids:
        if v not in phi.vmap or phi.vmap[v] not in target.vertex:
            continue
        images = [phi.hmap.get(h.id) for h in net.in_edges(v)]
        want = Counter(h.id for h in target.in_edges(phi.vmap[v]))
        if Counter(images) != want:
            bad["6"].append(v)
    return FibrationReport(tuple(ConditionResult(c, not ids, tuple(ids)) for c, ids in bad.items()))


def identity_map(net: Hypernetwork) -> FibrationMap:
    return FibrationMap({v: v for v in net.vertex}, {h: h for h in net.edge})


def inclusion_map(sub: Hypernetwork) -> FibrationMap:
    """Inclusion of a sub-hypernetwork into its parent (ids are shared)."""
    return identity_map(sub)


# -- quotients ------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientResult:
    quotient: Hypernetwork
    phi: FibrationMap
    representatives: tuple[str, ...]


def quotient(net: Hypernetwork, p: Partition, name: str | None = None) -> QuotientResult:
    """Collapse each class of a balanced partition to its smallest vertex.

    The quotient keeps the in-edges of every representative, with sources
    replaced by their class representatives; quotient vertex and hyperedge
    ids are those of the representatives and their in-edges.  Other vertices'
    in-edges map through the bucket matching produced by :func:`is_balanced`.
    """
    p.check_refines(net)
    res = is_balanced(net, p)
    if not res:
        mm = res.mismatch
        raise PartitionError(f"partition is not balanced: vertices {mm.vertices[0]} and {mm.vertices[1]} "
                             f"differ on edge type {mm.etype} signature {mm.signature} ({mm.counts[0]} vs "
                             f"{mm.counts[1]})")
    reps = tuple(c[0] for c in p.classes)
    rep_of = {v: c[0] for c in p.classes for v in c}
    verts = [Vertex(r, net.vtype(r), net.dim(r)) for r in reps]
    edges = [Hyperedge(h.id, h.etype, tuple(rep_of[u] for u in h.sources), r)
             for r in reps for h in net.in_edges(r)]
    q = Hypernetwork(tuple(verts), tuple(edges), name or f"{net.name}_quotient")
    hmap = {}
    for v in net.vertex_ids:
        hmap.update(res.bijections[v])
    return QuotientResult(q, FibrationMap(dict(rep_of), hmap), reps)


# -- R_phi ------------------------------------------------------------------------------


def r_phi(net: Hypernetwork, target: Hypernetwork, phi: FibrationMap) -> np.ndarray:
    """0/1 matrix of ``R_phi``: states of ``target`` -> states of ``net``, copying block ``phi(v)`` into ``v``."""
    R = np.zeros((net.state_dim, target.state_dim))
    toff = target.offsets
    for v, sl in net.offsets.items():
        src = toff[phi.vmap[v]]
        if src.stop - src.start != sl.stop - sl.start:
            raise HypernetworkError(f"vertex {v} and its image {phi.vmap[v]} have different dims")
        for i in range(sl.stop - sl.start):
            R[sl.start + i, src.start + i] = 1.0
    return R


def apply_r_phi(net: Hypernetwork, target: Hypernetwork, phi: FibrationMap, y):
    """``R_phi(y)`` by block copying; keeps exact entries exact."""
    toff = target.offsets
    y = list(y)
    out = []
    for v in net.vertex_ids:
        sl = toff[phi.vmap[v]]
        out.extend(y[sl])
    return out


def _compatible(a, b) -> bool:
    if a is b:
        return True
    if a.schema != b.schema:
        return False
    if isinstance(a, PolynomialResponse) and isinstance(b, PolynomialResponse):
        return a.components == b.components
    if isinstance(a, BuiltinResponse) and isinstance(b, BuiltinResponse):
        return a.name == b.name
    return False


def semiconjugacy_error(system: AdmissibleSystem, system_q: AdmissibleSystem, phi: FibrationMap,
                        points: Iterable, lam=0):
    """``max ||R_phi f'(y) - f(R_phi y)||_inf`` over ``points`` (states of the target)."""
    net, target = system.net, system_q.net
    for vt in target.vertex_types:
        if vt not in system.library or not _compatible(system.library[vt], system_q.library[vt]):
            raise SchemaError(f"response libraries disagree on vertex type {vt}")
    worst = 0
    for y in points:
        lhs = apply_r_phi(net, target, phi, system_q.eval(list(y), lam))
        rhs = system.eval(apply_r_phi(net, target, phi, y), lam)
        worst = max([worst] + [abs(a - b) for a, b in zip(lhs, rhs)])
    return worst


def check_semiconjugacy(system: AdmissibleSystem, system_q: AdmissibleSystem, phi: FibrationMap,
                        points: Iterable, tol: float = 1e-12, lam=0) -> bool:
    return semiconjugacy_error(system, system_q, phi, points, lam) <= tol


# -- map files --------------------------------------------------------------------------


def parse_map(text: str) -> FibrationMap:
    """Lines ``v <id> -> <id>`` and ``h <id> -> <id>``; ``#`` starts a comment."""
    vmap: dict[str, str] = {}
    hmap: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 4 or tok[0] not in ("v", "h") or tok[2] != "->":
            raise HypernetworkError(f"line {lineno}: expected 'v <id> -> <id>' or 'h <id> -> <id>'")
        table = vmap if tok[0] == "v" else hmap
        if tok[1] in table:
            raise HypernetworkError(f"line {lineno}: {tok[1]} mapped twice")
        table[tok[1]] = tok[3]
    return FibrationMap(vmap, hmap)


def format_map(phi: FibrationMap) -> str:
    lines = [f"v {a} -> {b}" for a, b in sorted(phi.vmap.items())]
    lines += [f"h {a} -> {b}" for a, b in sorted(phi.hmap.items())]
    return "\n".join(lines) + "\n"
