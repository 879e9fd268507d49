"""Hypernetwork data model with structural validation and the ``.hn`` text format.

A hypernetwork is a set of typed vertices plus typed hyperedges, each with an
ordered list of source vertices and a single target vertex.  Self-influence is
never implicit: it has to be written down as an order-1 self-loop.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

__all__ = [
    "HypernetworkError",
    "ParseError",
    "Vertex",
    "Hyperedge",
    "Hypernetwork",
    "Violation",
    "parse",
    "serialize",
    "load",
    "dump",
    "validate",
    "sub_hypernetwork",
    "expand_undirected",
]

_ID_RE = re.compile(r"^\S+$")


class HypernetworkError(ValueError):
    """Structural problem with a hypernetwork (dangling ids, duplicates, axioms)."""


class ParseError(HypernetworkError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _check_id(kind: str, value: str) -> None:
    if not isinstance(value, str) or not value or not _ID_RE.match(value):
        raise HypernetworkError(f"invalid {kind} {value!r}: must be non-empty without whitespace")


@dataclass(frozen=True)
class Vertex:
    id: str
    vtype: str
    dim: int = 1

    def __post_init__(self):
        _check_id("vertex id", self.id)
        _check_id("vertex type", self.vtype)
        if not isinstance(self.dim, int) or self.dim < 1:
            raise HypernetworkError(f"vertex {self.id}: dim must be a positive integer")


@dataclass(frozen=True)
class Hyperedge:
    id: str
    etype: str
    sources: tuple[str, ...]
    target: str

    def __post_init__(self):
        _check_id("hyperedge id", self.id)
        _check_id("edge type", self.etype)
        object.__setattr__(self, "sources", tuple(self.sources))
        if not self.sources:
            raise HypernetworkError(f"hyperedge {self.id} has no sources")

    @property
    def order(self) -> int:
        return len(self.sources)


@dataclass(frozen=True)
class Violation:
    """One failed axiom.  ``condition`` is ``"1"``, ``"2"`` or ``"dim"``."""

    condition: str
    ids: tuple[str, ...]
    message: str

    def __str__(self):
        return f"condition {self.condition}: {self.message} [{', '.join(self.ids)}]"


@dataclass(frozen=True)
class Hypernetwork:
    """Immutable hypernetwork ``(V, H, s, t)`` with vertex and hyperedge types.

    Construction checks referential integrity only (unique ids, no dangling
    references).  The typing axioms are checked by :func:`validate`, so that
    invalid objects can still be built and reported on.
    """

    vertices: tuple[Vertex, ...] = ()
    hyperedges: tuple[Hyperedge, ...] = ()
    name: str = "N"

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "hyperedges", tuple(self.hyperedges))
        seen: set[str] = set()
        for v in self.vertices:
            if v.id in seen:
                raise HypernetworkError(f"duplicate vertex id {v.id!r}")
            seen.add(v.id)
        seen_h: set[str] = set()
        for h in self.hyperedges:
            if h.id in seen_h:
                raise HypernetworkError(f"duplicate hyperedge id {h.id!r}")
            seen_h.add(h.id)
            for u in (*h.sources, h.target):
                if u not in seen:
                    raise HypernetworkError(f"hyperedge {h.id} references unknown vertex {u!r}")

    # -- lookups -------------------------------------------------------------

    @cached_property
    def vertex(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge(self) -> dict[str, Hyperedge]:
        return {h.id: h for h in self.hyperedges}

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        """Vertex ids in the canonical (lexicographic) order."""
        return tuple(sorted(self.vertex))

    @cached_property
    def _in_edges(self) -> dict[str, tuple[Hyperedge, ...]]:
        acc: dict[str, list[Hyperedge]] = {v: [] for v in self.vertex}
        for h in self.hyperedges:
            acc[h.target].append(h)
        return {v: tuple(sorted(hs, key=lambda h: (h.etype, h.id))) for v, hs in acc.items()}

    def in_edges(self, v: str) -> tuple[Hyperedge, ...]:
        """Hyperedges targeting ``v`` in canonical (edge type, id) order."""
        return self._in_edges[v]

    def vtype(self, v: str) -> str:
        return self.vertex[v].vtype

    def dim(self, v: str) -> int:
        return self.vertex[v].dim

    @property
    def order(self) -> int:
        return max((h.order for h in self.hyperedges), default=0)

    @cached_property
    def vertex_types(self) -> dict[str, tuple[str, ...]]:
        """Vertex type -> sorted member ids."""
        acc: dict[str, list[str]] = defaultdict(list)
        for v in self.vertex_ids:
            acc[self.vtype(v)].append(v)
        return {t: tuple(vs) for t, vs in sorted(acc.items())}

    @cached_property
    def edge_types(self) -> dict[str, tuple[str, ...]]:
        acc: dict[str, list[str]] = defaultdict(list)
        for h in sorted(self.hyperedges, key=lambda h: h.id):
            acc[h.etype].append(h.id)
        return {t: tuple(hs) for t, hs in sorted(acc.items())}

    @cached_property
    def offsets(self) -> dict[str, slice]:
        """Slice of each vertex block in the flat state vector."""
        out, pos = {}, 0
        for v in self.vertex_ids:
            d = self.dim(v)
            out[v] = slice(pos, pos + d)
            pos += d
        return out

    @property
    def state_dim(self) -> int:
        return sum(v.dim for v in self.vertices)

    def with_name(self, name: str) -> Hypernetwork:
        return Hypernetwork(self.vertices, self.hyperedges, name)

    def __str__(self):
        return serialize(self)


# -- validation -------------------------------------------------------------


def validate(net: Hypernetwork) -> list[Violation]:
    """Check the typing axioms; an empty list means the hypernetwork is valid."""
    out: list[Violation] = []

    by_etype: dict[str, list[Hyperedge]] = defaultdict(list)
    for h in sorted(net.hyperedges, key=lambda h: h.id):
        by_etype[h.etype].append(h)
    for et, hs in sorted(by_etype.items()):
        ref = hs[0]
        ref_src = tuple(net.vtype(u) for u in ref.sources)
        for h in hs[1:]:
            if h.order != ref.order:
                out.append(Violation("1", (ref.id, h.id),
                                     f"edge type {et}: orders {ref.order} and {h.order} differ"))
                continue
            src = tuple(net.vtype(u) for u in h.sources)
            if src != ref_src:
                out.append(Violation("1", (ref.id, h.id),
                                     f"edge type {et}: source vertex types {ref_src} and {src} differ"))
            if net.vtype(h.target) != net.vtype(ref.target):
                out.append(Violation("1", (ref.id, h.id),
                                     f"edge type {et}: target vertex types "
                                     f"{net.vtype(ref.target)} and {net.vtype(h.target)} differ"))

    for vt, members in net.vertex_types.items():
        ref = members[0]
        ref_in = Counter(h.etype for h in net.in_edges(ref))
        for v in members[1:]:
            cur = Counter(h.etype for h in net.in_edges(v))
            if cur != ref_in:
                out.append(Violation("2", (ref, v),
                                     f"vertex type {vt}: in-edge types {dict(sorted(ref_in.items()))} "
                                     f"and {dict(sorted(cur.items()))} differ"))
            if net.dim(v) != net.dim(ref):
                out.append(Violation("dim", (ref, v),
                                     f"vertex type {vt}: dims {net.dim(ref)} and {net.dim(v)} differ"))
    return out


def require_valid(net: Hypernetwork) -> Hypernetwork:
    problems = validate(net)
    if problems:
        raise HypernetworkError("; ".join(str(p) for p in problems))
    return net


# -- structural operations --------------------------------------------------


def sub_hypernetwork(net: Hypernetwork, keep: Iterable[str]) -> Hypernetwork:
    """Restrict to ``keep`` and every hyperedge targeting it.

    Raises if some such hyperedge has a source outside ``keep``.
    """
    keep = set(keep)
    unknown = keep - set(net.vertex)
    if unknown:
        raise HypernetworkError(f"unknown vertices {sorted(unknown)}")
    edges = []
    for h in sorted(net.hyperedges, key=lambda h: h.id):
        if h.target not in keep:
            continue
        escaped = [u for u in h.sources if u not in keep]
        if escaped:
            raise HypernetworkError(
                f"hyperedge {h.id} targets {h.target} but has sources {escaped} outside the vertex subset")
        edges.append(h)
    verts = [v for v in net.vertices if v.id in keep]
    return Hypernetwork(tuple(verts), tuple(edges), net.name)


def expand_undirected(vertices: Sequence[str], etype: str, prefix: str | None = None) -> list[Hyperedge]:
    """Directed hyperedges standing in for one undirected hyperedge.

    Every vertex of the list becomes a target of one hyperedge per ordered
    (m-1)-tuple drawn (with repetition) from the full list: m**m hyperedges.
    """
    m = len(vertices)
    if m < 2:
        raise HypernetworkError("an undirected hyperedge needs at least 2 vertices")
    prefix = prefix or etype
    out = []
    for t in vertices:
        for n, srcs in enumerate(itertools.product(vertices, repeat=m - 1)):
            out.append(Hyperedge(f"{prefix}_{t}_{n}", etype, tuple(srcs), t))
    return out


# -- text format ------------------------------------------------------------


def parse(text: str, check: bool = True) -> Hypernetwork:
    """Parse the line-oriented ``.hn`` format; with ``check`` also enforce the typing axioms."""
    name = "N"
    verts: list[Vertex] = []
    edges: list[Hyperedge] = []
    vlines: dict[str, int] = {}
    elines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        try:
            if kw == "hypernet":
                if len(tok) != 2:
                    raise ParseError("expected 'hypernet <name>'", lineno)
                name = tok[1]
            elif kw == "vertex":
                if len(tok) not in (4, 6) or tok[2] != "type" or (len(tok) == 6 and tok[4] != "dim"):
                    raise ParseError("expected 'vertex <id> type <vtype> [dim <n>]'", lineno)
                if tok[1] in vlines:
                    raise ParseError(f"duplicate vertex id {tok[1]!r} (first on line {vlines[tok[1]]})", lineno)
                dim = 1
                if len(tok) == 6:
                    if not tok[5].isdigit() or int(tok[5]) < 1:
                        raise ParseError(f"bad dim {tok[5]!r}", lineno)
                    dim = int(tok[5])
                vlines[tok[1]] = lineno
                verts.append(Vertex(tok[1], tok[3], dim))
            elif kw == "edge":
                if (len(tok) < 8 or tok[2] != "type" or tok[4] != "target" or tok[6] != "sources"):
                    raise ParseError("expected 'edge <id> type <etype> target <vid> sources <vid> ...'", lineno)
                if tok[1] in elines:
                    raise ParseError(f"duplicate hyperedge id {tok[1]!r} (first on line {elines[tok[1]]})", lineno)
                elines[tok[1]] = lineno
                edges.append(Hyperedge(tok[1], tok[3], tuple(tok[7:]), tok[5]))
            else:
                raise ParseError(f"unknown keyword {kw!r}", lineno)
        except ParseError:
            raise
        except HypernetworkError as exc:
            raise ParseError(str(exc), lineno) from None
    for h in edges:
        for u in (*h.sources, h.target):
            if u not in vlines:
                raise ParseError(f"hyperedge {h.id} references unknown vertex {u!r}", elines[h.id])
    net = Hypernetwork(tuple(verts), tuple(edges), name)
    if check:
        require_valid(net)
    return net


def serialize(net: Hypernetwork) -> str:
    lines = [f"hypernet {net.name}"]
    for v in sorted(net.vertices, key=lambda v: v.id):
        dim = f" dim {v.dim}" if v.dim != 1 else ""
        lines.append(f"vertex {v.id} type {v.vtype}{dim}")
    for h in sorted(net.hyperedges, key=lambda h: h.id):
        lines.append(f"edge {h.id} type {h.etype} target {h.target} sources {' '.join(h.sources)}")
    return "\n".join(lines) + "\n"


def load(path, check: bool = True) -> Hypernetwork:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), check)


def dump(net: Hypernetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(net))


def build(vertices: Mapping[str, str] | Iterable[tuple], edges: Iterable[tuple], name: str = "N") -> Hypernetwork:
    """Shorthand constructor.

    ``vertices`` maps id -> type (or is a list of ``(id, type[, dim])``);
    ``edges`` is a list of ``(id, etype, target, sources)``.
    """
    if isinstance(vertices, Mapping):
        vs = [Vertex(k, t) for k, t in vertices.items()]
    else:
        vs = [Vertex(*row) for row in vertices]
    hs = [Hyperedge(i, et, tuple(src), tgt) for i, et, tgt, src in edges]
    return Hypernetwork(tuple(vs), tuple(hs), name)
