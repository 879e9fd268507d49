"""Colourings with their signature censuses, and balanced partitions."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .model import Hyperedge, Hypernetwork, HypernetworkError

__all__ = [
    "Partition",
    "PartitionError",
    "Mismatch",
    "BalanceResult",
    "signature",
    "census",
    "is_balanced",
    "is_balanced_oracle",
    "enumerate_balanced",
    "refining_partitions",
    "parse_partition",
    "format_partition",
]

Signature = tuple[int, ...]
# vertex -> {(etype, signature): count}
Census = dict[str, Counter]


class PartitionError(HypernetworkError):
    pass


@dataclass(frozen=True)
class Partition:
    """Ordered list of disjoint classes; class ``i`` carries colour ``i + 1``.

    Use :meth:`canonical` (or :func:`parse_partition`) for the reproducible
    colouring where colours follow the smallest vertex id of each class.
    """

    classes: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        cls = tuple(tuple(sorted(c)) for c in self.classes)
        if any(not c for c in cls):
            raise PartitionError("empty class in partition")
        flat = [v for c in cls for v in c]
        if len(flat) != len(set(flat)):
            dup = sorted(v for v, n in Counter(flat).items() if n > 1)
            raise PartitionError(f"vertices {dup} appear in more than one class")
        object.__setattr__(self, "classes", cls)

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[str]]) -> Partition:
        return cls(tuple(tuple(c) for c in classes))

    @classmethod
    def singletons(cls, net: Hypernetwork) -> Partition:
        return cls(tuple((v,) for v in net.vertex_ids))

    @classmethod
    def by_type(cls, net: Hypernetwork) -> Partition:
        return cls(tuple(net.vertex_types.values())).canonical()

    @classmethod
    def from_colours(cls, colours: dict[str, int]) -> Partition:
        groups: dict[int, list[str]] = defaultdict(list)
        for v, c in colours.items():
            groups[c].append(v)
        return cls(tuple(tuple(groups[c]) for c in sorted(groups)))

    @cached_property
    def colour(self) -> dict[str, int]:
        return {v: i + 1 for i, c in enumerate(self.classes) for v in c}

    @property
    def n_colours(self) -> int:
        return len(self.classes)

    def canonical(self) -> Partition:
        return Partition(tuple(sorted(self.classes, key=lambda c: c[0])))

    def class_of(self, v: str) -> tuple[str, ...]:
        return self.classes[self.colour[v] - 1]

    def representative(self, v: str) -> str:
        return self.class_of(v)[0]

    def check_covers(self, net: Hypernetwork) -> None:
        missing = set(net.vertex) - set(self.colour)
        extra = set(self.colour) - set(net.vertex)
        if missing or extra:
            raise PartitionError(f"partition does not match vertex set: missing {sorted(missing)}, "
                                 f"unknown {sorted(extra)}")

    def refines_types(self, net: Hypernetwork) -> bool:
        return all(len({net.vtype(v) for v in c}) == 1 for c in self.classes)

    def check_refines(self, net: Hypernetwork) -> None:
        self.check_covers(net)
        for c in self.classes:
            types = sorted({net.vtype(v) for v in c})
            if len(types) > 1:
                raise PartitionError(f"class {{{' '.join(c)}}} mixes vertex types {types}")

    def syn_constraints(self) -> list[tuple[str, str]]:
        """Equalities ``x_a = x_b`` cutting out the synchrony subspace."""
        return [(c[0], v) for c in self.classes for v in c[1:]]

    def syn_dim(self, net: Hypernetwork) -> int:
        return sum(net.dim(c[0]) for c in self.classes)

    def __str__(self):
        return format_partition(self)


def parse_partition(text: str, net: Hypernetwork | None = None) -> Partition:
    """``"v0 v1 v2 | w0 w1"`` -> canonical partition.

    With ``net`` given, vertices not mentioned become singleton classes.
    """
    classes = [tuple(chunk.split()) for chunk in text.split("|")]
    classes = [c for c in classes if c]
    if not classes and net is None:
        raise PartitionError("empty partition spec")
    if net is not None:
        named = {v for c in classes for v in c}
        unknown = named - set(net.vertex)
        if unknown:
            raise PartitionError(f"unknown vertices {sorted(unknown)} in partition")
        classes += [(v,) for v in net.vertex_ids if v not in named]
    return Partition(tuple(classes)).canonical()


def format_partition(p: Partition) -> str:
    return " | ".join(" ".join(c) for c in p.classes)


# -- signatures and census ----------------------------------------------------


def signature(h: Hyperedge, p: Partition) -> Signature:
    try:
        return tuple(p.colour[u] for u in h.sources)
    except KeyError as exc:
        raise PartitionError(f"vertex {exc.args[0]!r} not covered by the partition") from None


def census(net: Hypernetwork, p: Partition) -> Census:
    """Per vertex, how many in-hyperedges of each type carry each signature."""
    p.check_refines(net)
    return {v: Counter((h.etype, signature(h, p)) for h in net.in_edges(v)) for v in net.vertex_ids}


@dataclass(frozen=True)
class Mismatch:
    """Where two vertices of one class disagree: ``count_a`` vs ``count_b``."""

    class_index: int
    vertices: tuple[str, str]
    etype: str | None
    signature: Signature | None
    counts: tuple[int, int]
    reason: str = "census"


@dataclass(frozen=True)
class BalanceResult:
    balanced: bool
    # member v -> {h in t^-1(v): matched hyperedge targeting the class representative}
    bijections: dict[str, dict[str, str]] = field(default_factory=dict)
    mismatch: Mismatch | None = None

    def __bool__(self):
        return self.balanced

    def bijection(self, v1: str, v2: str) -> dict[str, str]:
        """Matching ``t^-1(v1) -> t^-1(v2)`` for two vertices in one class."""
        to_rep = self.bijections[v1]
        from_rep = {b: a for a, b in self.bijections[v2].items()}
        return {h: from_rep[r] for h, r in to_rep.items()}


def is_balanced(net: Hypernetwork, p: Partition) -> BalanceResult:
    """Balanced check by comparing signature censuses inside each class.

    On success the certificate holds, for every vertex, a bijection onto the
    in-edges of its class representative obtained by pairing hyperedges inside
    equal (edge type, signature) buckets in id order.
    """
    p.check_covers(net)
    for ci, c in enumerate(p.classes):
        types = {net.vtype(v) for v in c}
        if len(types) > 1:
            a = next(v for v in c if net.vtype(v) != net.vtype(c[0]))
            return BalanceResult(False, mismatch=Mismatch(ci, (c[0], a), None, None, (0, 0), "vertex type"))

    buckets: dict[str, dict[tuple, list[str]]] = {}
    for v in net.vertex_ids:
        b: dict[tuple, list[str]] = defaultdict(list)
        for h in sorted(net.in_edges(v), key=lambda h: h.id):
            b[(h.etype, signature(h, p))].append(h.id)
        buckets[v] = b

    bijections: dict[str, dict[str, str]] = {}
    for ci, c in enumerate(p.classes):
        rep = c[0]
        rb = buckets[rep]
        for v in c:
            vb = buckets[v]
            for key in sorted(set(rb) | set(vb)):
                n_rep, n_v = len(rb.get(key, ())), len(vb.get(key, ()))
                if n_rep != n_v:
                    return BalanceResult(False, mismatch=Mismatch(ci, (rep, v), key[0], key[1], (n_rep, n_v)))
            bijections[v] = {h: r for key in vb for h, r in zip(vb[key], rb[key])}
    return BalanceResult(True, bijections=bijections)


def is_balanced_oracle(net: Hypernetwork, p: Partition) -> bool:
    """Balanced check straight from the definition, by bijection search.

    Exponential in the worst case; meant as an independent cross-check.
    """
    p.check_covers(net)
    colour = p.colour
    for c in p.classes:
        for v1 in c:
            for v2 in c:
                if v1 >= v2:
                    continue
                if net.vtype(v1) != net.vtype(v2):
                    return False
                if _find_bijection(net.in_edges(v1), net.in_edges(v2), colour) is None:
                    return False
    return True


def _compatible(h1: Hyperedge, h2: Hyperedge, colour: dict[str, int]) -> bool:
    if h1.etype != h2.etype or len(h1.sources) != len(h2.sources):
        return False
    return all(colour[a] == colour[b] for a, b in zip(h1.sources, h2.sources))


def _find_bijection(src: Sequence[Hyperedge], dst: Sequence[Hyperedge], colour) -> dict | None:
    if len(src) != len(dst):
        return None
    used = [False] * len(dst)
    assign: dict[str, str] = {}

    def search(i: int) -> bool:
        if i == len(src):
            return True
        for j, h2 in enumerate(dst):
            if not used[j] and _compatible(src[i], h2, colour):
                used[j] = True
                assign[src[i].id] = h2.id
                if search(i + 1):
                    return True
                used[j] = False
                del assign[src[i].id]
        return False

    return dict(assign) if search(0) else None


# -- enumeration -------------------------------------------------------------


def refining_partitions(net: Hypernetwork) -> Iterator[Partition]:
    """All set partitions of ``V`` whose classes respect vertex types."""
    order = net.vertex_ids
    n = len(order)
    labels: list[int] = []
    class_type: list[str] = []

    def rec(i: int):
        if i == n:
            groups: list[list[str]] = [[] for _ in class_type]
            for v, lab in zip(order, labels):
                groups[lab].append(v)
            yield Partition(tuple(tuple(g) for g in groups))
            return
        t = net.vtype(order[i])
        for lab, ct in enumerate(class_type):
            if ct == t:
                labels.append(lab)
                yield from rec(i + 1)
                labels.pop()
        class_type.append(t)
        labels.append(len(class_type) - 1)
        yield from rec(i + 1)
        labels.pop()
        class_type.pop()

    yield from rec(0)


def _sort_key(p: Partition):
    return (len(p.classes), p.classes)


def enumerate_balanced(net: Hypernetwork, max_vertices: int = 12) -> list[Partition]:
    """Every balanced partition refining vertex types, in canonical order.

    Search over restricted-growth labellings; a branch is cut as soon as two
    vertices sharing a label both have fully labelled in-edge sources and
    their censuses differ.
    """
    if len(net.vertex) > max_vertices:
        raise PartitionError(f"{len(net.vertex)} vertices exceeds enumeration bound {max_vertices}")
    order = net.vertex_ids
    pos = {v: i for i, v in enumerate(order)}
    # vertex v is "ready" once every source of its in-edges (and v itself) is labelled
    ready_at = {v: max([pos[v]] + [pos[u] for h in net.in_edges(v) for u in h.sources]) for v in order}
    ready_by_step: dict[int, list[str]] = defaultdict(list)
    for v, i in ready_at.items():
        ready_by_step[i].append(v)

    labels: dict[str, int] = {}
    class_type: list[str] = []
    found: list[Partition] = []

    def local_census(v: str) -> Counter:
        return Counter((h.etype, tuple(labels[u] for u in h.sources)) for h in net.in_edges(v))

    def consistent(step: int) -> bool:
        for v in ready_by_step.get(step, ()):
            cv = local_census(v)
            for u in order:
                if u != v and u in labels and labels[u] == labels[v] and ready_at[u] <= step:
                    if local_census(u) != cv:
                        return False
        return True

    def rec(i: int):
        if i == len(order):
            groups: list[list[str]] = [[] for _ in class_type]
            for v in order:
                groups[labels[v]].append(v)
            found.append(Partition(tuple(tuple(g) for g in groups)).canonical())
            return
        v = order[i]
        t = net.vtype(v)
        options = [lab for lab, ct in enumerate(class_type) if ct == t] + [len(class_type)]
        for lab in options:
            fresh = lab == len(class_type)
            if fresh:
                class_type.append(t)
            labels[v] = lab
            if consistent(i):
                rec(i + 1)
            del labels[v]
            if fresh:
                class_type.pop()

    rec(0)
    return sorted(found, key=_sort_key)
