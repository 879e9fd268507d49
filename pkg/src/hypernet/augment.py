"""Augmented hypernetworks: a core plus two nodes fed by parity-split permutation hyperedges."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import Hyperedge, Hypernetwork, HypernetworkError, Vertex
from .synchrony import Perm

__all__ = ["AugmentationSpec", "augment", "hyperedge_id"]


@dataclass(frozen=True)
class AugmentationSpec:
    core: Hypernetwork
    nodes: tuple[str, ...]
    w_type: str = "w"
    hyper_etype: str = "hyp"
    loop_etype: str = "loop_w"
    w_ids: tuple[str, str] = ("w0", "w1")

    @property
    def k(self) -> int:
        return len(self.nodes) - 1


def hyperedge_id(sigma: Perm) -> str:
    return "h_" + "_".join(map(str, sigma.images))


def augment(core: Hypernetwork | AugmentationSpec, nodes: Sequence[str] | None = None, **kw) -> Hypernetwork:
    """Add ``w0, w1`` (with self-loops) and one order-``k`` hyperedge per ``sigma`` in ``S_{k+1}``.

    ``h_sigma`` has sources ``(v_sigma(1), ..., v_sigma(k))`` and targets
    ``w0`` for even and ``w1`` for odd ``sigma``.  Permutations are taken in
    lexicographic order of their image tuple.
    """
    spec = core if isinstance(core, AugmentationSpec) else AugmentationSpec(core, tuple(nodes or ()), **kw)
    net, vs = spec.core, spec.nodes
    if len(vs) < 3:
        raise HypernetworkError("augmentation needs at least 3 core nodes")
    if len(set(vs)) != len(vs):
        raise HypernetworkError("core nodes must be distinct")
    unknown = [v for v in vs if v not in net.vertex]
    if unknown:
        raise HypernetworkError(f"unknown core nodes {unknown}")
    types = {net.vtype(v) for v in vs}
    if len(types) != 1:
        raise HypernetworkError(f"core nodes have mixed types {sorted(types)}")
    clash = [w for w in spec.w_ids if w in net.vertex]
    if clash:
        raise HypernetworkError(f"vertex ids {clash} already used in the core")
    if spec.w_type in net.vertex_types:
        raise HypernetworkError(f"vertex type {spec.w_type} already used in the core")

    w = spec.w_ids
    verts = list(net.vertices) + [Vertex(w[0], spec.w_type), Vertex(w[1], spec.w_type)]
    edges = list(net.hyperedges)
    edges += [Hyperedge(f"loop_{x}", spec.loop_etype, (x,), x) for x in w]
    for sigma in Perm.all(len(vs)):
        srcs = tuple(vs[sigma(i)] for i in range(1, len(vs)))
        edges.append(Hyperedge(hyperedge_id(sigma), spec.hyper_etype, srcs, w[sigma.sgn]))
    return Hypernetwork(tuple(verts), tuple(edges), f"{net.name}_augmented")
