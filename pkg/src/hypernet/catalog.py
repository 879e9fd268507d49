"""Small reference hypernetworks shared by the tests and scripts.

Core cells are ``v0, v1, v2`` (type ``v``); the added cells are ``w0, w1``
(type ``w``).  Every cell carries an explicit order-1 self-loop.
"""

from __future__ import annotations

from .augment import augment
from .fibration import FibrationMap
from .model import Hyperedge, Hypernetwork, Vertex, build

__all__ = ["running_core", "running", "running_quotient", "running_quotient_map", "fig1_core", "fig1",
           "NETWORKS"]

CORE = ("v0", "v1", "v2")


def _loops(ids, etype):
    return [(f"loop_{v}", etype, v, (v,)) for v in ids]


def running_core() -> Hypernetwork:
    """Three same-type cells; ``a`` (light) and ``b`` (grey) edges give
    ``x0' = G(x0, x0, x0)``, ``x1' = G(x1, x1, x0)``, ``x2' = G(x2, x1, x2)``."""
    edges = _loops(CORE, "loop_v") + [
        ("a_v0", "a", "v0", ("v0",)), ("a_v1", "a", "v1", ("v1",)), ("a_v2", "a", "v2", ("v1",)),
        ("b_v0", "b", "v0", ("v0",)), ("b_v1", "b", "v1", ("v0",)), ("b_v2", "b", "v2", ("v2",)),
    ]
    return build({v: "v" for v in CORE}, edges, "running_core")


def running() -> Hypernetwork:
    return augment(running_core(), CORE).with_name("running")


def fig1_core() -> Hypernetwork:
    """Three disconnected self-looped cells."""
    return build({v: "v" for v in CORE}, _loops(CORE, "loop_v"), "fig1_core")


def fig1() -> Hypernetwork:
    return augment(fig1_core(), CORE).with_name("fig1")


def running_quotient() -> Hypernetwork:
    """Two cells ``v0`` and ``w0`` with all hyperedges self-sourced."""
    verts = [Vertex("v0", "v"), Vertex("w0", "w")]
    edges = [Hyperedge("loop_v0", "loop_v", ("v0",), "v0"), Hyperedge("a_v0", "a", ("v0",), "v0"),
             Hyperedge("b_v0", "b", ("v0",), "v0"), Hyperedge("loop_w0", "loop_w", ("w0",), "w0")]
    edges += [Hyperedge(f"h{i}", "hyp", ("v0", "v0"), "w0") for i in range(3)]
    return Hypernetwork(tuple(verts), tuple(edges), "running_quotient")


def running_quotient_map() -> FibrationMap:
    """A fibration from :func:`running` onto :func:`running_quotient`."""
    net = running()
    vmap = {v: ("v0" if net.vtype(v) == "v" else "w0") for v in net.vertex}
    hmap = {}
    for v in net.vertex_ids:
        n_hyp = 0
        for h in net.in_edges(v):
            if h.etype == "hyp":
                hmap[h.id] = f"h{n_hyp}"
                n_hyp += 1
            else:
                hmap[h.id] = f"{h.id.split('_')[0]}_{vmap[v]}"
    return FibrationMap(vmap, hmap)


NETWORKS = {
    "running": running,
    "running_core": running_core,
    "running_quotient": running_quotient,
    "fig1": fig1,
    "fig1_core": fig1_core,
}
