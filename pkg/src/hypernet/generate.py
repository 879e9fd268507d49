"""Random valid hypernetworks for property tests and acceptance sweeps."""

from __future__ import annotations

import random

from .model import Hyperedge, Hypernetwork, Vertex

__all__ = ["random_hypernetwork"]


def random_hypernetwork(rng: random.Random | int | None = None, max_vertices: int = 5, max_edges: int = 7,
                        max_order: int = 2, max_vtypes: int = 2, max_etypes: int = 3,
                        min_vertices: int = 1) -> Hypernetwork:
    """Sample a hypernetwork satisfying both typing axioms.

    Each edge type fixes its order together with source and target vertex
    types; each vertex type fixes how many in-edges of each edge type its
    members receive.  Sources are drawn uniformly from vertices of the
    required type, so repeated sources and self-loops occur naturally.
    """
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    n = rng.randint(min_vertices, max_vertices)
    n_vt = rng.randint(1, min(max_vtypes, n))
    vtypes = [f"T{i}" for i in range(n_vt)]
    # every type gets at least one member
    assign = vtypes + [rng.choice(vtypes) for _ in range(n - n_vt)]
    rng.shuffle(assign)
    verts = [Vertex(f"u{i}", t) for i, t in enumerate(assign)]
    members = {t: [v.id for v in verts if v.vtype == t] for t in vtypes}

    etypes = []
    for j in range(rng.randint(1, max_etypes)):
        order = rng.randint(1, max_order)
        etypes.append((f"e{j}", order, tuple(rng.choice(vtypes) for _ in range(order)), rng.choice(vtypes)))

    counts: dict[tuple[str, str], int] = {}
    budget = max_edges
    for et, _, _, tgt in rng.sample(etypes, len(etypes)):
        per_vertex = len(members[tgt])
        c = rng.randint(0, 2)
        while c and c * per_vertex > budget:
            c -= 1
        counts[(et, tgt)] = c
        budget -= c * per_vertex

    edges = []
    for et, order, src_types, tgt in etypes:
        for v in members[tgt]:
            for _ in range(counts[(et, tgt)]):
                srcs = tuple(rng.choice(members[t]) for t in src_types)
                edges.append(Hyperedge(f"h{len(edges)}", et, srcs, v))
    return Hypernetwork(tuple(verts), tuple(edges), "random")
