"""Admissible maps: per-type input schemas and response functions.

Response functions are keyed by vertex type.  A vertex's inputs are its own
state (slots ``Y[c]``) followed by the source blocks of its in-hyperedges,
grouped by edge type and fed in hyperedge-id order (slots
``E[etype][j][pos][comp]``).  Admissibility means the response is invariant
under permuting whole blocks inside one edge-type group, so the feeding
order does not matter.

Polynomial responses are stored as :class:`InvariantPolynomial`, a sum of
block-orbit averages.  This keeps invariance structural and lets evaluation
and variable renaming run without expanding orbits, which get large quickly
(12 blocks of order 3 already give orbits of ~10^5 monomials).
"""

from __future__ import annotations

import itertools
import math
import random
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .model import Hypernetwork, HypernetworkError
from .partition import Partition
from .polynomial import PARAM, Monomial, Polynomial, mono_mul, parse_polynomial

__all__ = [
    "EdgeGroup",
    "InputSchema",
    "InvariantPolynomial",
    "ResponseFunction",
    "PolynomialResponse",
    "BuiltinResponse",
    "AdmissibleSystem",
    "SchemaError",
    "schema_of",
    "symmetrize",
    "random_invariant_polynomial",
    "random_polynomial_library",
    "eval_symbolic_on_syn",
    "self_slot",
    "edge_slot",
    "BUILTINS",
    "builtin_library",
]


class SchemaError(HypernetworkError):
    pass


def self_slot(comp: int = 0) -> str:
    return f"Y[{comp}]"


def edge_slot(etype: str, j: int, pos: int, comp: int = 0) -> str:
    return f"E[{etype}][{j}][{pos}][{comp}]"


_SLOT_RE = re.compile(r"^E\[(?P<et>[^\[\]]+)\]\[(?P<j>\d+)\]\[(?P<pos>\d+)\]\[(?P<comp>\d+)\]$")


@dataclass(frozen=True)
class EdgeGroup:
    etype: str
    count: int
    source_dims: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.source_dims)

    @property
    def block_size(self) -> int:
        return sum(self.source_dims)

    def block_slots(self, j: int) -> tuple[str, ...]:
        return tuple(edge_slot(self.etype, j, pos, comp)
                     for pos, d in enumerate(self.source_dims) for comp in range(d))


@dataclass(frozen=True)
class InputSchema:
    """Shape of a response function's arguments for one vertex type."""

    vtype: str
    dim: int
    groups: tuple[EdgeGroup, ...]

    @cached_property
    def self_slots(self) -> tuple[str, ...]:
        return tuple(self_slot(c) for c in range(self.dim))

    @cached_property
    def slots(self) -> tuple[str, ...]:
        out = list(self.self_slots)
        for g in self.groups:
            for j in range(g.count):
                out.extend(g.block_slots(j))
        return tuple(out)

    @cached_property
    def slot_index(self) -> dict[str, tuple[int, int, int]]:
        """edge slot -> (group index, block index, offset inside block)."""
        out = {}
        for gi, g in enumerate(self.groups):
            for j in range(g.count):
                for k, s in enumerate(g.block_slots(j)):
                    out[s] = (gi, j, k)
        return out

    def group(self, etype: str) -> EdgeGroup:
        for g in self.groups:
            if g.etype == etype:
                return g
        raise SchemaError(f"vertex type {self.vtype} has no in-edges of type {etype}")

    def permutation_count(self) -> int:
        return math.prod(math.factorial(g.count) for g in self.groups)


def schema_of(net: Hypernetwork, v: str) -> InputSchema:
    groups: dict[str, list] = {}
    for h in net.in_edges(v):
        dims = tuple(net.dim(u) for u in h.sources)
        if h.etype in groups and groups[h.etype][1] != dims:
            raise SchemaError(f"in-edges of type {h.etype} at {v} have inconsistent source dims")
        groups.setdefault(h.etype, [0, dims])[0] += 1
    return InputSchema(net.vtype(v), net.dim(v),
                       tuple(EdgeGroup(et, n, dims) for et, (n, dims) in sorted(groups.items())))


def schemas(net: Hypernetwork) -> dict[str, InputSchema]:
    out: dict[str, InputSchema] = {}
    for vt, members in net.vertex_types.items():
        ref = schema_of(net, members[0])
        for v in members[1:]:
            if schema_of(net, v) != ref:
                raise SchemaError(f"vertices {members[0]} and {v} of type {vt} have different input schemas")
        out[vt] = ref
    return out


def input_slots(net: Hypernetwork, v: str) -> dict[str, int]:
    """slot name -> index into the flat state vector, for vertex ``v``."""
    off = net.offsets
    out = {self_slot(c): off[v].start + c for c in range(net.dim(v))}
    counters: dict[str, int] = defaultdict(int)
    for h in net.in_edges(v):
        j = counters[h.etype]
        counters[h.etype] += 1
        for pos, u in enumerate(h.sources):
            for comp in range(net.dim(u)):
                out[edge_slot(h.etype, j, pos, comp)] = off[u].start + comp
    return out


# -- invariant polynomials ------------------------------------------------------

# (monomial in self/parameter slots, per group: sorted tuple of nonzero block patterns)
OrbitKey = tuple[Monomial, tuple[tuple[tuple[int, ...], ...], ...]]


def _inj_sum(n_blocks: int, patterns: Sequence, block_value: Callable[[int, int], Any], one, add, mul):
    """Sum over injective maps ``patterns -> blocks`` of the product of block values.

    Subset DP over blocks; ``block_value(b, i)`` is the contribution of pattern
    ``i`` sitting on block ``b``.
    """
    r = len(patterns)
    if r == 0:
        return one
    full = (1 << r) - 1
    state: dict[int, Any] = {0: one}
    for b in range(n_blocks):
        new = dict(state)
        for mask, acc in state.items():
            for i in range(r):
                bit = 1 << i
                if mask & bit:
                    continue
                # identical patterns: only fill the first free copy, count the rest later
                if i and patterns[i] == patterns[i - 1] and not mask & (bit >> 1):
                    continue
                term = mul(acc, block_value(b, i))
                nm = mask | bit
                new[nm] = add(new[nm], term) if nm in new else term
        state = new
    return state.get(full)


def _multiplicity(patterns: Sequence) -> int:
    out = 1
    for _, grp in itertools.groupby(patterns):
        out *= math.factorial(len(list(grp)))
    return out


class InvariantPolynomial:
    """Block-invariant polynomial over a schema, stored as orbit averages.

    ``terms[key] = c`` stands for ``c`` times the average of the monomial
    ``key`` over all block permutations of the schema.
    """

    __slots__ = ("schema", "terms")

    def __init__(self, schema: InputSchema, terms: Mapping[OrbitKey, object] | None = None):
        self.schema = schema
        clean = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[k] = clean.get(k, 0) + c
        self.terms = {k: c for k, c in sorted(clean.items()) if c}

    # -- construction ---------------------------------------------------------------

    @classmethod
    def from_polynomial(cls, p: Polynomial, schema: InputSchema) -> InvariantPolynomial:
        """Symmetrize ``p``: average over all within-group block permutations."""
        idx = schema.slot_index
        allowed_fixed = set(schema.self_slots) | {PARAM}
        terms: dict[OrbitKey, Fraction] = {}
        for mono, c in p.terms.items():
            fixed = []
            blocks: dict[tuple[int, int], list[int]] = {}
            for v, e in mono:
                if v in idx:
                    gi, j, k = idx[v]
                    pat = blocks.setdefault((gi, j), [0] * schema.groups[gi].block_size)
                    pat[k] += e
                elif v in allowed_fixed:
                    fixed.append((v, e))
                else:
                    raise SchemaError(f"variable {v!r} is not an input slot of vertex type {schema.vtype}")
            per_group = []
            for gi in range(len(schema.groups)):
                pats = sorted(tuple(pat) for (g, _), pat in blocks.items() if g == gi)
                per_group.append(tuple(pats))
            key = (tuple(sorted(fixed)), tuple(per_group))
            terms[key] = terms.get(key, 0) + Fraction(c)
        return cls(schema, terms)

    @classmethod
    def orbit_sum(cls, schema: InputSchema, etype: str, pattern: Sequence[int], coeff=1) -> InvariantPolynomial:
        """``coeff * sum_j prod_k E[etype][j][k]^pattern[k]`` over all blocks of one group."""
        gi = next(i for i, g in enumerate(schema.groups) if g.etype == etype)
        n = schema.groups[gi].count
        groups = tuple(((tuple(pattern),) if i == gi else ()) for i in range(len(schema.groups)))
        return cls(schema, {((), groups): Fraction(coeff) * n})

    # -- inspection ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        best = -1
        for (fixed, groups), _ in self.terms.items():
            d = sum(e for v, e in fixed if v != PARAM) + sum(sum(p) for pats in groups for p in pats)
            best = max(best, d)
        return best

    def __eq__(self, other):
        if not isinstance(other, InvariantPolynomial):
            return NotImplemented
        return self.schema == other.schema and self.terms == other.terms

    def __add__(self, other: InvariantPolynomial) -> InvariantPolynomial:
        if self.schema != other.schema:
            raise SchemaError("cannot add invariant polynomials over different schemas")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return InvariantPolynomial(self.schema, out)

    def __mul__(self, c) -> InvariantPolynomial:
        return InvariantPolynomial(self.schema, {k: v * Fraction(c) for k, v in self.terms.items()})

    __rmul__ = __mul__

    def _factor(self, groups) -> Fraction:
        f = Fraction(1)
        for g, pats in zip(self.schema.groups, groups):
            n, r = g.count, len(pats)
            f *= Fraction(math.factorial(n - r) * _multiplicity(pats), math.factorial(n))
        return f

    # -- evaluation ---------------------------------------------------------------------

    def evaluate(self, values: Mapping[str, Any]):
        """Evaluate at ``values``; exact numbers stay exact, numpy arrays broadcast."""
        schema = self.schema
        block_vals = [[[values[s] for s in g.block_slots(j)] for j in range(g.count)] for g in schema.groups]
        inexact = _inexact(values)
        total = 0
        for (fixed, groups), c in self.terms.items():
            t = c * self._factor(groups)
            if inexact:
                t = float(t)
            for v, e in fixed:
                t = t * values[v] ** e
            for gi, pats in enumerate(groups):
                if not pats:
                    continue
                bv = block_vals[gi]

                def block_value(b, i, bv=bv, pats=pats):
                    out = 1
                    for x, e in zip(bv[b], pats[i]):
                        if e:
                            out = out * x ** e
                    return out

                s = _inj_sum(len(bv), pats, block_value, 1, lambda a, b: a + b, lambda a, b: a * b)
                t = t * s
            total = total + t
        if isinstance(total, Fraction) and total.denominator == 1:
            return int(total)
        return total

    def rename(self, mapping: Mapping[str, str]) -> Polynomial:
        """Explicit polynomial after replacing every slot by a variable name.

        Slots missing from ``mapping`` keep their own name.
        """
        schema = self.schema
        out: dict[Monomial, Fraction] = defaultdict(Fraction)
        for (fixed, groups), c in self.terms.items():
            acc: dict[Monomial, Fraction] = {tuple(sorted(_rename_mono(fixed, mapping))): c * self._factor(groups)}
            for gi, pats in enumerate(groups):
                if not pats:
                    continue
                g = schema.groups[gi]
                slots = [g.block_slots(j) for j in range(g.count)]
                mono_cache = {}

                def block_value(b, i, slots=slots, pats=pats, cache=mono_cache):
                    key = (b, i)
                    if key not in cache:
                        cache[key] = {tuple(sorted(_rename_mono(
                            ((s, e) for s, e in zip(slots[b], pats[i]) if e), mapping))): 1}
                    return cache[key]

                s = _inj_sum(g.count, pats, block_value, {(): 1}, _padd, _pmul)
                acc = _pmul(acc, s)
            for m, v in acc.items():
                out[m] += v
        return Polynomial(out)

    def to_polynomial(self) -> Polynomial:
        """Expand every orbit explicitly.  Only sensible for small schemas."""
        return self.rename({})

    def __repr__(self):
        return f"InvariantPolynomial({self.schema.vtype!r}, {len(self.terms)} orbits, degree {self.degree})"


def _inexact(values) -> bool:
    return any(isinstance(v, (float, np.floating, np.ndarray)) for v in values.values())


def _rename_mono(pairs, mapping):
    d: dict[str, int] = {}
    for v, e in pairs:
        w = mapping.get(v, v)
        d[w] = d.get(w, 0) + e
    return d.items()


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + c
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return out


def symmetrize(p: Polynomial, schema: InputSchema) -> Polynomial:
    """Average ``p`` over all within-group block permutations (explicit result)."""
    return InvariantPolynomial.from_polynomial(p, schema).to_polynomial()


def random_invariant_polynomial(schema: InputSchema, max_degree: int, seed=None, n_terms: int = 4,
                                coeff_bound: int = 9, min_degree: int = 0, dense: bool = False,
                                dense_limit: int = 2000) -> InvariantPolynomial:
    """Symmetrization of a random sparse integer polynomial of degree <= ``max_degree``.

    With ``dense`` every monomial of degree in ``[min_degree, max_degree]``
    gets a random nonzero coefficient, as long as there are at most
    ``dense_limit`` of them; otherwise ``n_terms`` random monomials are used.
    Deterministic for a given ``seed`` (an int or a ``random.Random``).
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    slots = list(schema.slots)
    terms: dict[Monomial, int] = {}
    lo = min(min_degree, max_degree)
    if dense and sum(math.comb(len(slots) + d - 1, d) for d in range(lo, max_degree + 1)) <= dense_limit:
        for d in range(lo, max_degree + 1):
            for combo in itertools.combinations_with_replacement(slots, d):
                exps: dict[str, int] = defaultdict(int)
                for s in combo:
                    exps[s] += 1
                c = 0
                while c == 0:
                    c = rng.randint(-coeff_bound, coeff_bound)
                terms[tuple(sorted(exps.items()))] = c
        return InvariantPolynomial.from_polynomial(Polynomial(terms), schema)
    for _ in range(n_terms):
        d = rng.randint(min(min_degree, max_degree), max_degree) if slots else 0
        exps: dict[str, int] = defaultdict(int)
        for _ in range(d):
            exps[rng.choice(slots)] += 1
        c = 0
        while c == 0:
            c = rng.randint(-coeff_bound, coeff_bound)
        m = tuple(sorted(exps.items()))
        terms[m] = terms.get(m, 0) + c
    return InvariantPolynomial.from_polynomial(Polynomial(terms), schema)


# -- response functions -----------------------------------------------------------


class ResponseFunction:
    schema: InputSchema
    is_polynomial = False

    def evaluate(self, values: Mapping[str, Any], lam=0) -> list:
        raise NotImplementedError

    def with_schema(self, schema: InputSchema) -> ResponseFunction:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class PolynomialResponse(ResponseFunction):
    """One invariant polynomial per output component."""

    schema: InputSchema
    components: tuple[InvariantPolynomial, ...]
    is_polynomial = True

    def __post_init__(self):
        if len(self.components) != self.schema.dim:
            raise SchemaError(f"vertex type {self.schema.vtype}: expected {self.schema.dim} components")
        for c in self.components:
            if c.schema != self.schema:
                raise SchemaError("component schema does not match response schema")

    @classmethod
    def from_polynomials(cls, schema: InputSchema, polys: Sequence[Polynomial | InvariantPolynomial]):
        comps = []
        for p in polys:
            if isinstance(p, InvariantPolynomial):
                comps.append(p)
            else:
                comps.append(InvariantPolynomial.from_polynomial(p, schema))
        return cls(schema, tuple(comps))

    @classmethod
    def zero(cls, schema: InputSchema) -> PolynomialResponse:
        return cls(schema, tuple(InvariantPolynomial(schema) for _ in range(schema.dim)))

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    def evaluate(self, values, lam=0) -> list:
        vals = dict(values)
        vals[PARAM] = lam
        return [c.evaluate(vals) for c in self.components]

    def polynomials(self) -> list[Polynomial]:
        return [c.to_polynomial() for c in self.components]

    def __add__(self, other: PolynomialResponse) -> PolynomialResponse:
        return PolynomialResponse(self.schema, tuple(a + b for a, b in zip(self.components, other.components)))


@dataclass(frozen=True, eq=False)
class BuiltinResponse(ResponseFunction):
    """Response given by a Python callable ``fn(values, lam) -> components``.

    The callable receives the slot dictionary and must itself be invariant
    under block permutations of each edge group.
    """

    schema: InputSchema
    fn: Callable[[Mapping[str, Any], Any], Sequence]
    name: str = "builtin"

    def evaluate(self, values, lam=0) -> list:
        out = list(self.fn(values, lam))
        if len(out) != self.schema.dim:
            raise SchemaError(f"builtin {self.name} returned {len(out)} components, expected {self.schema.dim}")
        return out


# -- systems --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdmissibleSystem:
    """Hypernetwork plus one response function per vertex type."""

    net: Hypernetwork
    library: Mapping[str, ResponseFunction]

    def __post_init__(self):
        want = schemas(self.net)
        for vt, sch in want.items():
            if vt not in self.library:
                raise SchemaError(f"no response function for vertex type {vt}")
            if self.library[vt].schema != sch:
                raise SchemaError(f"response for vertex type {vt} has schema {self.library[vt].schema}, "
                                  f"network needs {sch}")

    @cached_property
    def _plan(self) -> list[tuple[str, slice, dict[str, int], ResponseFunction]]:
        off = self.net.offsets
        return [(v, off[v], input_slots(self.net, v), self.library[self.net.vtype(v)])
                for v in self.net.vertex_ids]

    @property
    def is_polynomial(self) -> bool:
        return all(r.is_polynomial for r in self.library.values())

    def eval(self, x, lam=0):
        """Admissible vector field at ``x``.

        ``x`` is a flat state (list of exact numbers) or a float array of shape
        ``(..., state_dim)`` with ``lam`` broadcastable against ``x[..., 0]``.
        """
        if isinstance(x, np.ndarray):
            if x.shape[-1] != self.net.state_dim:
                raise SchemaError(f"state has dimension {x.shape[-1]}, expected {self.net.state_dim}")
            out = np.empty(np.broadcast_shapes(x.shape, np.shape(lam) + (x.shape[-1],)), dtype=float)
            for v, sl, slots, resp in self._plan:
                vals = {s: x[..., i] for s, i in slots.items()}
                comps = resp.evaluate(vals, lam)
                for c, val in enumerate(comps):
                    out[..., sl.start + c] = val
            return out
        x = list(x)
        if len(x) != self.net.state_dim:
            raise SchemaError(f"state has dimension {len(x)}, expected {self.net.state_dim}")
        out = [0] * len(x)
        for v, sl, slots, resp in self._plan:
            vals = {s: x[i] for s, i in slots.items()}
            for c, val in enumerate(resp.evaluate(vals, lam)):
                out[sl.start + c] = val
        return out

    __call__ = eval

    def with_net(self, net: Hypernetwork) -> AdmissibleSystem:
        """Same response library on another hypernetwork (e.g. a quotient)."""
        return AdmissibleSystem(net, {vt: self.library[vt] for vt in net.vertex_types})


def embed_colours(net: Hypernetwork, p: Partition, z: Mapping[int, Any] | Sequence) -> list:
    """Flat state on ``Syn_P`` whose first component on class ``c`` is ``z[c]`` (colours from 1)."""
    get = (lambda c: z[c]) if isinstance(z, Mapping) else (lambda c: z[c - 1])
    out = []
    for v in net.vertex_ids:
        out.append(get(p.colour[v]))
        out.extend([0] * (net.dim(v) - 1))
    return out


def eval_symbolic_on_syn(system: AdmissibleSystem, p: Partition) -> dict[str, Polynomial]:
    """First component of ``f_v`` restricted to ``Syn_P``, as a polynomial in ``Z1..ZC``."""
    net = system.net
    p.check_refines(net)
    if any(net.dim(v) != 1 for v in net.vertex):
        raise SchemaError("symbolic restriction needs one-dimensional vertices")
    owner = {net.offsets[u].start: u for u in net.vertex_ids}
    out = {}
    for v, _, slots, resp in system._plan:
        if not resp.is_polynomial:
            raise SchemaError(f"response for vertex type {net.vtype(v)} is not polynomial")
        mapping = {s: f"Z{p.colour[owner[i]]}" for s, i in slots.items()}
        out[v] = resp.components[0].rename(mapping)
    return out


def random_polynomial_library(net: Hypernetwork, max_degree: int, seed=None, n_terms: int = 4,
                              min_degree: int = 0, dense: bool = False) -> dict[str, PolynomialResponse]:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return {vt: PolynomialResponse(sch, tuple(
        random_invariant_polynomial(sch, max_degree, rng, n_terms=n_terms, min_degree=min_degree, dense=dense)
        for _ in range(sch.dim)))
        for vt, sch in schemas(net).items()}


# -- builtins -----------------------------------------------------------------------


def _h(u):
    return np.sin(u) + np.cos(u) - 1.0


def example58_library(net: Hypernetwork, core_type: str = "v", w_type: str = "w",
                      light: str = "a", grey: str = "b", hyper: str = "hyp") -> dict[str, ResponseFunction]:
    """Responses G_lam (core nodes) and F_lam (w nodes) of the builtin ``example58`` library.

    ``G(X0, X1, X2) = -X0 + X1 - X2 + 8 lam X0 + 4 X0^2`` with ``X0`` the own
    state, ``X1`` the ``light`` edge source and ``X2`` the ``grey`` edge source;
    ``F(Y, pairs) = -5Y + 14 lam - sum h(10 X - 12 X')`` over the ``hyper``
    pairs, ``h(u) = sin u + cos u - 1``.  Self-loop edges are not read: their
    source always equals the own state.
    """
    sch = schemas(net)
    lib: dict[str, ResponseFunction] = {}
    if core_type in sch:
        s = sch[core_type]
        s.group(light), s.group(grey)
        a0, b0 = edge_slot(light, 0, 0), edge_slot(grey, 0, 0)

        def G(vals, lam):
            x0 = vals["Y[0]"]
            return [-x0 + vals[a0] - vals[b0] + 8.0 * lam * x0 + 4.0 * x0 * x0]

        lib[core_type] = BuiltinResponse(s, G, "example58.G")
    if w_type in sch:
        s = sch[w_type]
        g = s.group(hyper)
        if g.order != 2:
            raise SchemaError("example58 F needs order-2 hyperedges")
        pairs = [(edge_slot(hyper, j, 0), edge_slot(hyper, j, 1)) for j in range(g.count)]

        def F(vals, lam):
            acc = -5.0 * vals["Y[0]"] + 14.0 * lam
            for p, q in pairs:
                acc = acc - _h(10.0 * vals[p] - 12.0 * vals[q])
            return [acc]

        lib[w_type] = BuiltinResponse(s, F, "example58.F")
    missing = set(sch) - set(lib)
    if missing:
        raise SchemaError(f"example58 has no response for vertex types {sorted(missing)}")
    return lib


BUILTINS: dict[str, Callable[..., dict[str, ResponseFunction]]] = {"example58": example58_library}


def builtin_library(name: str, net: Hypernetwork) -> dict[str, ResponseFunction]:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise SchemaError(f"unknown builtin response library {name!r}; known: {sorted(BUILTINS)}") from None
    return factory(net)


# -- response library specs ------------------------------------------------------------

_RESP_LINE = re.compile(r"^(?P<vt>[^\s\[\]:]+)(?:\[(?P<comp>\d+)\])?\s*:\s*(?P<poly>.+)$")


def parse_response_file(text: str, net: Hypernetwork) -> dict[str, PolynomialResponse]:
    """Lines ``<vtype>[<comp>]: <polynomial>``; polynomials are symmetrized, absent components are zero."""
    sch = schemas(net)
    polys: dict[str, dict[int, Polynomial]] = {vt: {} for vt in sch}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RESP_LINE.match(line)
        if not m:
            raise SchemaError(f"line {lineno}: expected '<vtype>[<comp>]: <polynomial>'")
        vt, comp = m.group("vt"), int(m.group("comp") or 0)
        if vt not in sch:
            raise SchemaError(f"line {lineno}: unknown vertex type {vt!r}")
        if comp >= sch[vt].dim:
            raise SchemaError(f"line {lineno}: vertex type {vt} has dim {sch[vt].dim}")
        try:
            p = parse_polynomial(m.group("poly"))
        except ValueError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from None
        unknown = p.variables - set(sch[vt].slots) - {PARAM}
        if unknown:
            raise SchemaError(f"line {lineno}: unknown slots {sorted(unknown)} for vertex type {vt}")
        polys[vt][comp] = polys[vt].get(comp, Polynomial()) + p
    return {vt: PolynomialResponse.from_polynomials(s, [polys[vt].get(c, Polynomial()) for c in range(s.dim)])
            for vt, s in sch.items()}


def resolve_library(spec: str, net: Hypernetwork, seed=0) -> dict[str, ResponseFunction]:
    """``example58`` (any builtin name), ``random:<degree>`` or a path to a response file."""
    if spec in BUILTINS:
        return builtin_library(spec, net)
    if spec.startswith("random:"):
        try:
            deg = int(spec.split(":", 1)[1])
        except ValueError:
            raise SchemaError(f"bad random response spec {spec!r}; expected random:<degree>") from None
        return random_polynomial_library(net, deg, seed)
    with open(spec, encoding="utf-8") as fh:
        return parse_response_file(fh.read(), net)
