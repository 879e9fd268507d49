"""Robust synchrony: signature ordering, attuned permutations, breaking witnesses.

The witness construction follows the counting argument for the degree bound
``k(k+1)/2``: for an edge type of order ``m`` and a permutation ``sigma`` of
``1..m``, the response ``sum_h prod_i x_{s_i(h)}^{sigma(i)}`` restricted to a
synchrony subspace is a sum of monomials ``Z_{c_1}^{sigma(1)}...Z_{c_m}^{sigma(m)}``
indexed by hyperedge signatures.  Unequal signature counts inside a class
show up as unequal restrictions for some ``sigma``.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

from .admissible import (
    AdmissibleSystem,
    EdgeGroup,
    InputSchema,
    InvariantPolynomial,
    PolynomialResponse,
    SchemaError,
    edge_slot,
    random_polynomial_library,
    schemas,
)
from .model import Hypernetwork
from .partition import Partition, is_balanced
from .polynomial import Polynomial

__all__ = [
    "Perm",
    "Order",
    "seq_compare",
    "monomial",
    "attune",
    "is_attuned",
    "witness_response",
    "Witness",
    "find_breaking_witness",
    "RobustnessVerdict",
    "probe_invariance",
    "robust_verdict",
    "power_sum",
    "augmented_schema",
    "vandermonde_quotient",
    "vandermonde",
    "FactorizationError",
    "syn_point",
    "even_odd_difference",
    "check_ghost_symmetry",
    "PRIMES",
]

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


@dataclass(frozen=True)
class Perm:
    """Permutation of ``{0..n-1}`` stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"{self.images} is not a permutation of 0..{len(self.images) - 1}")

    @classmethod
    def one_based(cls, images: Sequence[int]) -> Perm:
        return cls(tuple(i - 1 for i in images))

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(tuple(range(n)))

    @classmethod
    def all(cls, n: int) -> list[Perm]:
        """All of ``S_n``, lexicographic in the image tuple."""
        return [cls(p) for p in itertools.permutations(range(n))]

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Perm) -> Perm:
        """Composition ``(self * other)(i) = self(other(i))``."""
        return Perm(tuple(self.images[j] for j in other.images))

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    @property
    def sgn(self) -> int:
        """Parity: 0 for even, 1 for odd (via cycle decomposition)."""
        seen = [False] * len(self.images)
        transpositions = 0
        for start in range(len(self.images)):
            if seen[start]:
                continue
            length, i = 0, start
            while not seen[i]:
                seen[i] = True
                i = self.images[i]
                length += 1
            transpositions += length - 1
        return transpositions % 2

    def as_one_based(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.images)

    def __str__(self):
        return "(" + ",".join(map(str, self.as_one_based())) + ")"


class Order(enum.Enum):
    GREATER = "a>b"
    LESS = "b>a"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def seq_compare(a: Sequence[int], b: Sequence[int], n_colours: int | None = None) -> Order:
    """Compare colour sequences by their colour counts, highest colour first."""
    if len(a) != len(b):
        raise ValueError("sequences must have equal length")
    if tuple(a) == tuple(b):
        return Order.EQUAL
    top = n_colours if n_colours is not None else max((*a, *b), default=1)
    for c in range(top, 1, -1):
        na, nb = list(a).count(c), list(b).count(c)
        if na != nb:
            return Order.GREATER if na > nb else Order.LESS
    return Order.INCOMPARABLE


def monomial(a: Sequence[int], sigma: Perm | Sequence[int]) -> Polynomial:
    """``Z_{a_1}^{sigma(1)} ... Z_{a_m}^{sigma(m)}``; ``sigma`` given one-based or as a Perm."""
    exps = sigma.as_one_based() if isinstance(sigma, Perm) else tuple(sigma)
    if len(exps) != len(a):
        raise ValueError("signature and permutation lengths differ")
    d: dict[str, int] = {}
    for c, e in zip(a, exps):
        d[f"Z{c}"] = d.get(f"Z{c}", 0) + e
    return Polynomial.monomial(d)


def attune(a: Sequence[int]) -> Perm:
    """A permutation attuned to ``a``.

    The largest values go to the positions of the highest colour, the next
    largest to the next colour, and so on; inside one colour the larger value
    goes to the smaller position.
    """
    m = len(a)
    value = m
    out = [0] * m
    for c in sorted(set(a), reverse=True):
        for i in range(m):
            if a[i] == c:
                out[i] = value
                value -= 1
    return Perm.one_based(out)


def is_attuned(tau: Perm, a: Sequence[int]) -> bool:
    """Direct check: every value on a higher colour beats every value on a lower one."""
    vals = tau.as_one_based()
    for i in range(len(a)):
        for j in range(len(a)):
            if a[i] > a[j] and vals[i] < vals[j]:
                return False
    return True


# -- witness responses --------------------------------------------------------------


def _first_component_pattern(group: EdgeGroup, exps: Sequence[int]) -> tuple[int, ...]:
    pat = []
    for d, e in zip(group.source_dims, exps):
        pat.extend([e] + [0] * (d - 1))
    return tuple(pat)


def witness_response(net: Hypernetwork, etype: str, sigma: Perm | Sequence[int]) -> AdmissibleSystem:
    """System whose first component at each target of ``etype`` is ``sum_h prod_i x_{s_i(h)}^{sigma(i)}``."""
    if etype not in net.edge_types:
        raise SchemaError(f"unknown edge type {etype!r}")
    exps = sigma.as_one_based() if isinstance(sigma, Perm) else tuple(sigma)
    lib = {}
    for vt, sch in schemas(net).items():
        comps = [InvariantPolynomial(sch) for _ in range(sch.dim)]
        for g in sch.groups:
            if g.etype == etype:
                if g.order != len(exps):
                    raise SchemaError(f"edge type {etype} has order {g.order}, permutation has {len(exps)}")
                comps[0] = InvariantPolynomial.orbit_sum(sch, etype, _first_component_pattern(g, exps))
        lib[vt] = PolynomialResponse(sch, tuple(comps))
    return AdmissibleSystem(net, lib)


def witness_spec(etype: str, count: int, sigma: Perm | Sequence[int]) -> str:
    """Polynomial-spec string of the witness response for a vertex with ``count`` such in-edges."""
    exps = sigma.as_one_based() if isinstance(sigma, Perm) else tuple(sigma)
    terms = []
    for j in range(count):
        factors = [edge_slot(etype, j, pos) + (f"^{e}" if e != 1 else "") for pos, e in enumerate(exps)]
        terms.append("*".join(factors))
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Witness:
    """An admissible polynomial map breaking ``Syn_P``, with a separating point."""

    etype: str
    sigma: Perm
    vertices: tuple[str, str]
    colour_values: dict[int, int]
    state: tuple[int, ...]
    values: tuple[int, int]
    restricted: tuple[Polynomial, Polynomial]
    spec: str

    @property
    def degree(self) -> int:
        m = len(self.sigma)
        return m * (m + 1) // 2


def _restricted_witness(net: Hypernetwork, p: Partition, v: str, etype: str, sigma: Perm) -> Polynomial:
    out = Polynomial()
    for h in net.in_edges(v):
        if h.etype == etype:
            out = out + monomial(tuple(p.colour[u] for u in h.sources), sigma)
    return out


def _separating_point(p1: Polynomial, p2: Polynomial, n_colours: int) -> dict[int, int] | None:
    diff = p1 - p2
    if diff.is_zero():
        return None
    z = {c: PRIMES[(c - 1) % len(PRIMES)] + 72 * ((c - 1) // len(PRIMES)) for c in range(1, n_colours + 1)}
    if diff.evaluate({f"Z{c}": z[c] for c in z}) != 0:
        return z
    used = sorted(int(v[1:]) for v in diff.variables)
    for vals in itertools.product(range(5), repeat=len(used)):
        zz = dict(z)
        zz.update(zip(used, vals))
        if diff.evaluate({f"Z{c}": zz[c] for c in zz}) != 0:
            return zz
    raise AssertionError("nonzero polynomial vanished on the whole grid")  # degree < 5 per variable


def find_breaking_witness(net: Hypernetwork, p: Partition) -> Witness | None:
    """Admissible polynomial of degree ``m(m+1)/2`` that moves off ``Syn_P``, if ``P`` is unbalanced."""
    p.check_refines(net)
    res = is_balanced(net, p)
    if res:
        return None
    mm = res.mismatch
    etype = mm.etype
    m = net.edge[net.edge_types[etype][0]].order
    cls = p.classes[mm.class_index]
    pairs = [(cls[0], v) for v in cls[1:]]
    for sigma in Perm.all(m):
        for v1, v2 in pairs:
            r1 = _restricted_witness(net, p, v1, etype, sigma)
            r2 = _restricted_witness(net, p, v2, etype, sigma)
            z = _separating_point(r1, r2, p.n_colours)
            if z is None:
                continue
            system = witness_response(net, etype, sigma)
            state = tuple(_embed(net, p, z))
            f = system.eval(list(state))
            off = net.offsets
            vals = (f[off[v1].start], f[off[v2].start])
            if vals[0] == vals[1]:
                raise AssertionError("restricted witness disagrees with direct evaluation")
            count = sum(1 for h in net.in_edges(v1) if h.etype == etype)
            return Witness(etype, sigma, (v1, v2), z, state, vals, (r1, r2), witness_spec(etype, count, sigma))
    raise AssertionError(f"no separating permutation found for unbalanced partition {p}")


def _embed(net: Hypernetwork, p: Partition, z: dict[int, int]) -> list[int]:
    out = []
    for v in net.vertex_ids:
        out.append(z[p.colour[v]])
        out.extend([0] * (net.dim(v) - 1))
    return out


# -- verdicts -------------------------------------------------------------------------


def syn_point(net: Hypernetwork, p: Partition, rng: random.Random, bound: int = 60) -> list[int]:
    """Random integer point of ``Syn_P`` with pairwise distinct class values."""
    pool = rng.sample(range(-bound, bound + 1), k=sum(net.dim(c[0]) for c in p.classes))
    per_class = {}
    it = iter(pool)
    for ci, c in enumerate(p.classes):
        per_class[ci + 1] = [next(it) for _ in range(net.dim(c[0]))]
    out = []
    for v in net.vertex_ids:
        out.extend(per_class[p.colour[v]])
    return out


def probe_invariance(net: Hypernetwork, p: Partition, max_degree: int, probes: int = 25, seed=0,
                     n_terms: int = 12, libraries: Sequence | None = None) -> bool:
    """Random exact test: do random invariant polynomial systems of degree <= ``max_degree`` keep ``Syn_P``?

    Each probe draws a fresh response library (dense in all monomials when
    that is small enough, else ``n_terms`` random ones) and a fresh integer
    point of ``Syn_P``, and compares ``f_v`` exactly across each class.
    Returns False at the first probe that separates two vertices of one class.
    """
    p.check_refines(net)
    rng = random.Random(seed)
    nontrivial = [c for c in p.classes if len(c) > 1]
    if not nontrivial:
        return True
    off = net.offsets
    for n in range(probes):
        lib = libraries[n] if libraries is not None else random_polynomial_library(
            net, max_degree, rng, n_terms=n_terms, dense=True)
        system = AdmissibleSystem(net, lib)
        x = syn_point(net, p, rng)
        f = system.eval(x)
        for c in nontrivial:
            ref = f[off[c[0]]]
            for v in c[1:]:
                if f[off[v]] != ref:
                    return False
    return True


@dataclass(frozen=True)
class RobustnessVerdict:
    balanced: bool
    invariant_under_low_degree: bool
    witness: Witness | None
    probe_degree: int
    probes: int
    degree_bound: int

    def lines(self) -> list[str]:
        out = [f"balanced: {str(self.balanced).lower()}",
               f"invariant (random probes, degree <= {self.probe_degree}, {self.probes} probes): "
               f"{str(self.invariant_under_low_degree).lower()}",
               f"degree bound k(k+1)/2: {self.degree_bound}"]
        if self.witness is not None:
            w = self.witness
            out.append(f"witness: edge type {w.etype}, sigma {w.sigma}, vertices {w.vertices[0]} {w.vertices[1]}, "
                       f"degree {w.degree}")
        else:
            out.append("witness: none")
        return out


def robust_verdict(net: Hypernetwork, p: Partition, seed=0, degree_cap: int | None = None,
                   probes: int = 25) -> RobustnessVerdict:
    """Balancedness and random low-degree invariance, cross-checked against a breaking witness."""
    p.check_refines(net)
    k = net.order
    bound = k * (k + 1) // 2
    degree = bound if degree_cap is None else min(bound, degree_cap)
    balanced = bool(is_balanced(net, p))
    witness = None if balanced else find_breaking_witness(net, p)
    invariant = probe_invariance(net, p, degree, probes, seed)
    if balanced and not invariant:
        raise AssertionError("balanced partition failed an invariance probe")
    if witness is not None and witness.degree <= degree:
        # the witness itself is an admissible map of admissible degree
        invariant = False
    return RobustnessVerdict(balanced, invariant, witness, degree, probes, bound)


# -- augmented networks: power sums, Vandermonde, ghost symmetry -------------------------


def augmented_schema(k: int, hyper: str = "hyp", loop: str = "loop_w", vtype: str = "w") -> InputSchema:
    """Input schema of the two added nodes of an augmented hypernetwork with ``k+1`` core nodes."""
    if k < 2:
        raise ValueError("k must be >= 2")
    groups = [EdgeGroup(hyper, factorial(k + 1) // 2, (1,) * k), EdgeGroup(loop, 1, (1,))]
    return InputSchema(vtype, 1, tuple(sorted(groups, key=lambda g: g.etype)))


def power_sum(k: int, schema: InputSchema | None = None, hyper: str = "hyp") -> PolynomialResponse:
    """``sum over blocks of X_1^1 X_2^2 ... X_k^k``: block-symmetric, degree ``k(k+1)/2``."""
    if k < 2:
        raise ValueError("power sum witness needs k >= 2")
    schema = schema or augmented_schema(k, hyper)
    g = schema.group(hyper)
    if g.order != k:
        raise SchemaError(f"edge type {hyper} has order {g.order}, expected {k}")
    return PolynomialResponse(schema, (InvariantPolynomial.orbit_sum(
        schema, hyper, _first_component_pattern(g, range(1, k + 1))),)
        + tuple(InvariantPolynomial(schema) for _ in range(schema.dim - 1)))


def _parity_blocks(k: int) -> tuple[list[Perm], list[Perm]]:
    perms = Perm.all(k + 1)
    return [s for s in perms if s.sgn == 0], [s for s in perms if s.sgn == 1]


def _block_mapping(schema: InputSchema, hyper: str, perms: list[Perm]) -> dict[str, str]:
    mapping = {}
    for g in schema.groups:
        for j in range(g.count):
            for s in g.block_slots(j):
                mapping[s] = "Y"
    g = schema.group(hyper)
    if g.count != len(perms):
        raise SchemaError(f"{hyper} group has {g.count} blocks, expected {len(perms)}")
    for j, sigma in enumerate(perms):
        for pos in range(g.order):
            mapping[edge_slot(hyper, j, pos)] = f"x{sigma(pos + 1)}"
    for s in schema.self_slots:
        mapping[s] = "Y"
    return mapping


def even_odd_difference(q: InvariantPolynomial | Polynomial, k: int, hyper: str = "hyp",
                        schema: InputSchema | None = None) -> Polynomial:
    """``Q(even blocks) - Q(odd blocks)`` as a polynomial in ``x0..xk`` and ``Y``.

    Every slot other than the ``hyper`` blocks (own state, self-loop) reads the
    common value ``Y`` of the two added nodes.  A plain :class:`Polynomial` is
    used as given, over ``schema`` (default: the standard augmented schema).
    """
    if isinstance(q, InvariantPolynomial):
        schema = q.schema
    else:
        schema = schema or augmented_schema(k, hyper)
    even, odd = _parity_blocks(k)
    return q.rename(_block_mapping(schema, hyper, even)) - q.rename(_block_mapping(schema, hyper, odd))


class FactorizationError(ArithmeticError):
    pass


def vandermonde_quotient(q: InvariantPolynomial | PolynomialResponse | Polynomial, k: int, hyper: str = "hyp",
                         schema: InputSchema | None = None) -> Polynomial:
    """Exact ``S`` with ``Q(even) - Q(odd) = S * prod_{i>j} (x_i - x_j)``.

    Raises :class:`FactorizationError` on a nonzero remainder, which can only
    happen if ``q`` is not block invariant.
    """
    if isinstance(q, PolynomialResponse):
        q = q.components[0]
    rest = even_odd_difference(q, k, hyper, schema)
    for i in range(k + 1):
        for j in range(i):
            rest, rem = rest.divmod_linear(f"x{i}", f"x{j}")
            if not rem.is_zero():
                raise FactorizationError(f"nonzero remainder dividing by (x{i} - x{j}): {rem}")
    return rest


def vandermonde(k: int) -> Polynomial:
    out = Polynomial.constant(1)
    for i in range(k + 1):
        for j in range(i):
            out = out * (Polynomial.variable(f"x{i}") - Polynomial.variable(f"x{j}"))
    return out


def check_ghost_symmetry(system: AdmissibleSystem, points: Iterable, tol: float = 0.0, pair=("w0", "w1"),
                         lam=0) -> bool:
    """Does swapping the two added nodes commute with the vector field at every point?"""
    net = system.net
    a, b = (net.offsets[v] for v in pair)

    def swap(x):
        x = list(x)
        x[a], x[b] = x[b], x[a]
        return x

    for x in points:
        x = list(x)
        lhs = system.eval(swap(x), lam)
        rhs = swap(system.eval(x, lam))
        if tol == 0:
            if lhs != rhs:
                return False
        elif max(abs(u - v) for u, v in zip(lhs, rhs)) > tol:
            return False
    return True
