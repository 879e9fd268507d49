import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypernet.admissible import (AdmissibleSystem, EdgeGroup, InvariantPolynomial, PolynomialResponse,
                                 SchemaError, edge_slot, embed_colours, eval_symbolic_on_syn, example58_library,
                                 input_slots, parse_response_file, random_invariant_polynomial,
                                 random_polynomial_library, resolve_library, schemas, symmetrize)
from hypernet.catalog import fig1, running
from hypernet.partition import Partition, parse_partition
from hypernet.polynomial import Polynomial, parse_polynomial, var
from conftest import small_networks


def test_running_schemas():
    sch = schemas(running())
    assert sch["w"].groups == (EdgeGroup("hyp", 3, (1, 1)), EdgeGroup("loop_w", 1, (1,)))
    assert [g.etype for g in sch["v"].groups] == ["a", "b", "loop_v"]
    assert sch["w"].permutation_count() == 6
    assert len(sch["w"].slots) == 1 + 6 + 1


def test_input_slots_follow_in_edge_order():
    net = running()
    slots = input_slots(net, "w0")
    srcs = [h.sources for h in net.in_edges("w0") if h.etype == "hyp"]
    for j, (a, b) in enumerate(srcs):
        assert slots[edge_slot("hyp", j, 0)] == net.offsets[a].start
        assert slots[edge_slot("hyp", j, 1)] == net.offsets[b].start
    assert slots["Y[0]"] == net.offsets["w0"].start


def test_symmetrize_averages_over_blocks():
    sch = schemas(running())["w"]
    p = var(edge_slot("hyp", 0, 0)) * var(edge_slot("hyp", 0, 1), 2)
    s = symmetrize(p, sch)
    expect = sum((var(edge_slot("hyp", j, 0)) * var(edge_slot("hyp", j, 1), 2) for j in range(3)), Polynomial())
    assert s * 3 == expect


def test_orbit_sum_counts_each_block_once():
    sch = schemas(running())["w"]
    q = InvariantPolynomial.orbit_sum(sch, "hyp", (1, 2))
    expect = sum((var(edge_slot("hyp", j, 0)) * var(edge_slot("hyp", j, 1), 2) for j in range(3)), Polynomial())
    assert q.to_polynomial() == expect
    assert q.degree == 3


def test_from_polynomial_rejects_foreign_variables():
    sch = schemas(running())["w"]
    with pytest.raises(SchemaError, match="not an input slot"):
        InvariantPolynomial.from_polynomial(var("E[a][0][0][0]"), sch)


def test_fig1_symbolic_restriction():
    net = fig1()
    lib = parse_response_file("v: 0\nw: 3*E[hyp][0][0][0]*E[hyp][0][1][0]^2\n", net)
    sys_ = AdmissibleSystem(net, lib)
    f = eval_symbolic_on_syn(sys_, Partition.singletons(net))
    Z1, Z2, Z3 = var("Z1"), var("Z2"), var("Z3")
    assert f["w0"] == Z1 * Z2 ** 2 + Z2 * Z3 ** 2 + Z3 * Z1 ** 2
    assert f["w1"] == Z1 * Z3 ** 2 + Z3 * Z2 ** 2 + Z2 * Z1 ** 2
    g = eval_symbolic_on_syn(sys_, parse_partition("v0 v1 v2 | w0 | w1"))
    assert g["w0"] == 3 * Z1 ** 3 == g["w1"]


def test_exact_and_float_evaluation_agree():
    net = running()
    lib = random_polynomial_library(net, 3, seed=5, n_terms=6)
    s = AdmissibleSystem(net, lib)
    x = [1, -2, 3, 0, 2]
    exact = s.eval(x, lam=2)
    flt = s.eval(np.array(x, dtype=float), lam=2.0)
    assert np.allclose(flt, [float(v) for v in exact], rtol=1e-12)


def test_batched_evaluation_broadcasts_lambda():
    net = running()
    s = AdmissibleSystem(net, example58_library(net))
    xs = np.random.default_rng(0).normal(size=(4, 5))
    lams = np.array([-0.01, 0.0, 0.01, 0.02])
    batch = s.eval(xs, lams)
    for i in range(4):
        assert np.allclose(batch[i], s.eval(xs[i], lams[i]), rtol=0, atol=0)


def _h(u):
    return math.sin(u) + math.cos(u) - 1


def test_example58_values_by_hand():
    net = running()
    s = AdmissibleSystem(net, example58_library(net))
    v0, v1, v2, w0, w1 = 0.1, -0.2, 0.3, 0.4, 0.5
    lam = 0.01
    out = s.eval(np.array([v0, v1, v2, w0, w1]), lam)
    G = lambda x0, x1, x2: -x0 + x1 - x2 + 8 * lam * x0 + 4 * x0 * x0
    # a-sources: v0<-v0, v1<-v1, v2<-v1 ; b-sources: v0<-v0, v1<-v0, v2<-v2
    assert out[0] == pytest.approx(G(v0, v0, v0), abs=1e-15)
    assert out[1] == pytest.approx(G(v1, v1, v0), abs=1e-15)
    assert out[2] == pytest.approx(G(v2, v1, v2), abs=1e-15)
    even = [(v1, v2), (v2, v0), (v0, v1)]
    odd = [(v2, v1), (v0, v2), (v1, v0)]
    F = lambda y, pairs: -5 * y + 14 * lam - sum(_h(10 * a - 12 * b) for a, b in pairs)
    assert out[3] == pytest.approx(F(w0, even), abs=1e-14)
    assert out[4] == pytest.approx(F(w1, odd), abs=1e-14)


def test_system_requires_every_type_and_matching_schema():
    net = running()
    lib = random_polynomial_library(net, 1, seed=1)
    with pytest.raises(SchemaError, match="no response"):
        AdmissibleSystem(net, {"v": lib["v"]})
    with pytest.raises(SchemaError, match="schema"):
        AdmissibleSystem(net, {"v": lib["w"], "w": lib["w"]})
    with pytest.raises(SchemaError, match="dimension"):
        AdmissibleSystem(net, lib).eval([0, 0, 0])


def test_response_file_errors():
    net = running()
    with pytest.raises(SchemaError, match="unknown vertex type"):
        parse_response_file("q: 1", net)
    with pytest.raises(SchemaError, match="unknown slots"):
        parse_response_file("w: E[a][0][0][0]", net)
    with pytest.raises(SchemaError, match="line 2"):
        parse_response_file("w: 1\nv 3", net)
    with pytest.raises(SchemaError, match="dim"):
        parse_response_file("w[1]: 1", net)


def test_response_file_missing_types_are_zero():
    net = running()
    lib = parse_response_file("w: lam + Y[0]", net)
    assert lib["v"].components[0].is_zero()
    assert AdmissibleSystem(net, lib).eval([0, 0, 0, 2, 3], lam=5) == [0, 0, 0, 7, 8]


def test_resolve_library_variants(tmp_path):
    net = running()
    assert resolve_library("example58", net)["w"].name == "example58.F"
    assert resolve_library("random:2", net, seed=3)["w"].degree <= 2
    f = tmp_path / "r.resp"
    f.write_text("v: Y[0]\n")
    assert resolve_library(str(f), net)["v"].degree == 1
    with pytest.raises(SchemaError):
        resolve_library("random:x", net)
    with pytest.raises(FileNotFoundError):
        resolve_library(str(tmp_path / "missing"), net)


def test_embed_colours():
    net = running()
    p = parse_partition("v0 v1 | v2 | w0 w1")
    assert embed_colours(net, p, [7, 8, 9]) == [7, 7, 8, 9, 9]


def test_dense_random_polynomial_hits_every_monomial():
    sch = schemas(running())["w"]
    q = random_invariant_polynomial(sch, 2, seed=0, dense=True)
    p = q.to_polynomial()
    # every degree-2 monomial in the self slot appears
    assert p.coefficient({"Y[0]": 2}) != 0
    assert p.coefficient({edge_slot("hyp", 1, 0): 1, edge_slot("hyp", 2, 1): 1}) != 0


def _permute_blocks(schema, values, rng):
    out = dict(values)
    for g in schema.groups:
        perm = list(range(g.count))
        rng.shuffle(perm)
        for j in range(g.count):
            for a, b in zip(g.block_slots(j), g.block_slots(perm[j])):
                out[b] = values[a]
    return out


@given(small_networks(5, 7, 3), st.integers(0, 10**6))
def test_invariant_polynomials_are_block_invariant(net, seed):
    rng = random.Random(seed)
    for sch in schemas(net).values():
        q = random_invariant_polynomial(sch, 3, rng, n_terms=5)
        vals = {s: rng.randint(-4, 4) for s in sch.slots}
        vals["lam"] = rng.randint(-3, 3)
        assert q.evaluate(vals) == q.evaluate(_permute_blocks(sch, vals, rng))
        assert q.evaluate(vals) == q.to_polynomial().evaluate(vals)


@given(small_networks(5, 7, 3), st.integers(0, 10**6))
def test_rename_matches_explicit_expansion(net, seed):
    rng = random.Random(seed)
    for sch in schemas(net).values():
        q = random_invariant_polynomial(sch, 3, rng, n_terms=4)
        mapping = {s: rng.choice(["A", "B", "C"]) for s in sch.slots}
        assert q.rename(mapping) == q.to_polynomial().rename(mapping)


@given(small_networks(5, 7, 3), st.integers(0, 10**6))
def test_symmetrize_is_idempotent(net, seed):
    rng = random.Random(seed)
    for sch in schemas(net).values():
        terms = {}
        for _ in range(3):
            s = rng.choice(sch.slots)
            terms[((s, rng.randint(1, 2)),)] = rng.randint(1, 5)
        p = Polynomial(terms)
        once = symmetrize(p, sch)
        assert symmetrize(once, sch) == once


@given(st.integers(0, 10**6))
def test_parse_response_roundtrip(seed):
    net = running()
    lib = random_polynomial_library(net, 2, seed=seed)
    text = "\n".join(f"{vt}: {r.polynomials()[0]}" for vt, r in lib.items())
    again = parse_response_file(text, net)
    for vt in lib:
        assert again[vt].components == lib[vt].components


def test_polynomial_response_dim_check():
    sch = schemas(running())["w"]
    with pytest.raises(SchemaError, match="components"):
        PolynomialResponse.from_polynomials(sch, [parse_polynomial("1"), parse_polynomial("2")])
