"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly as ``python tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from hypernet.admissible import (AdmissibleSystem, PolynomialResponse, example58_library,  # noqa: E402
                                 random_invariant_polynomial, random_polynomial_library, schemas)
from hypernet.augment import augment  # noqa: E402
from hypernet.catalog import fig1, running, running_quotient, running_quotient_map  # noqa: E402
from hypernet.fibration import check_fibration, quotient, semiconjugacy_error  # noqa: E402
from hypernet.generate import random_hypernetwork  # noqa: E402
from hypernet.model import build  # noqa: E402
from hypernet.partition import (enumerate_balanced, is_balanced, is_balanced_oracle,  # noqa: E402
                                parse_partition, refining_partitions)
from hypernet.sim import SimConfig, diagram_slope, sweep  # noqa: E402
from hypernet.synchrony import (Order, attune, augmented_schema, check_ghost_symmetry,  # noqa: E402
                                even_odd_difference, find_breaking_witness, monomial, power_sum, probe_invariance,
                                robust_verdict, seq_compare, vandermonde, vandermonde_quotient)

import conftest  # noqa: E402

PRIMES = (2, 3, 5, 7, 11, 13)


def _augmented(k):
    """Augmented hypernetwork on k+1 self-looped core nodes."""
    ids = [f"v{i}" for i in range(k + 1)]
    core = build({v: "v" for v in ids}, [(f"loop_{v}", "loop_v", v, (v,)) for v in ids], f"core{k}")
    return augment(core, ids)


def _with_w(net, w_response, v_response=None):
    sch = schemas(net)
    return AdmissibleSystem(net, {"v": v_response or PolynomialResponse.zero(sch["v"]), "w": w_response})


# -- criteria --------------------------------------------------------------------------------


def criterion_1():
    nets = parts = balanced = disagreements = 0
    for seed in range(240):
        net = random_hypernetwork(random.Random(seed), max_vertices=5, max_edges=7, max_order=2)
        rng = random.Random(10_000 + seed)
        libs = [random_polynomial_library(net, 3, rng, dense=True) for _ in range(25)]
        nets += 1
        for p in refining_partitions(net):
            parts += 1
            census = bool(is_balanced(net, p))
            oracle = is_balanced_oracle(net, p)
            probe = probe_invariance(net, p, 3, probes=25, seed=seed, libraries=libs)
            no_witness = find_breaking_witness(net, p) is None
            balanced += census
            if not (census == oracle == probe == no_witness):
                disagreements += 1
    ok = disagreements == 0 and nets >= 200
    return ok, (f"{nets} networks, {parts} partitions ({balanced} balanced), "
                f"{disagreements} disagreements among census/oracle/probes/witness")


def criterion_2():
    net = running()
    two = robust_verdict(net, parse_partition("v0 v1 v2 | w0 w1"))
    merge_p = parse_partition("v0 | v1 | v2 | w0 w1")
    merge = robust_verdict(net, merge_p)
    low = probe_invariance(net, merge_p, 2, probes=25, seed=7)
    ok = (two.balanced and two.invariant_under_low_degree and two.witness is None
          and not merge.balanced and merge.witness is not None and low)
    return ok, (f"two-class balanced={two.balanced} invariant={two.invariant_under_low_degree}; "
                f"w-merge balanced={merge.balanced} witness={'yes' if merge.witness else 'no'} "
                f"degree<=2 probes pass={low}")


def criterion_3():
    details, ok = [], True
    for k in (2, 3):
        D = k * (k + 1) // 2
        sch = augmented_schema(k)
        rng = random.Random(300 + k)
        preserved = 0
        for i in range(100):
            q = random_invariant_polynomial(sch, D - 1, rng, n_terms=8, min_degree=(D - 1) if i % 2 else 0,
                                            dense=(k == 2))
            preserved += even_odd_difference(q, k).is_zero()
        net = _augmented(k)
        assert schemas(net)["w"] == sch
        x = list(PRIMES[:k + 1]) + [PRIMES[k + 1]] * 2
        f = _with_w(net, power_sum(k)).eval(x)
        separated = f[-2] != f[-1]
        ok &= preserved == 100 and separated
        details.append(f"k={k}: {preserved}/100 preserved, P_({k}) separates at primes ({f[-2]} vs {f[-1]})")
    f = _with_w(fig1(), power_sum(2)).eval([0, 1, 2, 0, 0])
    ok &= f[3] - f[4] == 2
    details.append(f"k=2 difference at (0,1,2) = {f[3] - f[4]}")
    return ok, "; ".join(details)


def criterion_4():
    details, ok = [], True
    for k in (2, 3):
        D = k * (k + 1) // 2
        sch = augmented_schema(k)
        rng = random.Random(400 + k)
        good = nonzero = 0
        for _ in range(50):
            q = random_invariant_polynomial(sch, D + 1, rng, n_terms=8, min_degree=D - 1)
            S = vandermonde_quotient(q, k)  # raises on a nonzero remainder
            good += S * vandermonde(k) == even_odd_difference(q, k)
            nonzero += not S.is_zero()
        ok &= good == 50 and nonzero > 0
        details.append(f"k={k}: {good}/50 exact ({nonzero} with S != 0)")
    S2 = vandermonde_quotient(power_sum(2), 2)
    ok &= S2 == 1
    details.append(f"P_(2) quotient = {S2}")
    return ok, "; ".join(details)


def criterion_5():
    net, q, phi = running(), running_quotient(), running_quotient_map()
    assert check_fibration(net, q, phi)
    s = AdmissibleSystem(net, example58_library(net))
    rng = np.random.default_rng(5)
    err_float = max(semiconjugacy_error(s, s.with_net(q), phi, [y], lam=float(lam))
                    for y, lam in zip(rng.uniform(-1, 1, (100, 2)), rng.uniform(-0.03, 0.03, 100)))
    pairs, err_exact, seed = 0, 0, 0
    while pairs < 20:
        seed += 1
        pyrng = random.Random(seed)
        g = random_hypernetwork(pyrng, max_vertices=6, max_edges=9, max_order=3)
        nontrivial = [p for p in enumerate_balanced(g) if len(p.classes) < len(g.vertices)]
        if not nontrivial:
            continue
        res = quotient(g, pyrng.choice(nontrivial))
        sg = AdmissibleSystem(g, random_polynomial_library(g, 3, pyrng, n_terms=6))
        pts = [[Fraction(pyrng.randint(-20, 20), pyrng.randint(1, 5)) for _ in range(res.quotient.state_dim)]
               for _ in range(5)]
        err_exact = max(err_exact, semiconjugacy_error(sg, sg.with_net(res.quotient), res.phi, pts,
                                                       lam=Fraction(pyrng.randint(-5, 5), 3)))
        pairs += 1
    ok = err_float <= 1e-12 and err_exact == 0
    return ok, f"example58 max error {err_float:.3g} over 100 points; {pairs} random pairs, exact error {err_exact}"


def criterion_6():
    net = running()
    s = AdmissibleSystem(net, example58_library(net))
    d = sweep(s, SimConfig())
    x, lam = d.states, d.lambdas
    core = x[:, :3]
    spread = np.max(np.abs(core[:, :, None] - core[:, None, :]), axis=(1, 2))
    ygap = np.abs(x[:, 3] - x[:, 4])
    below = lam <= -0.005
    a = float(np.max(np.maximum(spread[below], ygap[below])))
    top = int(np.argmin(np.abs(lam - 0.03)))
    pair_min = min(abs(core[top, i] - core[top, j]) for i, j in itertools.combinations(range(3), 2))
    fit = diagram_slope(d, ("w0", "w1"), (0.005, 0.03))
    ok = a <= 1e-6 and pair_min > 1e-4 and 2.7 <= fit.slope <= 3.3 and fit.r2 >= 0.99 and lam[top] == 0.03
    return ok, (f"(a) max sync error {a:.2g} for lambda<=-0.005; (b) min core gap {pair_min:.3g} at lambda=0.03; "
                f"(c) slope {fit.slope:.4f}, R2 {fit.r2:.5f} on {fit.n} points")


def criterion_7():
    net = running()
    sch = schemas(net)
    rng = random.Random(7)
    passed = 0
    for _ in range(100):
        v = PolynomialResponse(sch["v"], (random_invariant_polynomial(sch["v"], 2, rng, dense=True),))
        w = PolynomialResponse(sch["w"], (random_invariant_polynomial(sch["w"], 2, rng, dense=True),))
        pts = [[rng.randint(-30, 30) for _ in range(5)] for _ in range(5)]
        passed += check_ghost_symmetry(_with_w(net, w, v), pts, lam=rng.randint(-3, 3))
    broken = not check_ghost_symmetry(_with_w(net, power_sum(2, sch["w"])), [[2, 3, 5, 7, 7]])
    return passed == 100 and broken, f"{passed}/100 degree<=2 systems commute with the swap; P_(2) breaks it: {broken}"


def criterion_8():
    checked = collisions = failures = 0
    for m in range(1, 5):
        for C in range(1, 4):
            seqs = list(itertools.product(range(1, C + 1), repeat=m))
            for a in seqs:
                tau = attune(a)
                ma = monomial(a, tau)
                for b in seqs:
                    checked += 1
                    if b != a and monomial(b, tau) == ma:
                        collisions += 1
                        failures += seq_compare(b, a, C) is not Order.GREATER
    return failures == 0 and collisions > 0, f"{checked} pairs, {collisions} collisions, {failures} not from b > a"


CRITERIA = [
    (1, "balanced equivalence", criterion_1, 120),
    (2, "running example verdicts", criterion_2, 1),
    (3, "degree-bound sharpness", criterion_3, 30),
    (4, "Vandermonde factorization", criterion_4, 30),
    (5, "semiconjugacy", criterion_5, 10),
    (6, "bifurcation sweep", criterion_6, 60),
    (7, "ghost symmetry", criterion_7, 10),
    (8, "attuned monomial collisions", criterion_8, 60),
]


def evaluate(number, name, fn, limit):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    ok = bool(ok) and dt < limit
    line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {name}: {detail} [{dt:.2f}s < {limit}s]"
    return ok, line


@pytest.mark.acceptance
@pytest.mark.parametrize("number,name,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_acceptance(number, name, fn, limit):
    ok, line = evaluate(number, name, fn, limit)
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
