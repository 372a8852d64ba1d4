"""Acceptance criteria, one check per criterion.

Each ``criterion_k`` returns ``(ok, detail)``.  Under pytest every result is
recorded and printed as a PASS/FAIL line at the end of the run; run this file
directly to print just those lines.
"""

import math
import random
import sys
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_RESULTS, random_system, random_weights, worked_space
from test_refinement import random_formal_sum, random_partition, random_refinement, random_space
from test_refinement import redundant_example

from logdecomp.atoms import popcounts
from logdecomp.measure import (
    entropy_partition_law,
    interior_loss,
    measure_atom_set,
    measure_formal_sum,
    mu_table,
    naive_mu_table,
    total_loss,
    tsallis_loss,
)
from logdecomp.quantities import (
    QUANTITY_KINDS,
    InfoSystem,
    content,
    content_of_blocks,
    direct_quantity,
    eval_region,
    evaluate_expression_direct,
    expression_to_formal_sum,
    quantity,
)
from logdecomp.refinement import kl_direct, kl_via_measure, restrict, restrict_blocks
from logdecomp.representability import ci_residual, gacs_korner, gacs_korner_exhaustive, wyner
from logdecomp.space import new_space, partition_from_blocks
from logdecomp.systems import build_canonical_system, discriminate

FIGURE = {"12": 0.275, "13": 0.325, "14": 0.361, "23": 0.485, "24": 0.551, "34": 0.690,
          "123": -0.210, "124": -0.222, "134": -0.251, "234": -0.349, "1234": 0.191}


def _vars_for(kind):
    return {"entropy": ["X"], "conditional_entropy": ["X", "Y"]}.get(kind, ["X", "Y", "Z"])


def criterion_1():
    sp = worked_space()
    t = mu_table(sp)
    worst = max(abs(t[sp.mask_of(lab)] - v) for lab, v in FIGURE.items())
    build = mu_table.__wrapped__
    elapsed = min(_timed(lambda: build(sp)) for _ in range(20))
    ok = worst <= 5e-4 and elapsed < 1e-3
    return ok, f"figure atoms: max error {worst:.2e} (tol 5e-4), {elapsed * 1e3:.3f} ms"


def criterion_2():
    rng = random.Random(2)
    start = time.perf_counter()
    worst = 0.0
    for i in range(120):
        s = random_system(rng, rng.randint(1 if i % 10 else 2, 8), 3)
        for kind in QUANTITY_KINDS:
            v = _vars_for(kind)
            worst = max(worst, abs(quantity(s, kind, v) - direct_quantity(s, kind, v)))
        for name in "XYZ":
            got = measure_atom_set(s.table(), s.content(name))
            worst = max(worst, abs(got - entropy_partition_law(s.space, s.var(name))))
    elapsed = time.perf_counter() - start
    return worst <= 1e-9 and elapsed < 10, \
        f"quantities vs direct on 120 systems: max error {worst:.1e}, {elapsed:.2f} s"


def criterion_3():
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    bad = checked = 0
    for i in range(120):
        n = 10 if i < 60 else int(rng.integers(2, 10))
        sp = new_space([str(k) for k in range(n)], rng.random(n) + 1e-3)
        deg = popcounts(n)
        atoms = deg >= 2
        sign = np.where(deg % 2 == 0, 1.0, -1.0)
        vals = mu_table(sp).values
        bad += int(np.count_nonzero((sign * vals)[atoms] <= 0))
        checked += int(np.count_nonzero(atoms))
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 30, \
        f"sign alternation: {bad} violations in {checked} atoms, {elapsed:.2f} s"


def criterion_4():
    rng = random.Random(4)
    n_cases = 10_000
    mag = hom = 0
    for _ in range(n_cases):
        w = [rng.random() + 1e-3 for _ in range(rng.randint(2, 5))]
        tau = rng.random()
        if not abs(interior_loss(w + [tau])) < abs(interior_loss(w)):
            mag += 1
    tsallis = {0.5: 0, 2: 0, 3: 0}
    for _ in range(n_cases):
        w = random_weights(rng, rng.randint(1, 8), normalize=False)
        k = rng.uniform(1e-3, 10)
        kw = [k * p for p in w]
        if not math.isclose(total_loss(kw), k * total_loss(w), rel_tol=1e-12, abs_tol=1e-15):
            hom += 1
        for d in tsallis:
            want = k ** d * tsallis_loss(w, d)
            if not math.isclose(tsallis_loss(kw, d), want, rel_tol=1e-12, abs_tol=1e-15):
                tsallis[d] += 1
    ok = mag == 0 and hom == 0 and not any(tsallis.values())
    return ok, (f"{n_cases} cases each: magnitude {mag}, order-1 {hom}, "
                f"Tsallis d=0.5/2/3 {tsallis[0.5]}/{tsallis[2]}/{tsallis[3]} violations")


def criterion_5():
    rng = random.Random(5)
    worst = 0.0
    for _ in range(500):
        sp = random_space(rng, rng.randint(2, 5))
        m = random_refinement(rng, sp)
        z = random_formal_sum(rng, sp)
        before = measure_formal_sum(mu_table(sp), z)
        after = measure_formal_sum(mu_table(m.child), m.map_formal_sum(z, rng))
        worst = max(worst, abs(before - after))
    bad = 0
    for _ in range(500):
        sp = random_space(rng, rng.randint(2, 5))
        m = random_refinement(rng, sp, max_kids=2)
        p = random_partition(rng, sp)
        s = rng.randrange(1, 1 << sp.n)
        ok = (content(m.child, m.map_partition(p)) == m.psi(content(sp, p))
              and restrict(content(sp, p), s) == content_of_blocks(sp, restrict_blocks(p, s))
              and sorted(restrict_blocks(m.map_partition(p), m.image_mask(s)))
              == sorted(m.map_blocks(restrict_blocks(p, s))))
        bad += not ok
    return worst <= 1e-9 and bad == 0, \
        f"500 refinements: max drift {worst:.1e}; 500 commutation triples: {bad} failures"


def _wyner_system(weights):
    sp = new_space(list("1234"), weights)
    return InfoSystem(sp, {"X": partition_from_blocks(sp, [["1"], ["2", "3", "4"]]),
                           "Y": partition_from_blocks(sp, [["2"], ["1", "3", "4"]])})


def criterion_6():
    rng = random.Random(6)
    mismatch = 0
    for _ in range(150):
        s = random_system(rng, rng.randint(1, 6), rng.randint(2, 3))
        vars = list(s.variables)
        fast, slow = gacs_korner(s, vars), gacs_korner_exhaustive(s, vars)
        mismatch += fast.partition != slow.partition or abs(fast.value - slow.value) > 1e-12
    sp = new_space(list("1234"), [0.25] * 4)
    fig = InfoSystem(sp, {"X": partition_from_blocks(sp, [["1"], ["3"], ["2", "4"]]),
                          "Y": partition_from_blocks(sp, [["1"], ["2"], ["3", "4"]])})
    fig_ok = gacs_korner(fig, ["X", "Y"]).partition == partition_from_blocks(
        sp, [["1"], ["2", "3", "4"]])
    picks, residual = [], 0.0
    for weights, var in (([0.1, 0.2, 0.35, 0.35], "X"), ([0.2, 0.1, 0.35, 0.35], "Y")):
        s = _wyner_system(weights)
        res = wyner(s, ["X", "Y"])
        residual = max(residual, ci_residual(s, ["X", "Y"], res.partition))
        picks.append(res.partition == s.var(var))
    ok = mismatch == 0 and fig_ok and all(picks) and residual < 1e-12
    return ok, (f"GK meet vs exhaustive: {mismatch} mismatches; figure meet "
                f"{'ok' if fig_ok else 'wrong'}; Wyner picks X/Y: {picks[0]}/{picks[1]}; "
                f"CI residual {residual:.1e}")


def criterion_7():
    s = build_canonical_system("xor").system
    v = quantity(s, "co_information", ["X", "Y", "Z"])
    return abs(v + 1) <= 1e-9, f"XOR co-information {v:.12f} bits"


def criterion_8():
    start = time.perf_counter()
    regions = ["X - Y - Z", "Y - X - Z", "Z - X - Y", "X & Y - Z", "X & Z - Y", "Y & Z - X",
               "X & Y & Z"]
    vals = {}
    for name in ("dyadic", "triadic"):
        s = build_canonical_system(name).system
        t = s.table()
        vals[name] = [measure_atom_set(t, eval_region(s, r)) for r in regions]
        vals[name].append(discriminate(s, list("XYZ")))
    elapsed = time.perf_counter() - start
    same = max(abs(a - b) for a, b in zip(vals["dyadic"][:7], vals["triadic"][:7]))
    dy, tri = vals["dyadic"][7], vals["triadic"][7]
    ok = same <= 1e-9 and abs(dy) <= 1e-9 and abs(tri - 1) <= 1e-9 and elapsed < 1
    return ok, (f"seven regions max gap {same:.1e}; discriminate dyadic {dy:.1e}, "
                f"triadic {tri:.9f}; {elapsed * 1e3:.1f} ms")


def criterion_9():
    rng = random.Random(9)
    worst = 0.0
    for _ in range(120):
        n = rng.randint(1, 64)
        w = random_weights(rng, n, zeros=True)
        worst = max(worst, abs(kl_via_measure(w, n) - kl_direct(w)))
    pair = build_canonical_system("redundant_pair").system
    coarse = measure_atom_set(pair.table(), pair.content("X") & pair.content("Y"))
    _, _, fine = redundant_example()
    refined = measure_atom_set(fine.table(), fine.content("X'") & fine.content("Y'"))
    ok = worst <= 1e-9 and abs(coarse - 1) <= 1e-9 and abs(refined - 1) <= 1e-9
    return ok, (f"KL on 120 discretizations: max error {worst:.1e}; shared bit "
                f"{coarse:.12f} -> {refined:.12f}")


def criterion_10():
    sp = new_space(list("abcd"), [0.1, 0.2, 0.3, 0.4])
    text = "I(X;Y) - H(X|Y) + H(X,Y)"

    def make(space):
        return InfoSystem(space, {"X": partition_from_blocks(space, [["a", "b"], ["c", "d"]]),
                                  "Y": partition_from_blocks(space, [["a", "c"], ["b", "d"]])})

    z = expression_to_formal_sum(make(sp), text)
    want = {"ab": 1, "cd": 1, "ad": 2, "bc": 2, "abc": 2, "abd": 2, "acd": 2, "bcd": 2, "abcd": 2}
    coeff_ok = {sp.render(m): c for m, c in z.coeffs.items()} == want
    rng = random.Random(10)
    worst = 0.0
    for _ in range(20):
        s = make(new_space(list("abcd"), random_weights(rng, 4)))
        z = expression_to_formal_sum(s, text)
        worst = max(worst, abs(measure_formal_sum(s.table(), z) - evaluate_expression_direct(s, text)))
    return coeff_ok and worst <= 1e-9, \
        f"element {'matches' if coeff_ok else 'differs'}; 20 weightings max error {worst:.1e}"


def criterion_11():
    rng = np.random.default_rng(11)
    sp = new_space([f"o{i}" for i in range(20)], rng.random(20) + 1e-3)
    elapsed = _timed(lambda: mu_table.__wrapped__(sp))
    natoms = int(np.count_nonzero(popcounts(20) >= 2))
    worst = 0.0
    for seed in range(3):
        r = np.random.default_rng(seed)
        s8 = new_space([str(i) for i in range(8)], r.random(8) + 1e-3)
        worst = max(worst, float(np.max(np.abs(mu_table(s8).values - naive_mu_table(s8).values))))
    ok = elapsed < 5 and natoms == 1_048_555 and worst <= 1e-9
    return ok, (f"N=20 table ({natoms} atoms) in {elapsed:.2f} s; "
                f"N=8 vs naive max error {worst:.1e}")


def _timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = CRITERIA[k]()
    ACCEPTANCE_RESULTS[k] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'}  [{k:2d}] {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for k, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  [{k:2d}] {detail}")
    sys.exit(1 if failed else 0)
