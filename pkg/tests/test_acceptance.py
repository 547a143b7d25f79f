"""Acceptance checks 1-8, one PASS/FAIL line per criterion.

Each check runs against its stated tolerance and wall-clock budget.  Run with
``pytest tests/test_acceptance.py -v`` to see the summary lines.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np

from charvar import cxla, homology, reps, retract, strata, symprod
from charvar.partition import Partition
from helpers import random_sl2, rejection_irreducible, relation_sample
from oracles import brute_sigma_counts, minor_gcd_divisors

P = Partition.from_sizes


def criterion(capsys, number: int, title: str, budget: float, body):
    t0 = time.perf_counter()
    err = None
    detail = ""
    try:
        detail = body() or ""
    except AssertionError as exc:
        err = exc
    elapsed = time.perf_counter() - t0
    ok = err is None and elapsed < budget
    verdict = "PASS" if ok else "FAIL"
    why = f" ({err})" if err is not None else ""
    with capsys.disabled():
        print(f"\n[criterion {number}] {verdict} {title}: {elapsed:.2f}s of {budget:g}s {detail}{why}")
    if err is not None:
        raise err
    assert elapsed < budget, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"


def test_criterion_1_counting(capsys):
    def body():
        literal = {}
        for n in (3, 5, 7, 9):
            count = strata.count_by_sigma(2, n).counts[P([1, 1])]
            assert count == n - 1, (n, count)
            assert brute_sigma_counts(2, n)[(1, 1)] == n - 1
        for n in (4, 5, 7, 8):
            counts = strata.count_by_sigma(3, n).counts
            brute = brute_sigma_counts(3, n)
            assert counts[P([1, 1, 1])] == (n - 1) * (n - 2) // 2 == brute[(1, 1, 1)]
            two_one = counts[P([2, 1])]
            # enumeration is the ground truth; it matches the multiplicity reading 3(n-1)
            assert two_one == brute[(2, 1)] == 3 * (n - 1) == strata.n_sigma_formula(3, n, P([2, 1]))
            literal[n] = (two_one, 3 * (n - 1) * (n - 2) // 2)
        off = {n: v for n, v in literal.items() if v[0] != v[1]}
        return f"sigma=(2,1) enumerated vs literal 3(n-1)(n-2)/2 differ at n={sorted(off)}"

    criterion(capsys, 1, "counting", 5.0, body)


def test_criterion_2_schur(capsys):
    def body():
        rng = np.random.default_rng(2)
        total = 0
        for r in (2, 3):
            mu = [cxla.from_turns(k / r) for k in range(r)]
            for n in (3, 5):
                for _ in range(500):
                    rep, _ = rejection_irreducible(r, n, rng)
                    an = np.linalg.matrix_power(rep.A, n)
                    xi = complex(an[0, 0])
                    assert cxla.frob(an - xi * np.eye(r)) <= 1e-8
                    assert min(abs(xi - z) for z in mu) <= 1e-8
                    total += 1
        return f"{total} irreducible samples"

    criterion(capsys, 2, "Schur scalar power", 30.0, body)


def test_criterion_3_homology(capsys):
    def body():
        for n in range(1, 7):
            prof = homology.homology(homology.build_su2_model(n))
            assert prof.betti == (1, 0, n), (n, prof.betti)
            assert all(t == () for t in prof.torsion)
        return "betti (1,0,n) for n=1..6"

    criterion(capsys, 3, "wedge of 2-spheres", 10.0, body)


def test_criterion_4_hyperbola_complement(capsys):
    def body():
        prof = homology.homology(homology.model_cp_minus_hyperbola())
        assert prof.betti[:3] == (1, 1, 1) and all(b == 0 for b in prof.betti[3:])
        return f"betti {prof.betti}"

    criterion(capsys, 4, "C^2 minus hyperbola", 1.0, body)


def _irreducible_sl2(n, rng):
    lam = cxla.from_turns(int(rng.integers(1, n)) / (2 * n))
    p = random_sl2(rng)
    pinv = np.linalg.inv(p)
    return reps.Representation(n, "SL(2,C)", p @ cxla.diag([lam, 1 / lam]) @ pinv, p @ random_sl2(rng) @ pinv)


def _reducible_sl2(n, rng):
    lam = complex(*rng.standard_normal(2))
    mu = complex(*rng.standard_normal(2))
    p = random_sl2(rng)
    pinv = np.linalg.inv(p)
    if rng.random() < 0.5:
        a, b = cxla.diag([lam, 1 / lam]), cxla.diag([mu, 1 / mu])
    else:
        a = np.array([[lam, rng.standard_normal()], [0, 1 / lam]])
        b = mu * np.eye(2) + np.linalg.matrix_power(a, n)
        b = b / np.sqrt(np.linalg.det(b))
    return reps.Representation(n, "SL(2,C)", p @ a @ pinv, p @ b @ pinv)


def test_criterion_5_retraction(capsys):
    def body():
        rng = np.random.default_rng(5)
        # (i) endpoints are SU(2) representations
        for make in (_irreducible_sl2, _reducible_sl2):
            for _ in range(200):
                n = int(rng.integers(2, 7))
                flow = retract.full_flow(make(n, rng), steps=8)
                assert reps.member_of("SU(2)", flow.final.A, 1e-8)
                assert reps.member_of("SU(2)", flow.final.B, 1e-8)
                assert reps.check_relation(flow.final, 1e-8)[0]
        # (ii) SU(2) inputs are fixed
        for k in range(200):
            n = int(rng.integers(2, 7))
            lam = cxla.from_turns(int(rng.integers(1, n)) / (2 * n))
            a = complex(*rng.standard_normal(2))
            a *= rng.random() / abs(a)
            x = math.sqrt(1 - abs(a) ** 2)
            rep = reps.Representation(n, "SU(2)", cxla.diag([lam, 1 / lam]), [[a, -x], [x, a.conjugate()]])
            if k % 2:
                rep = rep.conjugate(cxla.random_unitary(2, rng, special=True))
            flow = retract.full_flow(rep, steps=8)
            c0 = flow.initial_coords
            for s in flow.trace.samples:
                assert abs(s.a - c0.a) <= 1e-12 and abs(s.d - c0.d) <= 1e-12 and abs(s.p - c0.p) <= 1e-12
            if k % 2 == 0:
                assert cxla.frob(flow.final.A - rep.A) <= 1e-12 and cxla.frob(flow.final.B - rep.B) <= 1e-12
        # (iii) p = 0 stays 0 along stage_rescale
        worst_p = 0.0
        for _ in range(200):
            a = complex(*rng.standard_normal(2)) * math.exp(2 * rng.standard_normal())
            c = retract.IrredCoords(a, 1 / a, 0j, 1j)
            for t in np.linspace(0, 1, 33):
                worst_p = max(worst_p, abs(retract.stage_rescale(c, t).p))
        assert worst_p <= 1e-10
        # (iv) h1 h2 = r s
        tr = rng.random((10**5, 3)) * [4, 4, 1]
        worst_h = max(abs(retract.h1(r, s, t) * retract.h2(r, s, t) - r * s) for r, s, t in tr)
        assert worst_h <= 1e-12
        return f"max |p| {worst_p:.1e}, max h-residual {worst_h:.1e}"

    criterion(capsys, 5, "SL(2,C) -> SU(2) retraction", 60.0, body)


def test_criterion_6_pillowcase(capsys):
    def body():
        rnd = random.Random(6)
        den = 2**24
        for _ in range(10_000):
            s, t = Fraction(rnd.randrange(den), den), Fraction(rnd.randrange(den), den)
            assert symprod.pillowcase_map(s, t) == symprod.pillowcase_map(1 - s, 1 - t)
        pts = symprod.orbifold_points()
        assert len(set(pts)) == 4 and all(p.orbifold for p in pts)
        grid = {symprod.pillowcase_map(Fraction(i, 16), Fraction(j, 16)) for i in range(16) for j in range(16)}
        assert sum(p.orbifold for p in grid) == 4
        image = {p: symprod.monodromy_shift(p) for p in pts}
        assert all(image[q] != q and image[image[q]] == q for q in pts)
        cycles = {frozenset((q, image[q])) for q in pts}
        assert len(cycles) == 2
        return "two 2-cycles"

    criterion(capsys, 6, "pillowcase", 1.0, body)


def _classify(rep):
    sigma = strata.sigma_of(strata.eigenvalue_map(rep))
    return reps.decompose(rep).partition, sigma, reps.is_irreducible(rep)


def test_criterion_7_conjugation_invariance(capsys):
    def body():
        rng = np.random.default_rng(7)
        seen = set()
        for group, r, special in (("SU(2)", 2, True), ("SU(3)", 3, True), ("U(2)", 2, False)):
            for _ in range(500):
                rep = relation_sample(r, int(rng.integers(2, 6)), rng, special)
                before = _classify(rep)
                after = _classify(rep.conjugate(cxla.random_unitary(r, rng)))
                assert before == after, (group, before, after)
                seen.add((group, before[0].sizes, before[2]))
        assert any(irr for _, _, irr in seen) and any(not irr for _, _, irr in seen)
        return f"{len(seen)} distinct (group, partition, irreducible) classes"

    criterion(capsys, 7, "classification invariance", 30.0, body)


def test_criterion_8_snf_oracle(capsys):
    def body():
        rnd = random.Random(8)
        for _ in range(1000):
            rows, cols = rnd.randint(1, 4), rnd.randint(1, 4)
            m = [[rnd.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
            assert homology.smith_normal_form(m).divisors == minor_gcd_divisors(m), m
        return "1000 matrices"

    criterion(capsys, 8, "Smith normal form vs minor gcd", 5.0, body)
