"""Acceptance suite: one test per criterion, each printing a PASS or FAIL line.

Run directly (python3 tests/test_acceptance.py) or under pytest, where the
lines are repeated in the terminal summary. Criteria 4 and 5 do not hold as
stated; their tests check the literal statement, print FAIL with a diagnosis,
and are marked as strict expected failures.
"""

import math
import os
import random
import sys
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from quasigauge import cli  # noqa: E402
from quasigauge import cochain as cc  # noqa: E402
from quasigauge import forms as fm  # noqa: E402
from quasigauge import fuzzy as fz  # noqa: E402
from quasigauge import gauge as gg  # noqa: E402
from quasigauge import moduli as md  # noqa: E402
from quasigauge.core import AlgebraElement  # noqa: E402
from quasigauge.quasialg import (  # noqa: E402
    TwistedAlgebra,
    associator_identity,
    bullet,
    compare_with_printed,
    invert,
    multiplication_table,
    star_expand,
    star_mismatches,
)

RESULTS = {}


def report(num, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {detail}"
    RESULTS[num] = line
    print(line)
    return ok


def best_time(fn, repeat=7):
    best = math.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bits(x, n):
    return [(x >> k) & 1 for k in range(n)]


def triple_product(a, b, c):
    A, B, C = bits(a, 3), bits(b, 3), bits(c, 3)
    cx = [B[1] * C[2] + B[2] * C[1], B[2] * C[0] + B[0] * C[2], B[0] * C[1] + B[1] * C[0]]
    return (-1) ** (sum(x * y for x, y in zip(A, cx)) % 2)


# ---------------------------------------------------------------- 1


def test_criterion_01_octonion_structure():
    F = cc.octonion_cochain()

    def build():
        alg = TwistedAlgebra(F)
        return alg, multiplication_table(alg)

    alg, table = build()
    elapsed = best_time(build)
    u, v, w = (AlgebraElement.basis(1 << k, 3) for k in range(3))
    one = AlgebraElement.one(3)
    k = bullet(u, v, alg)
    ok = (all(bullet(x, x, alg) == -one for x in (u, v, w))
          and bullet(u, v, alg) == -bullet(v, u, alg)
          and bullet(k, u, alg) == v
          and len(table) == 8 and all(len(r) == 8 for r in table)
          and elapsed < 1e-3)
    report(1, ok, f"u.u=v.v=w.w=-1, u.v=-v.u, k.i=j; table built in {elapsed * 1e3:.3f} ms (< 1 ms)")
    assert ok


# ---------------------------------------------------------------- 2


def test_criterion_02_associator_law():
    F = cc.octonion_cochain()

    def check():
        alg = TwistedAlgebra(F)
        return all(associator_identity(a, b, c, alg) for a, b, c in product(range(8), repeat=3)), alg

    (law, alg), elapsed = check(), best_time(check)
    display = all(alg.phi.value(a, b, c) == triple_product(a, b, c) for a, b, c in product(range(8), repeat=3))
    ok = law and display and elapsed < 1e-2
    report(2, ok, f"512 triples rebracket by Phi; Phi = (-1)^(a.(b x c)) bit for bit: {display}; "
                  f"{elapsed * 1e3:.2f} ms (< 10 ms)")
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_03_cocycle():
    oct_ok = cc.is_cocycle(cc.coboundary(cc.octonion_cochain()))
    cl_ok = all(cc.coboundary(cc.clifford_cochain(n)).is_trivial() for n in range(1, 5))
    ok = oct_ok and cl_ok
    report(3, ok, f"octonion Phi passes the 3-cocycle identity on 4096 quadruples: {oct_ok}; "
                  f"Clifford Phi = 1 for n <= 4: {cl_ok}")
    assert ok


# ---------------------------------------------------------------- 4


@pytest.mark.xfail(strict=True, reason="the octonion cochain's transform differs from the displayed "
                                       "position form on 18 pairs; see the decisions ledger")
def test_criterion_04_fourier_self_duality():
    oct_bad = cc.fourier_mismatches(cc.octonion_cochain(), cc.octonion_position_form())
    cl_bad = cc.fourier_mismatches(cc.clifford_cochain(3), cc.clifford_position_form(3))
    variant_bad = cc.fourier_mismatches(cc.octonion_cochain(True), cc.octonion_position_form())
    relab = cc.fourier_relabellings(cc.octonion_cochain())
    ok = not oct_bad and not cl_bad
    report(4, ok, f"octonion transform vs displayed form: {len(oct_bad)}/64 pairs differ; "
                  f"Clifford n=3: {len(cl_bad)}/64 differ")
    print(f"  transposed-cubic cochain (same Phi): {len(variant_bad)}/64 pairs differ")
    print(f"  octonion transform equals F after relabelling {relab}")
    assert ok


# ---------------------------------------------------------------- 5


def _star_part_a():
    fails = 0
    for F in (cc.octonion_cochain(), cc.clifford_cochain(3)):
        alg = TwistedAlgebra(F)
        fails += len(star_mismatches(star_expand(cc.fourier_cochain(F)), alg))
    return fails


def test_criterion_05a_star_reproduces_bullet():
    fails = _star_part_a()
    ok = fails == 0
    print(f"{'PASS' if ok else 'FAIL'} criterion  5a: star_expand reproduces bullet on all 64x64 basis pairs "
          f"(octonion and Clifford-3), {fails} failures")
    assert ok


@pytest.mark.xfail(strict=True, reason="printed expansion tables disagree with the recomputation; "
                                       "see the decisions ledger")
def test_criterion_05_star_expansion():
    a_fails = _star_part_a()
    oct_op = star_expand(cc.fourier_cochain(cc.octonion_cochain()))
    oct_diff = compare_with_printed(oct_op, "octonion")
    cl_op = star_expand(cc.fourier_cochain(cc.clifford_cochain(3)))
    cl_diff = compare_with_printed(cl_op, "clifford-3")
    typo = (0, 0b011)
    typo_zero = cl_op.coefficient(*typo) == 0
    cl_only_flagged = [(e[0], e[1]) for e in cl_diff.entries] == [typo]
    ok = a_fails == 0 and oct_diff.matches and cl_only_flagged and typo_zero
    report(5, ok, f"reproduces bullet: {a_fails == 0}; printed octonion table: {len(oct_diff.entries)} "
                  f"mismatching terms; printed Clifford-3 table: {len(cl_diff.entries)} mismatching terms; "
                  f"recomputed 1(x)d1d2 coefficient is {cl_op.coefficient(*typo)}")
    print(f"  octonion table equals the recomputation after relabelling {oct_diff.equivalences}")
    variant = compare_with_printed(star_expand(cc.fourier_cochain(cc.octonion_cochain(True))), "octonion")
    print(f"  transposed-cubic cochain: {len(variant.entries)} mismatches, equal after {variant.equivalences}")
    print(f"  Clifford-3 table: flagged term reported, {len(cl_diff.unexplained())} further mismatches, "
          f"no relabelling reconciles it: {not cl_diff.equivalences}")
    assert ok


# ---------------------------------------------------------------- 6


def _parity_twist(x):
    return fm.DifferentialForm({k: (-c if bin(k[1]).count("1") % 2 else c) for k, c in x.terms.items()}, x.n)


def test_criterion_06_calculus():
    rng = random.Random(6)
    checked = 0
    ok = True
    for n in (1, 2, 3, 4):
        for _ in range(250):
            x, y = fm.random_form(rng, n), fm.random_form(rng, n)
            ok &= not fm.d(fm.d(x))
            ok &= fm.d(fm.wedge(x, y)) == fm.wedge(fm.d(x), y) + fm.wedge(_parity_twist(x), fm.d(y))
            checked += 1
    alg = TwistedAlgebra(cc.octonion_cochain())
    u, v = AlgebraElement.basis(1, 3), AlgebraElement.basis(2, 3)
    du, dv = fm.d(u), fm.d(v)
    bw = lambda p, q: fm.bullet_wedge(p, q, alg)  # noqa: E731
    rel = (bw(du, u) == -bw(u, du) and bw(du, dv) == bw(dv, du)
           and Fraction(1, 2) * bw(invert(u), du) == fm.tau(1, 3))
    ok = bool(ok) and rel
    report(6, ok, f"d^2 = 0 and graded Leibniz on {checked} random mixed form pairs (n <= 4); "
                  f"du.u = -u.du, du.dv = dv.du, tau1 = 1/2 u^-1.du: {rel}")
    assert ok


# ---------------------------------------------------------------- 7


def test_criterion_07_fundamental_lemma():
    rng = random.Random(7)
    ok = True
    for n in (2, 3):
        for _ in range(50):
            alpha, gamma = gg.random_connection(rng, n), gg.random_gauge(rng, n)
            ok &= gg.curvature(gg.gauge_transform(alpha, gamma)) == gg.conjugate(gg.curvature(alpha), gamma)
    report(7, ok, "F(alpha^gamma) = gamma^-1 F(alpha) gamma on 100 random exact pairs, n = 2, 3")
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_08_twist_equivalence():
    rng = random.Random(8)
    alg = TwistedAlgebra(cc.octonion_cochain())
    curv = gt = 0
    for _ in range(100):
        alpha, gamma = gg.random_connection(rng, 3), gg.random_gauge(rng, 3)
        curv += gg.curvature_twisted(alpha, alg) == gg.curvature(alpha)
        gt += gg.gauge_transform_twisted(alpha, gamma, alg) == gg.gauge_transform(alpha, gamma)
    ok = curv == 100 and gt == 100
    report(8, ok, f"twisted curvature equal on {curv}/100, twisted gauge transform equal on {gt}/100 (octonion)")
    assert ok


# ---------------------------------------------------------------- 9


def test_criterion_09_worked_example():
    alg = TwistedAlgebra(cc.octonion_cochain())
    lam, mu = Fraction(2), Fraction(1)
    u, v = AlgebraElement.basis(1, 3), AlgebraElement.basis(2, 3)
    gamma = lam * u + mu * v
    k = 2 * lam * mu / (lam ** 2 - mu ** 2)
    dudv = fm.bullet_wedge(fm.d(u), fm.d(v), alg)
    pg = gg.twisted_pure_gauge(gamma, alg)
    inv_ok = invert(gamma) == (lam * u - mu * v) / (lam ** 2 - mu ** 2)
    d_ok = fm.d(pg) == -k * dudv
    sq_ok = gg.twisted_product(pg, pg, alg) == k * dudv
    total_ok = not gg.curvature_twisted(gg.Connection(pg), alg)
    ok = inv_ok and d_ok and sq_ok and total_ok
    report(9, ok, f"gamma = 2u + v: inverse {inv_ok}, d(pure gauge) = -4/3 du.dv {d_ok}, "
                  f"twisted square = +4/3 du.dv {sq_ok}, total curvature 0 {total_ok}")
    assert ok


# ---------------------------------------------------------------- 10


def test_criterion_10_fuzzy_products():
    coord = True
    for n in range(1, 5):
        for m in range(1, 6):
            F = fz.DiffCochain.negative_power(n, m, Fraction(3, 2))
            for mu, nu in product(range(1, n + 1), repeat=2):
                x, y = fz.Jet.variable(mu, n), fz.Jet.variable(nu, n)
                coord &= fz.bullet_jet(x, y, F) == x * y + (F.lam if mu == nu else 0)
    rng = random.Random(10)
    defects = 0
    for t in range(100):
        n, K = rng.randint(1, 3), rng.randint(1, 4)
        F = (fz.DiffCochain.negative_power(n, rng.randint(1, 5), Fraction(rng.randint(1, 4), 2)) if t % 2
             else fz.DiffCochain.gaussian(n, Fraction(rng.randint(1, 4), 2)))
        a, b, c = (fz.random_jet(rng, n, K) for _ in range(3))
        defects += bool(fz.associator_jet(a, b, c, F))
    moyal = True
    for eta in (None, [[0, 1], [-1, 0]]):
        F = fz.DiffCochain.exponential(2, Fraction(1, 2), eta)
        for _ in range(10):
            a, b, c = (fz.random_jet(rng, 2, 4).with_K(None) for _ in range(3))
            moyal &= fz.bullet_jet(fz.bullet_jet(a, b, F), c, F) == fz.bullet_jet(a, fz.bullet_jet(b, c, F), F)
    ok = coord and defects == 0 and moyal
    report(10, ok, f"x_mu.x_nu = x_mu x_nu + lambda delta for n <= 4, m <= 5: {coord}; "
                   f"associator defect nonzero on {defects}/100 triples; exponential cochains associative: {moyal}")
    assert ok


# ---------------------------------------------------------------- 11


def test_criterion_11_fuzzy_twist_equivalence():
    rng = random.Random(11)
    curv = gt = flat = 0
    trials = 20
    for t in range(trials):
        n, K = rng.randint(1, 2), rng.randint(2, 4)
        F = fz.DiffCochain.negative_power(n, rng.randint(1, 3)) if t % 2 else fz.DiffCochain.gaussian(n)
        alpha = fz.connection([fz.random_jet(rng, n, K) for _ in range(n)])
        gamma = fz.random_jet(rng, n, K, constant=rng.randint(1, 3))
        curv += fz.curvature_fuzzy(alpha, F) == fz.curvature_fuzzy_untwisted(alpha)
        gt += fz.gauge_transform_fuzzy(alpha, gamma, F) == fz.gauge_transform_fuzzy_untwisted(alpha, gamma)
        flat += not fz.curvature_fuzzy(fz.twisted_pure_gauge_fuzzy(gamma, F), F)
    ok = curv == gt == flat == trials
    report(11, ok, f"fuzzy curvature equal {curv}/{trials}, gauge transform equal {gt}/{trials}, "
                   f"pure-gauge curvature zero {flat}/{trials}")
    assert ok


# ---------------------------------------------------------------- 12


def test_criterion_12_moduli():
    start = time.perf_counter()
    families = [
        md.constant_maximal((1.0, 2.0, 0.5)),
        md.split(1, md.constant_maximal((1.0, 2.0)), md.zero_family(2)),
        md.split(3, md.constant_maximal((0.7, 1.3)), md.constant_maximal((2.0, 0.4))),
        md.case_iii((1.0, 2.0, 3.0)),
        md.case_iii((1.0, 2.0, 3.0), chirality=-1),
    ]
    fam_ok = True
    worst_res = 0.0
    for cls in families:
        c = md.canonical_flat(cls)
        worst_res = max(worst_res, md.flatness_residual(c))
        fam_ok &= md.flatness_residual(c) < 1e-12 and md.classify_flat(c).same_as(cls)
        for g in md.cube_symmetries(3):
            moved = g.apply(c)
            got = md.classify_flat(moved)
            fam_ok &= got.kind == cls.kind and sorted(got.params) == sorted(cls.params)
    rng = np.random.default_rng(12)
    drift = 0.0
    for cls in families:
        c = md.canonical_flat(cls)
        lam = md.gauge_invariants(c)
        for _ in range(100):
            drift = max(drift, float(np.max(np.abs(md.gauge_invariants(md.gauge_transform(c, md.random_unitary_gauge(rng, 3))) - lam))))
    s2 = md.search_flat(2, [0, 1, 2], [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    s3 = md.search_flat(3, [0, 1], [0, math.pi])
    elapsed = time.perf_counter() - start
    ok = fam_ok and drift < 1e-10 and not s2.unclassified and not s3.unclassified and elapsed < 300
    report(12, ok, f"families flat (worst residual {worst_res:.1e}) and classify back: {fam_ok}; "
                   f"lambda drift {drift:.1e}; n=2 search {len(s2)} flat of {s2.scanned}, "
                   f"n=3 search {len(s3)} flat of {s3.scanned}, unclassified {len(s2.unclassified) + len(s3.unclassified)}; "
                   f"{elapsed:.1f} s")
    print(f"  n=2 counts {s2.counts()}; n=3 counts {s3.counts()}")
    assert ok


# ---------------------------------------------------------------- 13


def test_criterion_13_parser():
    ctx = cli.make_context("octonion")
    left = cli.evaluate_text("(u*v)*w", ctx)
    right = cli.evaluate_text("u*(v*w)", ctx)
    phi = ctx.alg.phi(( 1, 0, 0), (0, 1, 0), (0, 0, 1))
    ok = phi == -1 and left == phi * right and left != right
    report(13, ok, f"(u*v)*w = {cli.format_value(left)}, u*(v*w) = {cli.format_value(right)}, Phi = {phi}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
