from fractions import Fraction
from itertools import product
import random

import pytest

from quasigauge import cochain as cc
from quasigauge.core import AlgebraElement
from quasigauge.quasialg import (
    SingularGaugeElement,
    TwistedAlgebra,
    associator_identity,
    bullet,
    bullet_inverse,
    compare_with_printed,
    e_normalized,
    e_ordered_product,
    invert,
    multiplication_table,
    printed_operator,
    star_expand,
    star_mismatches,
    star_operator,
    twisted_convolution,
)

OCT = TwistedAlgebra(cc.octonion_cochain())


def basis(a, n=3):
    return AlgebraElement.basis(a, n)


def random_element(rng, n, terms=4):
    return AlgebraElement({rng.randrange(1 << n): Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(terms)}, n)


def test_octonion_relations():
    u, v, w = basis(1), basis(2), basis(4)
    one = AlgebraElement.one(3)
    for x in (u, v, w):
        assert bullet(x, x, OCT) == -one
    assert bullet(u, v, OCT) == -bullet(v, u, OCT)
    i, j = u, v
    k = bullet(i, j, OCT)
    assert bullet(k, i, OCT) == j
    assert bullet(j, k, OCT) == i


def test_octonion_is_division_algebra_table():
    table = multiplication_table(OCT)
    for a in range(8):
        row = [m for _, m in table[a]]
        assert sorted(row) == list(range(8))
        for b in range(1, 8):
            if a and a != b:
                assert table[a][b][0] == -table[b][a][0]


def test_associator_law_all_triples():
    assert all(associator_identity(a, b, c, OCT) for a, b, c in product(range(8), repeat=3))


def test_quaternions_associative():
    H = TwistedAlgebra(cc.quaternion_cochain())
    assert all(associator_identity(a, b, c, H) for a, b, c in product(range(4), repeat=3))
    i, j = basis(1, 2), basis(2, 2)
    assert bullet(i, j, H) == -bullet(j, i, H)


def test_normalized_basis_is_ordered_product():
    for a in range(8):
        assert e_ordered_product(a, OCT) == e_normalized(a)


def test_invert_position_space():
    rng = random.Random(3)
    for _ in range(20):
        g = random_element(rng, 3) + 7
        try:
            gi = invert(g)
        except SingularGaugeElement:
            continue
        assert g * gi == AlgebraElement.one(3)
        # the position inverse inverts the F-weighted convolution
        assert twisted_convolution(gi, g, OCT) == AlgebraElement.one(3)


def test_invert_worked_form():
    lam, mu = Fraction(2), Fraction(1)
    g = lam * basis(1) + mu * basis(2)
    assert invert(g) == (lam * basis(1) - mu * basis(2)) / (lam ** 2 - mu ** 2)
    with pytest.raises(SingularGaugeElement):
        invert(basis(1) + basis(2))


def test_bullet_inverse_differs_from_position_inverse():
    u = basis(1)
    assert bullet_inverse(u, OCT) == -u
    assert invert(u) == u
    g = 3 + basis(1)
    for side in ("left", "right"):
        gi = bullet_inverse(g, OCT, side)
        prod = bullet(gi, g, OCT) if side == "left" else bullet(g, gi, OCT)
        assert prod == AlgebraElement.one(3)


@pytest.mark.parametrize("F", [cc.octonion_cochain(), cc.octonion_cochain(True), cc.clifford_cochain(3),
                               cc.clifford_cochain(2), cc.trivial_cochain(2)])
def test_star_expansion_reproduces_bullet(F):
    alg = TwistedAlgebra(F)
    op = star_expand(cc.fourier_cochain(F))
    assert op == star_operator(alg)
    assert star_mismatches(op, alg) == []


def test_star_expansion_on_general_elements():
    rng = random.Random(5)
    op = star_operator(OCT)
    for _ in range(10):
        x, y = random_element(rng, 3), random_element(rng, 3)
        assert op(x, y) == bullet(x, y, OCT)


def test_star_unit_preservation():
    for F in (cc.octonion_cochain(), cc.clifford_cochain(3)):
        op = star_operator(TwistedAlgebra(F))
        assert op.coefficient(0, 0) == 1
        assert all(op.coefficient(0, T) == 0 for T in range(1, 8))
        assert all(op.coefficient(S, 0) == 0 for S in range(1, 8))


def test_printed_octonion_table_is_factor_transpose():
    default = compare_with_printed(star_operator(OCT), "octonion")
    variant = compare_with_printed(star_operator(TwistedAlgebra(cc.octonion_cochain(True))), "octonion")
    assert len(default.entries) == 32
    assert default.equivalences == [((2, 1, 0), False)]
    assert len(variant.entries) == 42
    assert variant.equivalences == [((0, 1, 2), True)]


def test_printed_clifford_table_diff():
    diff = compare_with_printed(star_operator(TwistedAlgebra(cc.clifford_cochain(3))), "clifford-3")
    flagged = diff.annotated_keys()
    assert flagged == {(0, 0b011)}
    entry = [e for e in diff.entries if (e[0], e[1]) == (0, 0b011)]
    assert entry and entry[0][2] == 0 and entry[0][3] != 0
    assert diff.equivalences == []
    assert len(diff.entries) == 31
    best = min(len(ExpansionDiffCount(diff.computed.relabelled(p, s), diff.printed))
               for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)) for s in (False, True))
    assert best == 14


def ExpansionDiffCount(a, b):
    return [k for k in set(a.terms) | set(b.terms) if a.terms.get(k, 0) != b.terms.get(k, 0)]


def test_printed_fixture_loads():
    op = printed_operator("octonion")
    assert op.coefficient(0, 0) == 1
    assert op.coefficient(7, 7) == Fraction(-1, 8)


def test_diff_json():
    diff = compare_with_printed(star_operator(TwistedAlgebra(cc.clifford_cochain(3))), "clifford-3")
    data = diff.to_json()
    assert data["matches"] is False
    assert sum(m["annotated"] for m in data["mismatches"]) == 1
