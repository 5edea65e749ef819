from fractions import Fraction
from itertools import product

import pytest

from quasigauge import cochain as cc


def bits(x, n):
    return [(x >> k) & 1 for k in range(n)]


def octonion_reference(a, b):
    """Direct transcription of the octonion cochain, independent of ExponentForm."""
    a1, a2, a3 = bits(a, 3)
    b1, b2, b3 = bits(b, 3)
    e = a1 * (b1 + b2 + b3) + a2 * (b2 + b3) + a3 * b3 + a1 * b2 * b3 + b1 * a2 * b3 + b1 * b2 * a3
    return (-1) ** (e % 2)


def triple(a, b, c):
    A, B, C = bits(a, 3), bits(b, 3), bits(c, 3)
    cx = [B[1] * C[2] + B[2] * C[1], B[2] * C[0] + B[0] * C[2], B[0] * C[1] + B[1] * C[0]]
    return sum(x * y for x, y in zip(A, cx)) % 2


def position_reference(F, n):
    """F(y,z) = sum_{a,b} F(a,b)(-1)^(a.y + b.z), by the quadruple loop."""
    N = 1 << n
    out = {}
    for y, z in product(range(N), repeat=2):
        s = 0
        for a, b in product(range(N), repeat=2):
            s += F(a, b) * (-1) ** (bin(a & y).count("1") + bin(b & z).count("1"))
        out[y, z] = s
    return out


def test_octonion_cochain_matches_transcription():
    F = cc.octonion_cochain()
    assert all(F.value(a, b) == octonion_reference(a, b) for a in range(8) for b in range(8))


def test_coboundary_is_triple_product():
    for variant in (False, True):
        phi = cc.coboundary(cc.octonion_cochain(variant))
        assert all(phi.value(a, b, c) == (-1) ** triple(a, b, c) for a, b, c in product(range(8), repeat=3))
    assert cc.coboundary(cc.octonion_cochain()).table == cc.triple_product_associator().table


def test_cocycle_checks():
    assert cc.is_cocycle(cc.coboundary(cc.octonion_cochain()))
    for n in range(1, 5):
        assert cc.coboundary(cc.clifford_cochain(n)).is_trivial()
    # satisfies the identity but is not normalized
    const = cc.Associator(1, table=[-1] * 8)
    assert not cc.is_cocycle(const)
    # a non-cocycle
    bad = cc.Associator(2, table=[1] * 63 + [-1])
    assert cc.cocycle_failures(bad)


def test_cochain_validation():
    with pytest.raises(ValueError):
        cc.Cochain(1, table=[1, 1, 1, 0])
    with pytest.raises(ValueError):
        cc.Cochain(1, table=[-1, 1, 1, 1])


def test_cochain_json_roundtrip():
    for F in (cc.octonion_cochain(), cc.clifford_cochain(3), cc.Cochain(1, table=[1, 1, 1, Fraction(1, 2)])):
        assert cc.Cochain.from_json(F.to_json()) == F


@pytest.mark.parametrize("name", ["octonion", "variant", "clifford-3", "clifford-2"])
def test_fourier_cochain_two_routes(name):
    F = {"octonion": cc.octonion_cochain(), "variant": cc.octonion_cochain(True),
         "clifford-3": cc.clifford_cochain(3), "clifford-2": cc.clifford_cochain(2)}[name]
    P = cc.fourier_cochain(F)
    ref = position_reference(F.value, F.n)
    N = 1 << F.n
    assert all(P.value(y, z) == ref[y, z] for y in range(N) for z in range(N))


def test_clifford_position_form():
    for n in range(1, 6):
        assert cc.fourier_mismatches(cc.clifford_cochain(n), cc.clifford_position_form(n)) == []
    form = cc.clifford_position_form(3)
    for y, z in product(range(8), repeat=2):
        Y, Z = bits(y, 3), bits(z, 3)
        e = (Y[0] + Y[1]) * Z[0] + (Y[1] + Y[2]) * Z[1] + Y[2] * Z[2]
        assert form(y, z) == (-1) ** (e % 2)


def test_octonion_position_form_discrepancy():
    # the transposed-cubic cochain has exactly the displayed position form,
    # the default one differs on 18 pairs
    assert cc.fourier_mismatches(cc.octonion_cochain(True), cc.octonion_position_form()) == []
    assert len(cc.fourier_mismatches(cc.octonion_cochain(), cc.octonion_position_form())) == 18


def test_octonion_self_dual_up_to_relabelling():
    assert cc.fourier_relabellings(cc.octonion_cochain()) == [((0, 2, 1), True)]
    assert cc.fourier_relabellings(cc.octonion_cochain(True)) == [((1, 0, 2), True)]
    assert cc.fourier_relabellings(cc.clifford_cochain(3)) == []


def test_fit_exponent_form_recovers_cochain():
    for F in (cc.octonion_cochain(), cc.octonion_cochain(True), cc.clifford_cochain(4)):
        form = cc.fit_exponent_form(F.value, F.n)
        N = 1 << F.n
        assert all(form(a, b) == F.value(a, b) for a in range(N) for b in range(N))


def test_describe_exponent():
    assert cc.describe_exponent(cc.clifford_position_form(2), "yz") == "y1z1 + y2z1 + y2z2"
