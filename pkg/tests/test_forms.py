from fractions import Fraction
import random

import pytest

from quasigauge import cochain as cc
from quasigauge import forms as fm
from quasigauge.core import AlgebraElement, DimensionError
from quasigauge.quasialg import TwistedAlgebra, bullet, invert

OCT = TwistedAlgebra(cc.octonion_cochain())


def parity_twist(x):
    """(-1)^deg on each homogeneous part."""
    return fm.DifferentialForm({k: (-c if fm.popcount(k[1]) % 2 else c) for k, c in x.terms.items()}, x.n)


def leibniz_holds(x, y, product):
    lhs = fm.d(product(x, y))
    rhs = product(fm.d(x), y) + product(parity_twist(x), fm.d(y))
    return lhs == rhs


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_d_squared_and_leibniz(n):
    rng = random.Random(100 + n)
    for _ in range(100):
        x, y = fm.random_form(rng, n), fm.random_form(rng, n)
        assert fm.d(fm.d(x)) == fm.DifferentialForm.zero(n)
        assert leibniz_holds(x, y, fm.wedge)


def test_leibniz_twisted_octonion():
    rng = random.Random(7)
    for _ in range(100):
        x, y = fm.random_form(rng, 3), fm.random_form(rng, 3)
        assert leibniz_holds(x, y, lambda p, q: fm.bullet_wedge(p, q, OCT))


def test_d_matches_position_space():
    rng = random.Random(8)
    for _ in range(20):
        f = AlgebraElement({rng.randrange(16): Fraction(rng.randint(-4, 4)) for _ in range(5)}, 4)
        assert fm.d(f) == fm.d_position(f)


def test_tau_relations():
    n = 3
    t1, t2 = fm.tau(1, n), fm.tau(2, n)
    u, v = AlgebraElement.basis(1, n), AlgebraElement.basis(2, n)
    assert fm.wedge(t1, t2) == -fm.wedge(t2, t1)
    assert fm.wedge(t1, t1) == fm.DifferentialForm.zero(n)
    assert fm.wedge(t1, u) == -fm.wedge(u, t1)
    assert fm.wedge(t1, v) == fm.wedge(v, t1)
    assert fm.d(fm.theta(n)) == fm.DifferentialForm.zero(n)


def test_twisted_octonion_relations():
    u, v = AlgebraElement.basis(1, 3), AlgebraElement.basis(2, 3)
    du, dv = fm.d(u), fm.d(v)
    bw = lambda x, y: fm.bullet_wedge(x, y, OCT)
    assert bw(du, u) == -bw(u, du)
    assert bw(du, dv) == bw(dv, du)
    assert bw(du, dv) != fm.DifferentialForm.zero(3)
    taus = fm.bullet_invariant_forms(OCT)
    assert taus == tuple(fm.tau(i, 3) for i in (1, 2, 3))
    assert Fraction(1, 2) * bw(invert(u), du) == fm.tau(1, 3)
    assert fm.classical_invariant_forms(3) == tuple(fm.tau(i, 3) for i in (1, 2, 3))


def test_bullet_wedge_on_functions_is_bullet():
    rng = random.Random(9)
    for _ in range(10):
        x = AlgebraElement({rng.randrange(8): Fraction(rng.randint(-3, 3)) for _ in range(3)}, 3)
        y = AlgebraElement({rng.randrange(8): Fraction(rng.randint(-3, 3)) for _ in range(3)}, 3)
        assert fm.bullet_wedge(x, y, OCT) == fm.as_form(bullet(x, y, OCT))


def test_exact_preimage():
    rng = random.Random(10)
    for _ in range(20):
        f = AlgebraElement({rng.randrange(1, 8): Fraction(rng.randint(-3, 3)) for _ in range(3)}, 3)
        g = fm.exact_preimage(fm.d(f))
        assert g is not None and fm.d(g) == fm.d(f)
    assert fm.exact_preimage(fm.tau(1, 3)) is None


def test_format_and_json():
    u = AlgebraElement.basis(1, 3)
    x = fm.wedge(u, fm.tau(1, 3)) * 2 - fm.tau(2, 3)
    assert fm.format_form(x) == "2*u*tau[1] - tau[2]"
    assert fm.DifferentialForm.from_json(x.to_json()) == x


def test_dimension_errors():
    with pytest.raises(DimensionError):
        fm.wedge(fm.tau(1, 2), fm.tau(1, 3))
    with pytest.raises(ValueError):
        fm.tau(4, 3)
