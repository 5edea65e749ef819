from fractions import Fraction
import random

import pytest

from quasigauge import cochain as cc
from quasigauge import gauge as gg
from quasigauge.core import AlgebraElement
from quasigauge.forms import DifferentialForm, bullet_wedge, d, wedge
from quasigauge.quasialg import TwistedAlgebra

OCT = TwistedAlgebra(cc.octonion_cochain())
ZERO3 = DifferentialForm.zero(3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fundamental_lemma(n):
    rng = random.Random(n)
    for _ in range(40):
        alpha, gamma = gg.random_connection(rng, n), gg.random_gauge(rng, n)
        assert gg.curvature(gg.gauge_transform(alpha, gamma)) == gg.conjugate(gg.curvature(alpha), gamma)


def test_component_forms_agree():
    rng = random.Random(11)
    for _ in range(30):
        alpha, gamma = gg.random_connection(rng, 3), gg.random_gauge(rng, 3)
        F = gg.curvature(alpha)
        assert gg.components_to_form(gg.curvature_components(alpha), 3) == F
        assert gg.components_to_form(gg.curvature_phi_components(alpha), 3) == F
        assert gg.gauge_transform(alpha, gamma).phi() == gg.transformed_phi(alpha, gamma)


def test_gauge_transforms_compose():
    rng = random.Random(12)
    for _ in range(20):
        alpha = gg.random_connection(rng, 2)
        g1, g2 = gg.random_gauge(rng, 2), gg.random_gauge(rng, 2)
        twice = gg.gauge_transform(gg.gauge_transform(alpha, g1), g2)
        assert twice == gg.gauge_transform(alpha, gg.compose(g1, g2))


def test_pure_gauge_flat():
    rng = random.Random(13)
    for _ in range(20):
        gamma = gg.random_gauge(rng, 3)
        assert gg.curvature(gg.pure_gauge(gamma)) == ZERO3
        assert gg.gauge_transform(gg.Connection.zero(3), gamma) == gg.pure_gauge(gamma)


def test_twist_equivalence_octonion():
    rng = random.Random(14)
    for _ in range(30):
        alpha, gamma = gg.random_connection(rng, 3), gg.random_gauge(rng, 3)
        assert gg.curvature_twisted(alpha, OCT) == gg.curvature(alpha)
        plain = gg.gauge_transform(alpha, gamma)
        assert gg.gauge_transform_twisted(alpha, gamma, OCT) == plain
        assert gg.gauge_transform_twisted(alpha, gamma, OCT, factorized=True) == plain


def test_twist_equivalence_clifford():
    alg = TwistedAlgebra(cc.clifford_cochain(3))
    rng = random.Random(15)
    for _ in range(10):
        alpha, gamma = gg.random_connection(rng, 3), gg.random_gauge(rng, 3)
        assert gg.curvature_twisted(alpha, alg) == gg.curvature(alpha)
        assert gg.gauge_transform_twisted(alpha, gamma, alg) == gg.gauge_transform(alpha, gamma)


def test_weights():
    for F in (cc.octonion_cochain(), cc.clifford_cochain(3)):
        assert gg.weights_agree(TwistedAlgebra(F))
    # the transposed cubic is not linear in the first argument
    assert not gg.weights_agree(TwistedAlgebra(cc.octonion_cochain(True)))
    # dropping the inner F(a,b) breaks covariance
    rng = random.Random(16)
    failures = 0
    for _ in range(10):
        alpha, gamma = gg.random_connection(rng, 3), gg.random_gauge(rng, 3)
        body = gg.twisted_triple(gamma.gamma_inv, alpha.alpha, gamma.gamma, OCT, gg.weight_outer_only(OCT))
        got = gg.Connection(body + gg.twisted_pure_gauge(gamma, OCT))
        failures += got != gg.gauge_transform(alpha, gamma)
    assert failures > 0


def test_worked_example():
    lam, mu = Fraction(2), Fraction(1)
    u, v = AlgebraElement.basis(1, 3), AlgebraElement.basis(2, 3)
    gamma = lam * u + mu * v
    pg = gg.twisted_pure_gauge(gamma, OCT)
    dudv = bullet_wedge(d(u), d(v), OCT)
    k = 2 * lam * mu / (lam ** 2 - mu ** 2)
    assert d(pg) == -k * dudv
    assert gg.twisted_product(pg, pg, OCT) == k * dudv
    assert gg.curvature_twisted(gg.Connection(pg), OCT) == ZERO3


def test_naive_formula_not_flat():
    u, v, w = (AlgebraElement.basis(1 << k, 3) for k in range(3))
    gamma = 3 * u + v + w
    assert gg.naive_pure_gauge_curvature(gamma, OCT) != ZERO3
    assert gg.curvature_twisted(gg.Connection(gg.twisted_pure_gauge(gamma, OCT)), OCT) == ZERO3


def test_amplification():
    rng = random.Random(17)
    for _ in range(10):
        alpha = gg.random_connection(rng, 3)
        total = sum((gg.amplified_curvature(alpha, a) for a in range(8)), ZERO3)
        assert total == gg.curvature(alpha)
        pieces = sum((gg.amplify(alpha, a).alpha for a in range(8)), ZERO3)
        assert pieces == alpha.alpha


def test_matter_covariance():
    rng = random.Random(18)
    for _ in range(20):
        alpha, gamma = gg.random_connection(rng, 3), gg.random_gauge(rng, 3)
        sigma = gg.MatterField([gg.random_gauge(rng, 3).gamma, gg.random_gauge(rng, 3).gamma])
        lhs = gg.covariant_derivative(gg.matter_transform(sigma, gamma), gg.gauge_transform(alpha, gamma))
        rhs = [wedge(x, gamma.gamma) for x in gg.covariant_derivative(sigma, alpha)]
        assert lhs == rhs
        assert gg.matter_transform_twisted(sigma, gamma, OCT) == gg.matter_transform(sigma, gamma)
        assert gg.covariant_derivative_twisted(sigma, alpha, OCT) == gg.covariant_derivative(sigma, alpha)


def test_constant_connections():
    c = gg.constant_connection([1, 2, 3])
    assert gg.curvature(c) == ZERO3
    assert gg.curvature(gg.flat_reference(3)) == ZERO3
    assert [p for p in c.phi()] == [AlgebraElement.constant(Fraction(k), 3) for k in (1, 2, 3)]


def test_connection_json_roundtrip():
    rng = random.Random(19)
    alpha = gg.random_connection(rng, 3)
    assert gg.Connection.from_json(alpha.to_json()) == alpha


def test_unitarity():
    u = AlgebraElement.basis(1, 3)
    assert gg.GaugeTransform(u).is_unitary()
    assert not gg.GaugeTransform(2 * u).is_unitary()


def test_twist_equivalence_variant_cochain():
    alg = TwistedAlgebra(cc.octonion_cochain(True))
    rng = random.Random(20)
    for _ in range(10):
        alpha, gamma = gg.random_connection(rng, 3), gg.random_gauge(rng, 3)
        assert gg.curvature_twisted(alpha, alg) == gg.curvature(alpha)
        assert gg.gauge_transform_twisted(alpha, gamma, alg) == gg.gauge_transform(alpha, gamma)
