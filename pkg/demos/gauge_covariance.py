"""
Gauge fields on the octonions
=============================

A connection is a 1-form alpha = sum_i alpha^i tau_i on Z_2^3. We compare the
ordinary gauge theory with its twisted version on the octonions, where every
product carries weights built from the cochain.
"""

import random
from fractions import Fraction

from quasigauge import cochain as cc
from quasigauge import gauge as gg
from quasigauge.core import AlgebraElement, format_element
from quasigauge.forms import bullet_wedge, d, format_form
from quasigauge.quasialg import TwistedAlgebra, invert

alg = TwistedAlgebra(cc.octonion_cochain())
rng = random.Random(2024)

alpha = gg.random_connection(rng, 3)
gamma = gg.random_gauge(rng, 3)
print("alpha =", format_form(alpha.alpha))
print("gamma =", format_element(gamma.gamma))

# curvature transforms by conjugation
F = gg.curvature(alpha)
lemma = gg.curvature(gg.gauge_transform(alpha, gamma)) == gg.conjugate(F, gamma)
print("F(alpha^gamma) = gamma^-1 F gamma:", lemma)

# the twisted theory gives the same answers
print("twisted curvature agrees:", gg.curvature_twisted(alpha, alg) == F)
print("twisted transform agrees:", gg.gauge_transform_twisted(alpha, gamma, alg) == gg.gauge_transform(alpha, gamma))

# a worked pure gauge: gamma = 2u + v
u, v = AlgebraElement.basis(1, 3), AlgebraElement.basis(2, 3)
g = 2 * u + v
print("gamma^-1 =", format_element(invert(g)))
pg = gg.twisted_pure_gauge(g, alg)
dudv = bullet_wedge(d(u), d(v), alg)
print("d(pure gauge) = -4/3 du.dv:", d(pg) == Fraction(-4, 3) * dudv)
print("twisted square = +4/3 du.dv:", gg.twisted_product(pg, pg, alg) == Fraction(4, 3) * dudv)
print("curvature:", format_form(gg.curvature_twisted(gg.Connection(pg), alg)))

# copying the associative formula without weights does not give a flat field
g = 3 * u + v + AlgebraElement.basis(4, 3)
print("naive curvature of g^-1.dg for g = 3u + v + w:", format_form(gg.naive_pure_gauge_curvature(g, alg)))
