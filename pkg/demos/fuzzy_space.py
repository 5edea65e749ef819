"""
A fuzzy deformation of R^n
==========================

A cochain F = f(box), with box = sum_ij eta_ij d^i (x) d^j, deforms the
product of polynomials. We work with jets, polynomials truncated at a total
degree K, which is enough to invert gauge functions.
"""

import random
from fractions import Fraction

from quasigauge import fuzzy as fz

n, K = 2, 4
F = fz.DiffCochain.negative_power(n, m=2, lam=Fraction(1))
x1, x2 = fz.Jet.variable(1, n, K), fz.Jet.variable(2, n, K)
print("x1.x1 =", fz.bullet_jet(x1, x1, F))
print("x1.x2 =", fz.bullet_jet(x1, x2, F))

# the product is not associative, but the associator accounts for it exactly
x = fz.Jet.variable(1, 1)
G = fz.DiffCochain.negative_power(1, 2)
left = fz.bullet_jet(fz.bullet_jet(x, x, G), x * x, G)
right = fz.bullet_jet(x, fz.bullet_jet(x, x * x, G), G)
print("(x.x).x^2 - x.(x.x^2) =", left - right)
print("associator defect:", fz.associator_jet(x, x, x * x, G))

# an exponential profile with antisymmetric eta is the Moyal product
M = fz.DiffCochain.exponential(n, Fraction(1, 2), [[0, 1], [-1, 0]])
print("[x1, x2] =", fz.bullet_jet(x1, x2, M) - fz.bullet_jet(x2, x1, M))

# gauge theory: twisted and untwisted formulas agree
rng = random.Random(5)
alpha = fz.connection([fz.random_jet(rng, n, K) for _ in range(n)])
gamma = fz.random_jet(rng, n, K, constant=1)
print("alpha =", alpha)
print("curvature agrees:", fz.curvature_fuzzy(alpha, F) == fz.curvature_fuzzy_untwisted(alpha))
print("gauge transform agrees:", fz.gauge_transform_fuzzy(alpha, gamma, F) == fz.gauge_transform_fuzzy_untwisted(alpha, gamma))
print("pure gauge is flat:", not fz.curvature_fuzzy(fz.twisted_pure_gauge_fuzzy(gamma, F), F))
