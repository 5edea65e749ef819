"""U(1) gauge fields on Z_2^n, untwisted and cochain-twisted.

Fields are stored by their value at 1. In the twisted theory every product
of homogeneous pieces of degrees a, b picks up the weight F(a,b) from the
deformed coproduct, which exactly cancels the F^-1(a,b) in the bullet
product; that cancellation is what the twist-equivalence checks confirm.
"""

from __future__ import annotations

from fractions import Fraction

from .core import AlgebraElement, DimensionError, as_mask
from .forms import DifferentialForm, as_form, bullet_wedge, d, partial_form, tau, theta, wedge
from .quasialg import TwistedAlgebra, bullet_inverse, invert

SCHEMA = "quasigauge.connection/1"


class Connection:
    """A degree-1 form alpha = sum_i alpha^i tau_i."""

    def __init__(self, alpha: DifferentialForm, backend: str = "exact"):
        alpha = as_form(alpha)
        if alpha and alpha.degrees() != {1}:
            raise ValueError(f"a connection must be a 1-form, got degrees {sorted(alpha.degrees())}")
        if backend not in ("exact", "float"):
            raise ValueError(f"unknown backend {backend!r}")
        self.alpha = alpha
        self.n = alpha.n
        self.backend = backend

    @classmethod
    def from_components(cls, comps, n: int | None = None):
        """alpha from a list [alpha^1, ..., alpha^n] of functions."""
        comps = list(comps)
        n = n or comps[0].n
        return cls(DifferentialForm.from_components({1 << i: c for i, c in enumerate(comps)}, n))

    @classmethod
    def from_phi(cls, phis, n: int | None = None):
        """alpha = phi - theta from phi^i = 1 + alpha^i."""
        phis = list(phis)
        n = n or phis[0].n
        return cls.from_components([p - 1 for p in phis], n)

    @classmethod
    def zero(cls, n):
        return cls(DifferentialForm.zero(n))

    def component(self, i: int) -> AlgebraElement:
        return self.alpha.component(1 << (i - 1))

    def components(self) -> list:
        return [self.component(i) for i in range(1, self.n + 1)]

    def phi(self) -> list:
        return [c + 1 for c in self.components()]

    def __eq__(self, other):
        return isinstance(other, Connection) and self.alpha == other.alpha

    def __repr__(self):
        return f"Connection({self.alpha})"

    def to_json(self):
        return {"schema": SCHEMA, "alpha": self.alpha.to_json(), "backend": self.backend}

    @classmethod
    def from_json(cls, data):
        return cls(DifferentialForm.from_json(data["alpha"]), data.get("backend", "exact"))


class GaugeTransform:
    """A pointwise invertible function gamma with its inverse cached."""

    def __init__(self, gamma: AlgebraElement):
        self.gamma = gamma
        self.n = gamma.n
        self.gamma_inv = invert(gamma)

    def is_unitary(self) -> bool:
        return all(abs(complex(v)) == 1.0 for v in self.gamma.values())

    def __repr__(self):
        return f"GaugeTransform({self.gamma})"


def _gauge(g) -> GaugeTransform:
    return g if isinstance(g, GaugeTransform) else GaugeTransform(g)


def _conn(a) -> Connection:
    return a if isinstance(a, Connection) else Connection(a)


# ---------------------------------------------------------------- untwisted


def curvature(alpha) -> DifferentialForm:
    """F(alpha) = d alpha + alpha alpha."""
    a = _conn(alpha).alpha
    return d(a) + wedge(a, a)


def curvature_components(alpha) -> dict:
    """F^ij = d^i alpha^j - d^j alpha^i + alpha^i R_i alpha^j - alpha^j R_j alpha^i, i < j (1-based)."""
    c = _conn(alpha)
    comps = c.components()
    out = {}
    for i in range(1, c.n + 1):
        for j in range(i + 1, c.n + 1):
            ai, aj = comps[i - 1], comps[j - 1]
            out[(i, j)] = aj.partial(i) - ai.partial(j) + ai * aj.translate(i) - aj * ai.translate(j)
    return out


def curvature_phi_components(alpha) -> dict:
    """rho_i phi^j - rho_j phi^i with rho_i = phi^i R_i."""
    c = _conn(alpha)
    phis = c.phi()
    out = {}
    for i in range(1, c.n + 1):
        for j in range(i + 1, c.n + 1):
            out[(i, j)] = phis[i - 1] * phis[j - 1].translate(i) - phis[j - 1] * phis[i - 1].translate(j)
    return out


def components_to_form(comps: dict, n: int) -> DifferentialForm:
    return DifferentialForm.from_components({(1 << (i - 1)) | (1 << (j - 1)): f for (i, j), f in comps.items()}, n)


def gauge_transform(alpha, gamma) -> Connection:
    """alpha -> gamma^-1 alpha gamma + gamma^-1 d gamma."""
    c, g = _conn(alpha), _gauge(gamma)
    gi = DifferentialForm.function(g.gamma_inv)
    gf = DifferentialForm.function(g.gamma)
    return Connection(wedge(wedge(gi, c.alpha), gf) + wedge(gi, d(gf)), c.backend)


def transformed_phi(alpha, gamma) -> list:
    """Component form of the transform: (phi^gamma)^i = gamma^-1 (R_i gamma) phi^i."""
    c, g = _conn(alpha), _gauge(gamma)
    return [g.gamma_inv * g.gamma.translate(i) * p for i, p in enumerate(c.phi(), start=1)]


def conjugate(form, gamma) -> DifferentialForm:
    """gamma^-1 form gamma."""
    g = _gauge(gamma)
    return wedge(wedge(g.gamma_inv, as_form(form)), g.gamma)


def pure_gauge(gamma) -> Connection:
    g = _gauge(gamma)
    return Connection(wedge(g.gamma_inv, d(g.gamma)))


def compose(g1, g2) -> GaugeTransform:
    """Transform by g1 then by g2 equals transform by the product g1 g2."""
    return GaugeTransform(_gauge(g1).gamma * _gauge(g2).gamma)


# ---------------------------------------------------------------- twisted


def _pieces(x) -> list:
    """Homogeneous group-degree pieces (a, piece) of a form or function."""
    f = as_form(x)
    return [(a, f.group_component(a)) for a in f.group_degrees()]


def twisted_product(x, y, alg: TwistedAlgebra) -> DifferentialForm:
    """sum_(a,b) F(a,b) x_a . y_b, the convolution product of two fields."""
    out = DifferentialForm.zero(alg.n)
    for a, xa in _pieces(x):
        for b, yb in _pieces(y):
            out = out + bullet_wedge(xa, yb, alg) * alg.F.value(a, b)
    return out


def curvature_twisted(alpha, alg: TwistedAlgebra) -> DifferentialForm:
    """F_.(alpha) = d alpha + sum_(a,b) F(a,b) alpha_a . alpha_b."""
    a = _conn(alpha).alpha
    return d(a) + twisted_product(a, a, alg)


def weight_general(alg: TwistedAlgebra):
    """Weight of (x_a . y_b) . z_c from (Delta_. (x) id) Delta_.: F(a,b) F(a+b,c)."""
    F = alg.F.value
    return lambda a, b, c: F(a, b) * F(a ^ b, c)


def weight_factorized(alg: TwistedAlgebra):
    """F(a,b) F(a,c) F(b,c), valid when F is multiplicative in its first argument."""
    F = alg.F.value
    return lambda a, b, c: F(a, b) * F(a, c) * F(b, c)


def weight_outer_only(alg: TwistedAlgebra):
    """F(a,c) F(b,c) alone, dropping the F(a,b) of the inner product; kept for comparison."""
    F = alg.F.value
    return lambda a, b, c: F(a, c) * F(b, c)


def weights_agree(alg: TwistedAlgebra) -> bool:
    """Whether the factorized weight equals the general one on all triples."""
    N = 1 << alg.n
    g, f = weight_general(alg), weight_factorized(alg)
    return all(g(a, b, c) == f(a, b, c) for a in range(N) for b in range(N) for c in range(N))


def twisted_triple(x, y, z, alg: TwistedAlgebra, weight=None) -> DifferentialForm:
    """sum_(a,b,c) W(a,b,c) (x_a . y_b) . z_c, bracketed to the left."""
    weight = weight or weight_general(alg)
    out = DifferentialForm.zero(alg.n)
    zs = _pieces(z)
    for a, xa in _pieces(x):
        for b, yb in _pieces(y):
            left = bullet_wedge(xa, yb, alg)
            if not left:
                continue
            for c, zc in zs:
                out = out + bullet_wedge(left, zc, alg) * weight(a, b, c)
    return out


def twisted_pure_gauge(gamma, alg: TwistedAlgebra) -> DifferentialForm:
    """sum_(b,c) F(b,c) gamma^-1_b . d gamma_c."""
    g = _gauge(gamma)
    out = DifferentialForm.zero(alg.n)
    for b, gb in _pieces(g.gamma_inv):
        for c, gc in _pieces(g.gamma):
            out = out + bullet_wedge(gb, d(gc), alg) * alg.F.value(b, c)
    return out


def gauge_transform_twisted(alpha, gamma, alg: TwistedAlgebra, factorized: bool = False) -> Connection:
    """Twisted transform: weighted (gamma^-1 . alpha) . gamma plus the pure-gauge term.

    ``factorized=True`` uses the weight F(a,b) F(a,c) F(b,c), which agrees
    with the general F(a,b) F(a+b,c) for the octonion cochain.
    """
    c, g = _conn(alpha), _gauge(gamma)
    weight = weight_factorized(alg) if factorized else weight_general(alg)
    body = twisted_triple(g.gamma_inv, c.alpha, g.gamma, alg, weight)
    return Connection(body + twisted_pure_gauge(g, alg), c.backend)


def twisted_conjugation(form, gamma, alg: TwistedAlgebra, factorized: bool = False) -> DifferentialForm:
    g = _gauge(gamma)
    weight = weight_factorized(alg) if factorized else weight_general(alg)
    return twisted_triple(g.gamma_inv, form, g.gamma, alg, weight)


def naive_pure_gauge_curvature(gamma: AlgebraElement, alg: TwistedAlgebra) -> DifferentialForm:
    """d(g^-1 . d g) + (g^-1 . d g) . (g^-1 . d g) with the bullet inverse and no weights.

    This is what one gets by copying the associative formula into the
    nonassociative algebra; it need not vanish.
    """
    ginv = bullet_inverse(gamma, alg)
    beta = bullet_wedge(ginv, d(gamma), alg)
    return d(beta) + bullet_wedge(beta, beta, alg)


# ---------------------------------------------------------------- amplification


def amplify(field, a):
    """Value of a covariant field on the basis element delta_a: its degree-a part."""
    if isinstance(field, Connection):
        return Connection(field.alpha.group_component(a), field.backend)
    if isinstance(field, AlgebraElement):
        return field.component(a)
    if isinstance(field, MatterField):
        return MatterField([s.component(a) for s in field.sigma])
    return as_form(field).group_component(a)


def amplified_curvature(alpha, a) -> DifferentialForm:
    """sum_(i<j) sum_(b+c=a) (phi_b^i R_i phi_c^j - phi_b^j R_j phi_c^i) tau_i tau_j."""
    conn = _conn(alpha)
    n = conn.n
    phis = conn.phi()
    a = as_mask(a, n)
    comps = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            total = AlgebraElement.zero(n)
            for b in range(1 << n):
                c = a ^ b
                pi_b, pj_b = phis[i - 1].component(b), phis[j - 1].component(b)
                pi_c, pj_c = phis[i - 1].component(c), phis[j - 1].component(c)
                total = total + pi_b * pj_c.translate(i) - pj_b * pi_c.translate(j)
            comps[(i, j)] = total
    return components_to_form(comps, n)


# ---------------------------------------------------------------- matter


class MatterField:
    """A multiplet of functions sigma_p, one per index p."""

    def __init__(self, sigma):
        self.sigma = list(sigma)
        if not self.sigma:
            raise ValueError("empty multiplet")
        self.n = self.sigma[0].n
        if any(s.n != self.n for s in self.sigma):
            raise DimensionError("multiplet members have different dimensions")

    def __eq__(self, other):
        return isinstance(other, MatterField) and self.sigma == other.sigma

    def __len__(self):
        return len(self.sigma)

    def __repr__(self):
        return f"MatterField({[str(s) for s in self.sigma]})"


def covariant_derivative(sigma: MatterField, alpha) -> list:
    """(nabla sigma)_p = d sigma_p - sigma_p alpha."""
    a = _conn(alpha).alpha
    return [d(s) - wedge(s, a) for s in sigma.sigma]


def matter_transform(sigma: MatterField, gamma) -> MatterField:
    """sigma_p -> sigma_p gamma."""
    g = _gauge(gamma)
    return MatterField([s * g.gamma for s in sigma.sigma])


def matter_transform_twisted(sigma: MatterField, gamma, alg: TwistedAlgebra) -> MatterField:
    """sigma_p -> sum_(a,c) F(a,c) sigma_(p,a) . gamma_c.

    sigma is amplified like alpha, with its own degree a, so the deformed
    coaction contributes F(a,c).
    """
    g = _gauge(gamma)
    out = []
    for s in sigma.sigma:
        out.append(twisted_product(s, g.gamma, alg).component(0))
    return MatterField(out)


def covariant_derivative_twisted(sigma: MatterField, alpha, alg: TwistedAlgebra) -> list:
    """d sigma_p - sum_(a,b) F(a,b) sigma_(p,a) . alpha_b."""
    a = _conn(alpha).alpha
    return [d(s) - twisted_product(s, a, alg) for s in sigma.sigma]


# ---------------------------------------------------------------- helpers


def flat_reference(n: int) -> Connection:
    """alpha = -theta, the phi = 0 connection."""
    return Connection(-theta(n))


def constant_connection(lams, n: int | None = None) -> Connection:
    """alpha = sum_i lambda_i tau_i - theta."""
    lams = list(lams)
    n = n or len(lams)
    out = DifferentialForm.zero(n)
    for i, lam in enumerate(lams, start=1):
        out = out + tau(i, n) * (Fraction(lam) if isinstance(lam, int) else lam)
    return Connection(out - theta(n))


def random_connection(rng, n: int, max_terms: int = 4, coeff_range: int = 4) -> Connection:
    comps = []
    for _ in range(n):
        coeffs = {}
        for _ in range(rng.randint(0, max_terms)):
            coeffs[rng.randrange(1 << n)] = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
        comps.append(AlgebraElement(coeffs, n))
    return Connection.from_components(comps, n)


def random_gauge(rng, n: int, max_terms: int = 3, coeff_range: int = 4) -> GaugeTransform:
    """Random exact gamma that is nonzero at every position."""
    while True:
        coeffs = {0: Fraction(rng.randint(1, coeff_range))}
        for _ in range(rng.randint(0, max_terms)):
            coeffs[rng.randrange(1 << n)] = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
        g = AlgebraElement(coeffs, n)
        if g and all(v != 0 for v in g.values()):
            return GaugeTransform(g)


def describe_phi(phis) -> str:
    return "; ".join(f"phi^{i + 1} = {p}" for i, p in enumerate(phis))


def connection_label(c: Connection) -> str:
    return " + ".join(f"({c.component(i)})tau[{i}]" for i in range(1, c.n + 1) if c.component(i)) or "0"


__all__ = [
    "Connection",
    "GaugeTransform",
    "MatterField",
    "amplified_curvature",
    "amplify",
    "compose",
    "conjugate",
    "constant_connection",
    "covariant_derivative",
    "covariant_derivative_twisted",
    "curvature",
    "curvature_components",
    "curvature_phi_components",
    "curvature_twisted",
    "components_to_form",
    "flat_reference",
    "gauge_transform",
    "gauge_transform_twisted",
    "matter_transform",
    "matter_transform_twisted",
    "naive_pure_gauge_curvature",
    "partial_form",
    "pure_gauge",
    "random_connection",
    "random_gauge",
    "transformed_phi",
    "twisted_conjugation",
    "twisted_product",
    "twisted_pure_gauge",
    "twisted_triple",
    "weight_factorized",
    "weight_general",
    "weight_outer_only",
    "weights_agree",
]
