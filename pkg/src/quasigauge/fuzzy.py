"""Quasi-R^n: jets, cochains f(box), bullet products and gauge fields on fuzzy R^n.

Functions are polynomials in x_1..x_n. A Jet carries a truncation degree K;
intermediate products are computed as exact polynomials and truncated only
when a public result is returned, so identities that hold for polynomials
hold exactly and not merely modulo degree K.

A cochain F = f(box) with box = sum eta_ij d^i (x) d^j is a constant
coefficient bidifferential operator. Every series in box is applied by
repeated application of box until the tensor vanishes, which always happens
on polynomials because each box lowers the total degree by two.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations_with_replacement

from .core import DimensionError, format_scalar, parse_scalar, popcount
from .forms import tau_sign

JET_SCHEMA = "quasigauge.jet/1"
FORM_SCHEMA = "quasigauge.fuzzy-form/1"
COCHAIN_SCHEMA = "quasigauge.diff-cochain/1"


class NonInvertibleJet(ZeroDivisionError):
    """A jet with zero constant term has no inverse."""


# ---------------------------------------------------------------- polynomials
#
# A "terms" dict maps (exponents, dx mask) -> coefficient. Jets use mask 0.


def _add_into(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _deriv_terms(terms: dict, i: int) -> dict:
    """Coefficientwise d/dx_i (0-based i); this is also the Lie derivative on forms."""
    out = {}
    for (e, S), c in terms.items():
        k = e[i]
        if k:
            _add_into(out, (e[:i] + (k - 1,) + e[i + 1:], S), c * k)
    return out


def _mul_terms(x: dict, y: dict, K=None) -> dict:
    """Wedge product: functions commute with dx, the dx anticommute."""
    out = {}
    for (e1, S), c1 in x.items():
        d1 = sum(e1)
        for (e2, T), c2 in y.items():
            if S & T:
                continue
            if K is not None and d1 + sum(e2) > K:
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            _add_into(out, (e, S | T), c1 * c2 * tau_sign(S, T))
    return out


def _truncate(terms: dict, K) -> dict:
    if K is None:
        return dict(terms)
    return {k: c for k, c in terms.items() if sum(k[0]) <= K}


def _min_K(*ks):
    ks = [k for k in ks if k is not None]
    return min(ks) if ks else None


def _exponents(n: int, max_degree: int) -> list:
    out = []
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _monomial_name(e, n) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k:
            parts.append(f"x{i + 1}^{k}")
    return "*".join(parts)


def _dx_name(S: int) -> str:
    return "*".join(f"dx{i + 1}" for i in range(S.bit_length()) if (S >> i) & 1)


def _format_terms(terms: dict, n: int) -> str:
    if not terms:
        return "0"
    items = sorted(terms.items(), key=lambda kv: (popcount(kv[0][1]), kv[0][1], -sum(kv[0][0]), tuple(-k for k in kv[0][0])))
    out = []
    for (e, S), c in items:
        mono = "*".join(p for p in (_monomial_name(e, n), _dx_name(S)) if p)
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        if not mono:
            body = format_scalar(mag)
        elif mag == 1:
            body = mono
        else:
            txt = format_scalar(mag)
            body = f"({txt})*{mono}" if not isinstance(mag, Fraction) else f"{txt}*{mono}"
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


# ---------------------------------------------------------------- jets


class Jet:
    """A polynomial in x_1..x_n truncated at total degree K (K=None keeps everything)."""

    __slots__ = ("n", "K", "coeffs")

    def __init__(self, coeffs=None, n: int | None = None, K: int | None = None):
        if n is None:
            raise ValueError("dimension n is required")
        if n < 1:
            raise DimensionError("n must be positive")
        clean = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise DimensionError(f"exponent {e} has wrong length for n={n}")
            if K is not None and sum(e) > K:
                continue
            c = Fraction(c) if isinstance(c, int) else c
            if c:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "coeffs", {e: c for e, c in clean.items() if c})

    def __setattr__(self, key, value):
        raise AttributeError("Jet is immutable")

    @classmethod
    def _from_terms(cls, terms: dict, n, K):
        return cls({e: c for (e, S), c in terms.items() if S == 0}, n, K)

    def _terms(self) -> dict:
        return {(e, 0): c for e, c in self.coeffs.items()}

    @classmethod
    def constant(cls, c, n, K=None):
        return cls({(0,) * n: c}, n, K)

    @classmethod
    def one(cls, n, K=None):
        return cls.constant(1, n, K)

    @classmethod
    def zero(cls, n, K=None):
        return cls({}, n, K)

    @classmethod
    def variable(cls, i: int, n: int, K=None):
        """x_i, 1-based."""
        e = [0] * n
        e[i - 1] = 1
        return cls({tuple(e): 1}, n, K)

    def with_K(self, K):
        return Jet(self.coeffs, self.n, K)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.n != self.n:
                raise DimensionError(f"jets on R^{self.n} and R^{other.n}")
            return other
        return Jet.constant(other, self.n, self.K)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            _add_into(out, e, c)
        return Jet(out, self.n, _min_K(self.K, other.K))

    __radd__ = __add__

    def __neg__(self):
        return Jet({e: -c for e, c in self.coeffs.items()}, self.n, self.K)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, FuzzyForm):
            return FuzzyForm.from_jet(self) * other
        if not isinstance(other, Jet):
            return Jet({e: c * other for e, c in self.coeffs.items()}, self.n, self.K)
        other = self._coerce(other)
        K = _min_K(self.K, other.K)
        return Jet._from_terms(_mul_terms(self._terms(), other._terms(), K), self.n, K)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.inverse()
        return self * (Fraction(1) / other)

    def __pow__(self, k: int):
        out = Jet.one(self.n, self.K)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, FuzzyForm):
            return FuzzyForm.from_jet(self) == other
        if not isinstance(other, Jet):
            return not self.coeffs if other == 0 else self.coeffs == {(0,) * self.n: other}
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def constant_term(self):
        return self.coeffs.get((0,) * self.n, Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    def partial(self, i: int) -> "Jet":
        """d/dx_i, 1-based."""
        return Jet._from_terms(_deriv_terms(self._terms(), i - 1), self.n, self.K)

    def truncate(self, K) -> "Jet":
        return Jet(self.coeffs, self.n, _min_K(self.K, K))

    def inverse(self, K=None) -> "Jet":
        """Truncated series 1/gamma through degree K (defaults to the jet's own K)."""
        K = self.K if K is None else K
        if K is None:
            raise ValueError("the inverse of a polynomial needs a truncation degree")
        c0 = self.constant_term()
        if c0 == 0:
            raise NonInvertibleJet("jet has zero constant term")
        h = (self.truncate(K) - c0) * (Fraction(1) / c0)
        out = Jet.one(self.n, K)
        power = Jet.one(self.n, K)
        for _ in range(K):
            power = (power * h) * -1
            out = out + power
        return out * (Fraction(1) / c0)

    def __repr__(self):
        return f"Jet({self})"

    def __str__(self):
        return _format_terms(self._terms(), self.n)

    def to_json(self):
        return {
            "schema": JET_SCHEMA,
            "n": self.n,
            "K": self.K,
            "terms": [{"exponents": list(e), "coeff": format_scalar(c)} for e, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data):
        return cls({tuple(t["exponents"]): parse_scalar(t["coeff"]) for t in data["terms"]}, data["n"], data.get("K"))


def random_jet(rng, n: int, K: int, max_terms: int = 4, coeff_range: int = 3, constant=None) -> Jet:
    exps = _exponents(n, K)
    coeffs = {}
    for _ in range(rng.randint(1, max_terms)):
        coeffs[rng.choice(exps)] = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
    if constant is not None:
        coeffs[(0,) * n] = Fraction(constant)
    return Jet(coeffs, n, K)


# ---------------------------------------------------------------- forms


class FuzzyForm:
    """sum c x^e dx_S with the dx on the right of their coefficient."""

    __slots__ = ("n", "K", "terms")

    def __init__(self, terms=None, n: int | None = None, K: int | None = None):
        if n is None:
            raise ValueError("dimension n is required")
        clean = {}
        for (e, S), c in (terms or {}).items():
            e = tuple(e)
            if K is not None and sum(e) > K:
                continue
            if S >> n:
                raise DimensionError(f"dx mask {S} out of range for n={n}")
            c = Fraction(c) if isinstance(c, int) else c
            if c:
                _add_into(clean, (e, S), c)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, key, value):
        raise AttributeError("FuzzyForm is immutable")

    @classmethod
    def from_jet(cls, j: Jet):
        return cls(j._terms(), j.n, j.K)

    @classmethod
    def dx(cls, mu: int, n: int, K=None):
        return cls({((0,) * n, 1 << (mu - 1)): 1}, n, K)

    @classmethod
    def zero(cls, n, K=None):
        return cls({}, n, K)

    @classmethod
    def from_components(cls, comps, K=None):
        """sum_mu comps[mu-1] dx_mu for a list of jets."""
        comps = list(comps)
        n = comps[0].n
        terms = {}
        for mu, j in enumerate(comps):
            for e, c in j.coeffs.items():
                _add_into(terms, (e, 1 << mu), c)
        return cls(terms, n, _min_K(K, *[j.K for j in comps]))

    def _coerce(self, other):
        if isinstance(other, FuzzyForm):
            return other
        if isinstance(other, Jet):
            return FuzzyForm.from_jet(other)
        return FuzzyForm({((0,) * self.n, 0): other}, self.n, self.K)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return FuzzyForm(out, self.n, _min_K(self.K, other.K))

    __radd__ = __add__

    def __neg__(self):
        return FuzzyForm({k: -c for k, c in self.terms.items()}, self.n, self.K)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (FuzzyForm, Jet)):
            return wedge_fuzzy(self, other)
        return FuzzyForm({k: c * other for k, c in self.terms.items()}, self.n, self.K)

    def __rmul__(self, other):
        if isinstance(other, Jet):
            return wedge_fuzzy(other, self)
        return self * other

    def __eq__(self, other):
        if not isinstance(other, FuzzyForm):
            if other == 0:
                return not self.terms
            other = self._coerce(other)
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {popcount(S) for (_, S) in self.terms}

    def component(self, S) -> Jet:
        """Coefficient jet of dx_S (S a mask or a sequence of 1-based directions in ascending order)."""
        if not isinstance(S, int):
            m = 0
            for mu in S:
                m |= 1 << (mu - 1)
            S = m
        return Jet({e: c for (e, T), c in self.terms.items() if T == S}, self.n, self.K)

    def lie(self, i: int) -> "FuzzyForm":
        """Lie derivative along d^i: coefficientwise derivative."""
        return FuzzyForm(_deriv_terms(self.terms, i - 1), self.n, self.K)

    def truncate(self, K) -> "FuzzyForm":
        return FuzzyForm(self.terms, self.n, _min_K(self.K, K))

    def low_degree_part(self, max_degree: int) -> "FuzzyForm":
        """Terms whose coefficient has total degree <= max_degree."""
        return FuzzyForm({k: c for k, c in self.terms.items() if sum(k[0]) <= max_degree}, self.n, None)

    def __repr__(self):
        return f"FuzzyForm({self})"

    def __str__(self):
        return _format_terms(self.terms, self.n)

    def to_json(self):
        return {
            "schema": FORM_SCHEMA,
            "n": self.n,
            "K": self.K,
            "terms": [
                {"exponents": list(e), "dx": [i + 1 for i in range(self.n) if (S >> i) & 1], "coeff": format_scalar(c)}
                for (e, S), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }

    @classmethod
    def from_json(cls, data):
        terms = {}
        for t in data["terms"]:
            S = 0
            for mu in t["dx"]:
                S |= 1 << (mu - 1)
            _add_into(terms, (tuple(t["exponents"]), S), parse_scalar(t["coeff"]))
        return cls(terms, data["n"], data.get("K"))


def as_fuzzy(x) -> FuzzyForm:
    if isinstance(x, FuzzyForm):
        return x
    if isinstance(x, Jet):
        return FuzzyForm.from_jet(x)
    raise TypeError(f"not a fuzzy form: {x!r}")


def d_fuzzy(x) -> FuzzyForm:
    """Exterior derivative, undeformed: d(c x^e dx_S) = sum_mu d^mu(c x^e) dx_mu dx_S."""
    x = as_fuzzy(x)
    out = {}
    for (e, S), c in x.terms.items():
        for mu in range(x.n):
            k = e[mu]
            if not k or (S >> mu) & 1:
                continue
            T = 1 << mu
            _add_into(out, (e[:mu] + (k - 1,) + e[mu + 1:], S | T), c * k * tau_sign(T, S))
    return FuzzyForm(out, x.n, None if x.K is None else max(x.K - 1, 0))


def wedge_fuzzy(x, y) -> FuzzyForm:
    x, y = as_fuzzy(x), as_fuzzy(y)
    if x.n != y.n:
        raise DimensionError("forms on different R^n")
    K = _min_K(x.K, y.K)
    return FuzzyForm(_mul_terms(x.terms, y.terms, K), x.n, K)


# ---------------------------------------------------------------- series in one variable


class Series:
    """Formal power series sum c_k s^k with lazily generated coefficients."""

    def __init__(self, coeff_fn, name: str = ""):
        self._fn = coeff_fn
        self._cache = {}
        self.name = name

    def __getitem__(self, k: int):
        if k not in self._cache:
            c = self._fn(k)
            self._cache[k] = Fraction(c) if isinstance(c, int) else c
        return self._cache[k]

    def reciprocal(self) -> "Series":
        if self[0] == 0:
            raise ZeroDivisionError("series with zero constant term")
        inv = {}

        def fn(k):
            if k not in inv:
                if k == 0:
                    inv[0] = Fraction(1) / self[0]
                else:
                    inv[k] = -sum(self[j] * fn(k - j) for j in range(1, k + 1)) / self[0]
            return inv[k]

        return Series(fn, f"1/({self.name})")

    def __repr__(self):
        return f"Series({self.name}: {[self[k] for k in range(5)]}...)"


# ---------------------------------------------------------------- cochains


class DiffCochain:
    """F = f(box) with box = sum_ij eta_ij d^i (x) d^j, normalized by f(0) = 1.

    families:
      negative-power(m, lam): f = (1 + lam s/m)^-m, so f^-1 is the polynomial (1 + lam s/m)^m
      gaussian(lam):          f = exp(-lam s^2 / 2)
      exponential(lam):       f = exp(-lam s), the m -> infinity limit of negative-power
      custom(coeffs):         f given by its leading power series coefficients
    """

    def __init__(self, family: str, n: int, lam=Fraction(1), m: int | None = None, eta=None, coeffs=None):
        self.family = family
        self.n = n
        self.lam = Fraction(lam)
        self.m = m
        if eta is None:
            eta = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        self.eta = tuple(tuple(Fraction(v) for v in row) for row in eta)
        if len(self.eta) != n or any(len(r) != n for r in self.eta):
            raise DimensionError(f"eta must be {n}x{n}")
        lam = self.lam
        if family == "negative-power":
            if not m or m < 1:
                raise ValueError("negative-power needs a positive integer m")
            self.f = Series(lambda k: math.comb(m + k - 1, k) * (-lam / m) ** k, f"(1+{lam}s/{m})^-{m}")
            self.finv = Series(lambda k: math.comb(m, k) * (lam / m) ** k, f"(1+{lam}s/{m})^{m}")
        elif family == "gaussian":
            self.f = Series(lambda k: 0 if k % 2 else (-lam / 2) ** (k // 2) / math.factorial(k // 2), f"exp(-{lam}s^2/2)")
            self.finv = Series(lambda k: 0 if k % 2 else (lam / 2) ** (k // 2) / math.factorial(k // 2), f"exp({lam}s^2/2)")
        elif family == "exponential":
            self.f = Series(lambda k: (-lam) ** k / math.factorial(k), f"exp(-{lam}s)")
            self.finv = Series(lambda k: lam ** k / math.factorial(k), f"exp({lam}s)")
        elif family == "custom":
            cs = [Fraction(c) for c in coeffs]
            if not cs or cs[0] != 1:
                raise ValueError("custom cochain must have f(0) = 1")
            self.coeffs = cs
            self.f = Series(lambda k: cs[k] if k < len(cs) else Fraction(0), "custom")
            self.finv = self.f.reciprocal()
        else:
            raise ValueError(f"unknown cochain family {family!r}")

    @classmethod
    def negative_power(cls, n, m, lam=Fraction(1), eta=None):
        return cls("negative-power", n, lam, m, eta)

    @classmethod
    def string_theory(cls, n, m, eta=None):
        """The negative-power family at lam = 1/m."""
        return cls("negative-power", n, Fraction(1, m), m, eta)

    @classmethod
    def gaussian(cls, n, lam=Fraction(1), eta=None):
        return cls("gaussian", n, lam, eta=eta)

    @classmethod
    def exponential(cls, n, lam=Fraction(1), eta=None):
        return cls("exponential", n, lam, eta=eta)

    @classmethod
    def custom(cls, n, coeffs, eta=None):
        return cls("custom", n, eta=eta, coeffs=coeffs)

    def is_symmetric(self) -> bool:
        return all(self.eta[i][j] == self.eta[j][i] for i in range(self.n) for j in range(self.n))

    def to_json(self):
        out = {"schema": COCHAIN_SCHEMA, "family": self.family, "n": self.n,
               "eta": [[str(v) for v in row] for row in self.eta]}
        if self.family == "custom":
            out["coeffs"] = [str(c) for c in self.coeffs]
        else:
            out["lambda"] = str(self.lam)
        if self.m is not None:
            out["m"] = self.m
        return out

    @classmethod
    def from_json(cls, data):
        eta = [[Fraction(v) for v in row] for row in data["eta"]] if "eta" in data else None
        return cls(data["family"], data["n"], Fraction(data.get("lambda", 1)), data.get("m"), eta,
                   [Fraction(c) for c in data.get("coeffs", [])] or None)

    def __repr__(self):
        return f"DiffCochain({self.family}, n={self.n}, lambda={self.lam}, m={self.m})"


# ---------------------------------------------------------------- tensors
#
# A tensor is a dict mapping a tuple of slot keys (exponents, dx mask) to a
# coefficient; it stands for sum c (slot_1 (x) slot_2 (x) ...).


def tensor(*xs) -> dict:
    out = {(): Fraction(1)}
    for x in xs:
        x = as_fuzzy(x)
        nxt = {}
        for key, c in out.items():
            for k, c2 in x.terms.items():
                nxt[key + (k,)] = c * c2
        out = nxt
    return out


def box(T: dict, p: int, q: int, eta) -> dict:
    """Apply box_pq = sum eta_ij d^i_p d^j_q to slots p != q (0-based)."""
    out = {}
    n = len(eta)
    for key, c in T.items():
        ep, Sp = key[p]
        eq, Sq = key[q]
        for i in range(n):
            if not ep[i]:
                continue
            ep2 = ep[:i] + (ep[i] - 1,) + ep[i + 1:]
            for j in range(n):
                w = eta[i][j]
                if not w or not eq[j]:
                    continue
                new = list(key)
                new[p] = (ep2, Sp)
                new[q] = (eq[:j] + (eq[j] - 1,) + eq[j + 1:], Sq)
                _add_into(out, tuple(new), c * w * ep[i] * eq[j])
    return out


def _add_tensors(x: dict, y: dict, scale=1) -> dict:
    out = dict(x)
    for k, c in y.items():
        _add_into(out, k, c * scale)
    return out


def box_sum(pairs, eta):
    """The operator T -> sum over pairs (p, q) of box_pq T."""
    def op(T):
        out = {}
        for p, q in pairs:
            out = _add_tensors(out, box(T, p, q, eta))
        return out
    return op


def apply_series(series: Series, op, T: dict, order: int | None = None) -> dict:
    """sum_k series[k] op^k T; stops when op^k T vanishes, or after ``order`` if given."""
    out = {}
    term = T
    k = 0
    while term and (order is None or k <= order):
        c = series[k]
        if c:
            out = _add_tensors(out, term, c)
        term = op(term)
        k += 1
    return out


def merge(T: dict, p: int) -> dict:
    """Multiply slot p with slot p+1 (wedge product, no truncation)."""
    out = {}
    for key, c in T.items():
        (e1, S), (e2, S2) = key[p], key[p + 1]
        if S & S2:
            continue
        e = tuple(a + b for a, b in zip(e1, e2))
        new = key[:p] + ((e, S | S2),) + key[p + 2:]
        _add_into(out, new, c * tau_sign(S, S2))
    return out


def collapse(T: dict, n: int) -> dict:
    """Multiply all slots left to right into a single terms dict."""
    while T and len(next(iter(T))) > 1:
        T = merge(T, 0)
    return {key[0]: c for key, c in T.items()}


def _result(terms: dict, n: int, K, cls=FuzzyForm):
    form = FuzzyForm(terms, n, K)
    if cls is Jet:
        if any(S for (_, S) in form.terms):
            raise ValueError("result has form degree > 0")
        return Jet._from_terms(form.terms, n, K)
    return form


def _result_cls(*xs):
    return Jet if all(isinstance(x, Jet) for x in xs) else FuzzyForm


# ---------------------------------------------------------------- bullet products


def _bullet_terms(x: dict, y: dict, F: DiffCochain, order=None) -> dict:
    T = {(kx, ky): cx * cy for kx, cx in x.items() for ky, cy in y.items()}
    return collapse(apply_series(F.finv, box_sum([(0, 1)], F.eta), T, order), F.n)


def bullet_jet(a, b, F: DiffCochain, order: int | None = None):
    """a . b = product of f^-1(box)(a (x) b); a Jet when both inputs are jets."""
    cls = _result_cls(a, b)
    a, b = as_fuzzy(a), as_fuzzy(b)
    return _result(_bullet_terms(a.terms, b.terms, F, order), F.n, _min_K(a.K, b.K), cls)


def bullet_wedge_fuzzy(x, y, F: DiffCochain, order: int | None = None) -> FuzzyForm:
    """The bullet product of forms; the box acts on coefficients by Lie derivative."""
    x, y = as_fuzzy(x), as_fuzzy(y)
    return FuzzyForm(_bullet_terms(x.terms, y.terms, F, order), F.n, _min_K(x.K, y.K))


def apply_associator(T: dict, F: DiffCochain, order: int | None = None) -> dict:
    """Phi = f(box23) f(box12 + box13) f^-1(box13 + box23) f^-1(box12) on a 3-tensor."""
    eta = F.eta
    T = apply_series(F.finv, box_sum([(0, 1)], eta), T, order)
    T = apply_series(F.finv, box_sum([(0, 2), (1, 2)], eta), T, order)
    T = apply_series(F.f, box_sum([(0, 1), (0, 2)], eta), T, order)
    return apply_series(F.f, box_sum([(1, 2)], eta), T, order)


def _right_bracket(T: dict, F: DiffCochain, order=None) -> dict:
    """. (id (x) .) on a 3-tensor."""
    T = apply_series(F.finv, box_sum([(1, 2)], F.eta), T, order)
    T = merge(T, 1)
    T = apply_series(F.finv, box_sum([(0, 1)], F.eta), T, order)
    return collapse(T, F.n)


def _left_bracket(T: dict, F: DiffCochain, order=None) -> dict:
    """. (. (x) id) on a 3-tensor."""
    T = apply_series(F.finv, box_sum([(0, 1)], F.eta), T, order)
    T = merge(T, 0)
    T = apply_series(F.finv, box_sum([(0, 1)], F.eta), T, order)
    return collapse(T, F.n)


def associator_jet(a, b, c, F: DiffCochain, order: int | None = None):
    """(a . b) . c minus . (id (x) .) Phi (a (x) b (x) c); exactly zero."""
    xs = [as_fuzzy(x) for x in (a, b, c)]
    T = tensor(*xs)
    lhs = _left_bracket(T, F, order)
    rhs = _right_bracket(apply_associator(T, F, order), F, order)
    cls = _result_cls(a, b, c)
    return _result(_add_tensors(lhs, rhs, -1), F.n, _min_K(*(x.K for x in xs)), cls)


def associator_closed_form(T: dict, F: DiffCochain, order: int | None = None) -> dict:
    """The single-expression associator for the negative-power and gaussian families.

    negative-power: ((D + N) / D)^m with N = (lam/m)^2 box13 (box12 - box23) and
    D = 1 + (lam/m)(box12 + box13 + box23) + (lam/m)^2 box23 (box12 + box13).
    gaussian: exp(-lam box13 (box12 - box23)).
    """
    eta = F.eta
    b12, b13, b23 = (box_sum([p], eta) for p in ((0, 1), (0, 2), (1, 2)))
    if F.family == "negative-power":
        m, t = F.m, F.lam / F.m

        def Dminus1(X):
            s = _add_tensors(_add_tensors(b12(X), b13(X)), b23(X))
            q = b23(_add_tensors(b12(X), b13(X)))
            return _add_tensors(_add_tensors({}, s, t), q, t * t)

        def Nop(X):
            return {k: c * t * t for k, c in b13(_add_tensors(b12(X), b23(X), -1)).items()}

        # D^-m as a series in (D - 1), then (D + N)^m = sum_k C(m,k) N^k D^(m-k)
        T = apply_series(Series(lambda k: math.comb(m + k - 1, k) * (-1) ** k), Dminus1, T, order)
        out = {}
        for k in range(m + 1):
            X = T
            for _ in range(k):
                X = Nop(X)
            for _ in range(m - k):
                X = _add_tensors(X, Dminus1(X))
            out = _add_tensors(out, X, math.comb(m, k))
        return out
    if F.family == "gaussian":
        def op(X):
            return {k: -F.lam * c for k, c in b13(_add_tensors(b12(X), b23(X), -1)).items()}
        return apply_series(Series(lambda k: Fraction(1, math.factorial(k))), op, T, order)
    if F.family == "exponential":
        return dict(T)
    raise ValueError(f"no closed form for family {F.family!r}")


# ---------------------------------------------------------------- gauge theory


def twisted_product_fuzzy(x, y, F: DiffCochain, order: int | None = None) -> FuzzyForm:
    """. (f(box)(x (x) y)): the convolution product weighted by F."""
    x, y = as_fuzzy(x), as_fuzzy(y)
    T = apply_series(F.f, box_sum([(0, 1)], F.eta), tensor(x, y), order)
    T = apply_series(F.finv, box_sum([(0, 1)], F.eta), T, order)
    return FuzzyForm(collapse(T, F.n), F.n, _min_K(x.K, y.K))


def connection(comps) -> FuzzyForm:
    """alpha = sum_mu alpha^mu dx_mu from a list of jets."""
    return FuzzyForm.from_components(comps)


def curvature_fuzzy_untwisted(alpha) -> FuzzyForm:
    a = as_fuzzy(alpha)
    return (d_fuzzy(a) + wedge_fuzzy(a, a)).truncate(a.K)


def curvature_fuzzy(alpha, F: DiffCochain, order: int | None = None) -> FuzzyForm:
    """d alpha + sum_r c_r (d^I alpha) . (d_I alpha) with c_r the coefficients of f."""
    a = as_fuzzy(alpha)
    return (d_fuzzy(a) + twisted_product_fuzzy(a, a, F, order)).truncate(a.K)


def gauge_weight(F: DiffCochain, which: str = "general"):
    """The operator series applied to gamma^-1 (x) alpha (x) gamma before left bracketing.

    general:      f(box12) f(box13 + box23), from (Delta (x) id) F composed with F_12
    outer-only:   f(box13 + box23) alone
    """
    def op(T, order=None):
        T = apply_series(F.f, box_sum([(0, 2), (1, 2)], F.eta), T, order)
        if which == "general":
            T = apply_series(F.f, box_sum([(0, 1)], F.eta), T, order)
        elif which != "outer-only":
            raise ValueError(f"unknown weight {which!r}")
        return T
    return op


def jet_inverse(gamma: Jet, K=None) -> Jet:
    return gamma.inverse(K)


def gauge_transform_fuzzy_untwisted(alpha, gamma: Jet) -> FuzzyForm:
    """gamma^-1 alpha gamma + gamma^-1 d gamma with gamma^-1 the truncated series."""
    a = as_fuzzy(alpha)
    K = _min_K(a.K, gamma.K)
    gi = jet_inverse(gamma, K).with_K(None)
    g = gamma.with_K(None)
    out = wedge_fuzzy(wedge_fuzzy(gi, FuzzyForm(a.terms, a.n)), g)
    out = out + wedge_fuzzy(gi, d_fuzzy(g))
    return out.truncate(K)


def twisted_pure_gauge_fuzzy(gamma: Jet, F: DiffCochain, K=None, order: int | None = None) -> FuzzyForm:
    """sum_r c_r d^I gamma^-1 . d d_I gamma."""
    K = _min_K(gamma.K, K)
    gi = jet_inverse(gamma, K).with_K(None)
    g = gamma.with_K(None)
    return twisted_product_fuzzy(gi, d_fuzzy(g), F, order).truncate(K)


def pure_gauge_fuzzy(gamma: Jet, F: DiffCochain | None = None, K=None) -> FuzzyForm:
    if F is None:
        K = _min_K(gamma.K, K)
        gi = jet_inverse(gamma, K).with_K(None)
        return wedge_fuzzy(gi, d_fuzzy(gamma.with_K(None))).truncate(K)
    return twisted_pure_gauge_fuzzy(gamma, F, K)


def gauge_transform_fuzzy(alpha, gamma: Jet, F: DiffCochain, weight: str = "general",
                          order: int | None = None) -> FuzzyForm:
    """((gamma^-1 . alpha) . gamma) weighted by F, plus the pure-gauge series."""
    a = as_fuzzy(alpha)
    K = _min_K(a.K, gamma.K)
    gi = jet_inverse(gamma, K).with_K(None)
    g = gamma.with_K(None)
    T = tensor(gi, FuzzyForm(a.terms, a.n), g)
    T = gauge_weight(F, weight)(T, order)
    body = FuzzyForm(_left_bracket(T, F, order), F.n)
    pure = twisted_product_fuzzy(gi, d_fuzzy(g), F, order)
    return (body + pure).truncate(K)


def amplify_fuzzy(field, p=()):
    """Value on f^(i1) ... f^(ip): iterated Lie derivative of the value at 1."""
    out = field
    for i in p:
        out = out.partial(i) if isinstance(out, Jet) else as_fuzzy(out).lie(i)
    return out


def gauge_transform_amplified(alpha, gamma: Jet, i: int) -> FuzzyForm:
    """alpha^gamma(f^i) assembled from the coproduct of f^i (convolution product).

    gamma^-1(f^i) alpha(1) gamma(1) + gamma^-1(1) alpha(f^i) gamma(1) + gamma^-1(1) alpha(1) gamma(f^i)
    + gamma^-1(f^i) d gamma(1) + gamma^-1(1) d gamma(f^i)
    """
    a = as_fuzzy(alpha)
    K = _min_K(a.K, gamma.K)
    gi = jet_inverse(gamma, K).with_K(None)
    g = gamma.with_K(None)
    a0 = FuzzyForm(a.terms, a.n)
    w = wedge_fuzzy
    out = w(w(gi.partial(i), a0), g) + w(w(gi, a0.lie(i)), g) + w(w(gi, a0), g.partial(i))
    out = out + w(gi.partial(i), d_fuzzy(g)) + w(gi, d_fuzzy(g.partial(i)))
    return out


__all__ = [
    "DiffCochain",
    "FuzzyForm",
    "Jet",
    "NonInvertibleJet",
    "Series",
    "amplify_fuzzy",
    "apply_associator",
    "apply_series",
    "associator_closed_form",
    "associator_jet",
    "box",
    "box_sum",
    "bullet_jet",
    "bullet_wedge_fuzzy",
    "collapse",
    "connection",
    "curvature_fuzzy",
    "curvature_fuzzy_untwisted",
    "d_fuzzy",
    "gauge_transform_amplified",
    "gauge_transform_fuzzy",
    "gauge_transform_fuzzy_untwisted",
    "gauge_weight",
    "jet_inverse",
    "pure_gauge_fuzzy",
    "random_jet",
    "tensor",
    "twisted_product_fuzzy",
    "twisted_pure_gauge_fuzzy",
    "wedge_fuzzy",
]
