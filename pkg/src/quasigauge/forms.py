"""Exterior calculus on Z_2^n in the invariant basis tau_i.

A form is stored normal ordered as sum c e_a tau_S, with the function part on
the left and S a set of directions (bitmask, direction i is bit i-1).
"""

from __future__ import annotations

from fractions import Fraction

from .core import (
    AlgebraElement,
    DimensionError,
    GroupVector,
    as_mask,
    basis_name,
    bitstring,
    check_dim,
    format_scalar,
    is_exact,
    join_terms,
    parity,
    parse_scalar,
    popcount,
    scalar,
)
from .quasialg import TwistedAlgebra, invert

SCHEMA = "quasigauge.form/1"


def tau_sign(S: int, T: int) -> int:
    """Sign of tau_S tau_T = sign tau_(S|T) for disjoint S, T (both ascending)."""
    inversions = 0
    for j in range(T.bit_length()):
        if (T >> j) & 1:
            inversions += popcount(S >> (j + 1))
    return -1 if inversions & 1 else 1


class DifferentialForm:
    """Immutable sum of terms c e_a tau_S keyed by (a, S)."""

    __slots__ = ("n", "terms")

    def __init__(self, terms=None, n: int | None = None):
        if n is None:
            raise ValueError("dimension n is required")
        check_dim(n)
        clean = {}
        for (a, S), c in (terms or {}).items():
            Sm, sign = _taus_key(S, n)
            if not sign:
                continue
            key = (as_mask(a, n), Sm)
            clean[key] = clean.get(key, 0) + (c if sign > 0 else -c)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", {k: c for k, c in clean.items() if c})

    def __setattr__(self, key, value):
        raise AttributeError("DifferentialForm is immutable")

    @classmethod
    def _raw(cls, terms, n):
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "terms", {k: c for k, c in terms.items() if c})
        return obj

    # construction

    @classmethod
    def zero(cls, n):
        return cls._raw({}, n)

    @classmethod
    def function(cls, f: AlgebraElement):
        return cls._raw({(a, 0): c for a, c in f.coeffs.items()}, f.n)

    @classmethod
    def constant(cls, c, n):
        return cls._raw({(0, 0): Fraction(c) if isinstance(c, int) else c}, n)

    @classmethod
    def from_components(cls, comps: dict, n: int):
        """sum_S f_S tau_S from a mapping S -> AlgebraElement."""
        out = {}
        for S, f in comps.items():
            Sm = _taus_mask(S, n)
            for a, c in f.coeffs.items():
                out[(a, Sm)] = out.get((a, Sm), 0) + c
        return cls._raw(out, n)

    # inspection

    def degrees(self) -> set:
        return {popcount(S) for _, S in self.terms}

    @property
    def degree(self) -> int:
        """Degree of a homogeneous form (0 for the zero form)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous form with degrees {sorted(ds)}")
        return ds.pop() if ds else 0

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous(self, k: int) -> "DifferentialForm":
        return DifferentialForm._raw({key: c for key, c in self.terms.items() if popcount(key[1]) == k}, self.n)

    def component(self, S) -> AlgebraElement:
        """Function coefficient of tau_S."""
        Sm = _taus_mask(S, self.n)
        return AlgebraElement._raw({a: c for (a, T), c in self.terms.items() if T == Sm}, self.n)

    def components(self) -> dict:
        out = {}
        for (a, S), c in self.terms.items():
            out.setdefault(S, {})[a] = c
        return {S: AlgebraElement._raw(d, self.n) for S, d in out.items()}

    def group_component(self, a) -> "DifferentialForm":
        """Terms whose function part has group degree a."""
        m = as_mask(a, self.n)
        return DifferentialForm._raw({k: c for k, c in self.terms.items() if k[0] == m}, self.n)

    def group_degrees(self) -> list:
        return sorted({a for a, _ in self.terms})

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, DifferentialForm):
            if other.n != self.n:
                raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, AlgebraElement):
            if other.n != self.n:
                raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
            return DifferentialForm.function(other)
        if is_exact(other):
            return DifferentialForm.constant(other, self.n)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return DifferentialForm._raw(out, self.n)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialForm._raw({k: -c for k, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Scalar multiple, or the untwisted wedge product."""
        if is_exact(other):
            return DifferentialForm._raw({k: c * other for k, c in self.terms.items()}, self.n)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return wedge(self, other)

    def __rmul__(self, other):
        if is_exact(other):
            return self * other
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return wedge(other, self)

    def __truediv__(self, other):
        if is_exact(other):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, DifferentialForm) else other
        if other is None:
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"DifferentialForm({format_form(self)!r}, n={self.n})"

    def __str__(self):
        return format_form(self)

    def to_json(self):
        return {
            "schema": SCHEMA,
            "n": self.n,
            "terms": [
                {"a": bitstring(a, self.n), "taus": [i + 1 for i in range(self.n) if (S >> i) & 1], "coeff": format_scalar(c)}
                for (a, S), c in sorted(self.terms.items(), key=lambda kv: (popcount(kv[0][1]), kv[0][1], kv[0][0]))
            ],
        }

    @classmethod
    def from_json(cls, data):
        n = data["n"]
        return cls({(GroupVector(t["a"]).mask, tuple(t["taus"])): parse_scalar(t["coeff"]) for t in data["terms"]}, n)


def _taus_key(S, n: int):
    """(mask, sign) for a direction set given as a mask or a sequence.

    A sequence such as (2, 1) is reordered with its permutation sign; a
    repeated direction gives sign 0.
    """
    if isinstance(S, int):
        if S < 0 or S >> n:
            raise ValueError(f"direction set {S} out of range for n={n}")
        return S, 1
    S = list(S)
    for i in S:
        if not 1 <= i <= n:
            raise ValueError(f"direction {i} out of range for n={n}")
    if len(set(S)) != len(S):
        return 0, 0
    inversions = sum(1 for p in range(len(S)) for q in range(p + 1, len(S)) if S[p] > S[q])
    return sum(1 << (i - 1) for i in S), (-1 if inversions & 1 else 1)


def _taus_mask(S, n: int) -> int:
    mask, sign = _taus_key(S, n)
    if sign < 0:
        raise ValueError(f"direction set {S} is not in ascending order")
    if not sign:
        raise ValueError(f"repeated direction in {S}")
    return mask


def tau(i: int, n: int) -> DifferentialForm:
    if not 1 <= i <= n:
        raise ValueError(f"direction {i} out of range for n={n}")
    return DifferentialForm._raw({(0, 1 << (i - 1)): Fraction(1)}, n)


def theta(n: int) -> DifferentialForm:
    """sum_i tau_i."""
    return DifferentialForm._raw({(0, 1 << i): Fraction(1) for i in range(n)}, n)


def as_form(x, n: int | None = None) -> DifferentialForm:
    if isinstance(x, DifferentialForm):
        return x
    if isinstance(x, AlgebraElement):
        return DifferentialForm.function(x)
    if n is not None and is_exact(x):
        return DifferentialForm.constant(x, n)
    raise TypeError(f"cannot interpret {x!r} as a form")


def _wedge_terms(x: DifferentialForm, y: DifferentialForm, weight=None) -> dict:
    out = {}
    for (a, S), c in x.terms.items():
        for (b, T), d in y.terms.items():
            if S & T:
                continue
            sign = tau_sign(S, T)
            if parity(S & b):
                sign = -sign
            coeff = c * d if sign > 0 else -(c * d)
            if weight is not None:
                coeff = coeff * weight(a, b)
            key = (a ^ b, S | T)
            out[key] = out.get(key, 0) + coeff
    return out


def wedge(x, y) -> DifferentialForm:
    """Untwisted product: (e_a tau_S)(e_b tau_T) = (-1)^(sum_(i in S) b_i) e_(a+b) tau_S tau_T."""
    x, y = as_form(x), as_form(y)
    if x.n != y.n:
        raise DimensionError(f"dimension mismatch: {x.n} vs {y.n}")
    return DifferentialForm._raw(_wedge_terms(x, y), x.n)


def bullet_wedge(x, y, alg: TwistedAlgebra) -> DifferentialForm:
    """Twisted product: F^-1(a,b) times the wedge, tau_i carrying degree 0."""
    x, y = as_form(x), as_form(y)
    if x.n != alg.n or y.n != alg.n:
        raise DimensionError("form and algebra dimensions differ")
    return DifferentialForm._raw(_wedge_terms(x, y, alg.finv), x.n)


def d(x) -> DifferentialForm:
    """Exterior derivative: d(e_a tau_S) = sum_i -2 a_i e_a tau_i tau_S."""
    x = as_form(x)
    out = {}
    for (a, S), c in x.terms.items():
        for i in range(x.n):
            bit = 1 << i
            if a & bit and not S & bit:
                coeff = -2 * c * tau_sign(bit, S)
                key = (a, S | bit)
                out[key] = out.get(key, 0) + coeff
    return DifferentialForm._raw(out, x.n)


def partial_form(x: DifferentialForm, i: int) -> DifferentialForm:
    """Finite difference R_i - 1 applied to every coefficient."""
    bit = 1 << (i - 1)
    return DifferentialForm._raw({(a, S): -2 * c for (a, S), c in x.terms.items() if a & bit}, x.n)


def translate_form(x: DifferentialForm, i: int) -> DifferentialForm:
    bit = 1 << (i - 1)
    return DifferentialForm._raw({(a, S): (-c if a & bit else c) for (a, S), c in x.terms.items()}, x.n)


def d_position(f: AlgebraElement) -> DifferentialForm:
    """d f = sum_i (R_i f - f) tau_i computed from position-space values."""
    vals = f.values()
    comps = {}
    for i in range(f.n):
        bit = 1 << i
        comps[bit] = AlgebraElement.from_values([vals[x ^ bit] - vals[x] for x in range(len(vals))], f.n)
    return DifferentialForm.from_components(comps, f.n)


def exact_preimage(omega: DifferentialForm):
    """A function f with d f = omega, or None if there is none.

    d is diagonal in the plane-wave basis, d e_a = -2 e_a sum_(i in a) tau_i,
    so the linear system splits by group degree a: omega's degree-a part must
    be a multiple c of sum_(i in a) tau_i, giving f_a = -c/2. Degree 0 is
    never hit, so any tau term with constant coefficient certifies
    infeasibility.
    """
    if omega.degrees() - {1}:
        return None
    n = omega.n
    out = {}
    by_a = {}
    for (a, S), c in omega.terms.items():
        by_a.setdefault(a, {})[S] = c
    for a, parts in by_a.items():
        if a == 0:
            return None
        want = {1 << i for i in range(n) if (a >> i) & 1}
        if set(parts) != want:
            return None
        vals = set(parts.values())
        if len(vals) != 1:
            return None
        out[a] = -vals.pop() / 2
    return AlgebraElement(out, n)


def bullet_invariant_forms(alg: TwistedAlgebra):
    """tau_i recovered as 1/2 g_i^-1 . d g_i for the generators g_i = e_i.

    The inverse is the position-space inverse from :func:`invert`; the bullet
    inverse of a generator has the opposite sign and would give -tau_i.
    """
    out = []
    for i in range(alg.n):
        g = AlgebraElement.basis(1 << i, alg.n)
        out.append(bullet_wedge(invert(g), d(g), alg) * Fraction(1, 2))
    return tuple(out)


def classical_invariant_forms(n: int):
    """tau_i = -1/2 g_i^-1 d g_i with the untwisted product."""
    out = []
    for i in range(n):
        g = AlgebraElement.basis(1 << i, n)
        out.append(wedge(invert(g), d(g)) * Fraction(-1, 2))
    return tuple(out)


def tau_name(S: int, n: int) -> str:
    return "*".join(f"tau[{i + 1}]" for i in range(n) if (S >> i) & 1)


def format_form(x: DifferentialForm) -> str:
    def key(kv):
        (a, S), _ = kv
        return (popcount(S), bitstring(S, x.n)[::-1], popcount(a), bitstring(a, x.n)[::-1])

    parts = []
    for (a, S), c in sorted(x.terms.items(), key=key):
        fa = basis_name(a, x.n)
        ts = tau_name(S, x.n)
        if S == 0:
            mono = fa
        elif a == 0:
            mono = ts
        else:
            mono = f"{fa}*{ts}"
        parts.append((c, mono))
    return join_terms(parts)


def random_form(rng, n: int, max_terms: int = 6, degree=None, coeff_range: int = 5, complex_coeffs: bool = False):
    """Random exact form, for tests and demos. ``rng`` is a random.Random."""
    terms = {}
    N = 1 << n
    for _ in range(rng.randint(1, max_terms)):
        a = rng.randrange(N)
        if degree is None:
            S = rng.randrange(N)
        else:
            dirs = rng.sample(range(n), degree) if degree <= n else []
            S = sum(1 << i for i in dirs)
            if degree > n:
                continue
        num = rng.randint(-coeff_range, coeff_range)
        c = Fraction(num, rng.randint(1, 3))
        if complex_coeffs:
            c = scalar(c, Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3)))
        terms[(a, S)] = terms.get((a, S), 0) + c
    return DifferentialForm(terms, n)
