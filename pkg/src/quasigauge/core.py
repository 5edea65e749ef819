"""Group arithmetic on Z_2^n, exact scalars, plane waves and the Fourier transform.

Group elements are stored as int bitmasks: direction i (1-based) is bit i-1.
Bitstrings are written with the first direction on the left, so ``"100"`` is
the vector (1, 0, 0).
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

MAX_DIM = 16


class DimensionError(ValueError):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def parity(x: int) -> int:
    return popcount(x) & 1


def check_dim(n: int) -> int:
    if not isinstance(n, int) or not 1 <= n <= MAX_DIM:
        raise DimensionError(f"dimension must be an int in 1..{MAX_DIM}, got {n!r}")
    return n


class GroupVector:
    """An element of Z_2^n."""

    __slots__ = ("mask", "n")

    def __init__(self, bits, n: int | None = None):
        if isinstance(bits, GroupVector):
            mask, n0 = bits.mask, bits.n
            if n is not None and n != n0:
                raise DimensionError(f"expected dimension {n}, got {n0}")
            n = n0
        elif isinstance(bits, str):
            if not bits or set(bits) - {"0", "1"}:
                raise ValueError(f"not a bitstring: {bits!r}")
            if n is not None and n != len(bits):
                raise DimensionError(f"bitstring {bits!r} has length {len(bits)}, expected {n}")
            n = len(bits)
            mask = sum(1 << i for i, ch in enumerate(bits) if ch == "1")
        elif isinstance(bits, int):
            if n is None:
                raise ValueError("an int mask needs an explicit dimension")
            if bits < 0 or bits >> n:
                raise ValueError(f"mask {bits} out of range for n={n}")
            mask = bits
        else:
            bits = tuple(bits)
            if any(b not in (0, 1) for b in bits):
                raise ValueError(f"entries must be 0 or 1: {bits}")
            if n is not None and n != len(bits):
                raise DimensionError(f"expected {n} entries, got {len(bits)}")
            n = len(bits)
            mask = sum(b << i for i, b in enumerate(bits))
        object.__setattr__(self, "n", check_dim(n))
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, key, value):
        raise AttributeError("GroupVector is immutable")

    @property
    def bits(self) -> tuple:
        return tuple((self.mask >> i) & 1 for i in range(self.n))

    def __getitem__(self, i):
        return self.bits[i]

    def __iter__(self):
        return iter(self.bits)

    def __len__(self):
        return self.n

    def _same(self, other) -> "GroupVector":
        other = other if isinstance(other, GroupVector) else GroupVector(other, self.n)
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        return other

    def __add__(self, other):
        other = self._same(other)
        return GroupVector(self.mask ^ other.mask, self.n)

    __sub__ = __add__

    def __neg__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, GroupVector):
            return self.n == other.n and self.mask == other.mask
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.mask))

    def __bool__(self):
        return self.mask != 0

    def __str__(self):
        return "".join(str(b) for b in self.bits)

    def __repr__(self):
        return f"GroupVector('{self}')"

    @classmethod
    def zero(cls, n):
        return cls(0, n)

    @classmethod
    def unit(cls, i, n):
        """The basis vector e_i, 1-based."""
        if not 1 <= i <= n:
            raise ValueError(f"direction {i} out of range for n={n}")
        return cls(1 << (i - 1), n)


def as_mask(a, n: int) -> int:
    """Accept a GroupVector, bitstring, bit tuple or int mask and return the mask."""
    if isinstance(a, int):
        if a < 0 or a >> n:
            raise ValueError(f"mask {a} out of range for n={n}")
        return a
    return GroupVector(a, n).mask


def elements(n: int):
    return [GroupVector(m, n) for m in range(1 << n)]


def group_add(a: GroupVector, b: GroupVector) -> GroupVector:
    return GroupVector(a) + b


def dot(a: GroupVector, b: GroupVector) -> int:
    a = GroupVector(a)
    b = a._same(b)
    return parity(a.mask & b.mask)


def cross(a: GroupVector, b: GroupVector) -> GroupVector:
    a = GroupVector(a)
    b = a._same(b)
    if a.n != 3:
        raise DimensionError("cross product needs n=3")
    a1, a2, a3 = a.bits
    b1, b2, b3 = b.bits
    return GroupVector(((a2 * b3 + a3 * b2) % 2, (a3 * b1 + a1 * b3) % 2, (a1 * b2 + a2 * b1) % 2))


def plane_wave(a: GroupVector, x: GroupVector) -> int:
    """e_a(x) = (-1)^(a.x)."""
    return -1 if dot(a, x) else 1


def bitstring(mask: int, n: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


# ---------------------------------------------------------------- scalars


class GaussianRational:
    """Exact complex number p + q i with rational p, q.

    Use :func:`scalar` to build values; it returns a plain Fraction when the
    imaginary part is zero so real arithmetic stays on the fast path.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, key, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Rational)):
            return Fraction(x), Fraction(0)
        if isinstance(x, complex) or isinstance(x, float):
            raise TypeError("floats are not exact scalars")
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return scalar(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return scalar(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return scalar(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        return scalar(self.re * c - self.im * d, self.re * d + self.im * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("division by zero scalar")
        return scalar((self.re * c + self.im * d) / den, (self.im * c - self.re * d) / den)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(*p) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return scalar(self.re, -self.im)

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        p = self._parts(other) if not isinstance(other, (complex, float)) else None
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(0, 1)


def scalar(re=0, im=0):
    """Build an exact scalar: a Fraction, or a GaussianRational if im != 0."""
    if isinstance(re, GaussianRational):
        return re + scalar(0, im) if im else (re if re.im else re.re)
    if isinstance(re, float) or isinstance(im, float):
        raise TypeError("floats are not exact scalars")
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return GaussianRational(re, im)


def format_scalar(x) -> str:
    """Print as "p/q" or "p/q+r/s i"."""
    if isinstance(x, GaussianRational):
        re, im = x.re, x.im
    else:
        re, im = Fraction(x), Fraction(0)
    if im == 0:
        return str(re)
    sign = "-" if im < 0 else "+"
    im_txt = "" if abs(im) == 1 else str(abs(im))
    im_txt = f"{im_txt} i" if im_txt else "i"
    if re == 0:
        return ("-" if im < 0 else "") + im_txt
    return f"{re}{sign}{im_txt}"


_SCALAR_RE = re.compile(
    r"^\s*(?:(?P<re>[+-]?\d+(?:/\d+)?)(?:\s*(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?"
    r"|(?P<ionly>[+-]?(?:\d+(?:/\d+)?)?)\s*\*?\s*i)\s*$"
)


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`."""
    m = _SCALAR_RE.match(text)
    if not m:
        raise ValueError(f"not an exact scalar: {text!r}")
    if m.group("re") is not None:
        re_part = Fraction(m.group("re"))
        if m.group("sign") is None:
            return re_part
        im = Fraction(m.group("im") or 1)
        return scalar(re_part, im if m.group("sign") == "+" else -im)
    coef = m.group("ionly")
    if coef in ("", "+"):
        im = Fraction(1)
    elif coef == "-":
        im = Fraction(-1)
    else:
        im = Fraction(coef)
    return scalar(0, im)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


# ---------------------------------------------------------------- elements


class AlgebraElement:
    """A finitely supported map Z_2^n -> scalars, sum of c_a e_a.

    ``*`` is the untwisted group-algebra product e_a e_b = e_(a+b), which is
    the pointwise product of the corresponding position-space functions.
    The twisted product lives in :mod:`quasigauge.quasialg`.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, coeffs=None, n: int | None = None):
        if n is None:
            raise ValueError("dimension n is required")
        check_dim(n)
        clean = {}
        for a, c in (coeffs or {}).items():
            m = as_mask(a, n)
            if c:
                clean[m] = clean.get(m, 0) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", {m: c for m, c in clean.items() if c})

    def __setattr__(self, key, value):
        raise AttributeError("AlgebraElement is immutable")

    @classmethod
    def _raw(cls, coeffs: dict, n: int):
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "coeffs", {m: c for m, c in coeffs.items() if c})
        return obj

    @classmethod
    def basis(cls, a, n: int | None = None, coeff=1):
        if isinstance(a, (GroupVector, str)) and n is None:
            a = GroupVector(a)
            n = a.n
        return cls._raw({as_mask(a, n): Fraction(coeff) if isinstance(coeff, int) else coeff}, n)

    @classmethod
    def one(cls, n):
        return cls._raw({0: Fraction(1)}, n)

    @classmethod
    def zero(cls, n):
        return cls._raw({}, n)

    @classmethod
    def constant(cls, c, n):
        return cls._raw({0: c}, n)

    @classmethod
    def from_values(cls, values, n: int | None = None):
        """Position-space function (sequence indexed by x mask) to coefficients."""
        values = list(values)
        if n is None:
            n = len(values).bit_length() - 1
        return fourier(values, n)

    def values(self) -> list:
        """Position-space values f(x) for x = 0 .. 2^n - 1."""
        return inverse_fourier(self)

    def __call__(self, x):
        xm = as_mask(x, self.n)
        return sum((c if not parity(a & xm) else -c for a, c in self.coeffs.items()), Fraction(0))

    def __getitem__(self, a):
        return self.coeffs.get(as_mask(a, self.n), Fraction(0))

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return None
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        return other

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            if is_exact(other):
                other = AlgebraElement.constant(other, self.n)
            else:
                return NotImplemented
        self._check(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return AlgebraElement._raw(out, self.n)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw({a: -c for a, c in self.coeffs.items()}, self.n)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            out = {}
            for a, c in self.coeffs.items():
                for b, d in other.coeffs.items():
                    out[a ^ b] = out.get(a ^ b, 0) + c * d
            return AlgebraElement._raw(out, self.n)
        if is_exact(other):
            return AlgebraElement._raw({a: c * other for a, c in self.coeffs.items()}, self.n)
        return NotImplemented

    def __rmul__(self, other):
        if is_exact(other):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if is_exact(other):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.n == other.n and self.coeffs == other.coeffs
        if is_exact(other):
            return self == AlgebraElement.constant(other, self.n)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def support(self):
        return sorted(self.coeffs)

    def component(self, a) -> "AlgebraElement":
        """The degree-a part c_a e_a."""
        m = as_mask(a, self.n)
        return AlgebraElement._raw({m: self.coeffs[m]} if m in self.coeffs else {}, self.n)

    def translate(self, i: int) -> "AlgebraElement":
        """R_i f(x) = f(x + e_i); on plane waves e_a -> (-1)^(a_i) e_a."""
        bit = 1 << (i - 1)
        return AlgebraElement._raw({a: (-c if a & bit else c) for a, c in self.coeffs.items()}, self.n)

    def partial(self, i: int) -> "AlgebraElement":
        """Finite difference R_i - 1; on plane waves e_a -> -2 a_i e_a."""
        bit = 1 << (i - 1)
        return AlgebraElement._raw({a: -2 * c for a, c in self.coeffs.items() if a & bit}, self.n)

    def conjugate(self):
        out = {}
        for a, c in self.coeffs.items():
            out[a] = c.conjugate() if isinstance(c, GaussianRational) else c
        return AlgebraElement._raw(out, self.n)

    def __repr__(self):
        return f"AlgebraElement({format_element(self)!r}, n={self.n})"

    def __str__(self):
        return format_element(self)

    def to_json(self):
        return {
            "n": self.n,
            "terms": [{"a": bitstring(a, self.n), "coeff": format_scalar(c)} for a, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data):
        n = data["n"]
        return cls({GroupVector(t["a"]).mask: parse_scalar(t["coeff"]) for t in data["terms"]}, n)


GENERATOR_NAMES = ("u", "v", "w")


def basis_name(a: int, n: int) -> str:
    if a == 0:
        return "1"
    if n <= 3 and popcount(a) == 1:
        return GENERATOR_NAMES[a.bit_length() - 1]
    return f"e[{bitstring(a, n)}]"


def join_terms(parts) -> str:
    """Join (coefficient, monomial) pairs as "c*m + c*m - m"."""
    out = ""
    for coeff, mono in parts:
        txt = format_scalar(coeff)
        neg = False
        if isinstance(coeff, GaussianRational):
            txt = f"({txt})"
        elif coeff < 0:
            neg = True
            txt = format_scalar(-coeff)
        if mono == "1":
            body = txt
        elif txt == "1":
            body = mono
        else:
            body = f"{txt}*{mono}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


def format_element(x: AlgebraElement) -> str:
    return join_terms((x.coeffs[a], basis_name(a, x.n)) for a in sorted(x.coeffs, key=lambda m: (popcount(m), bitstring(m, x.n)[::-1])))


# ---------------------------------------------------------------- Fourier


def _butterfly(vals: list) -> list:
    vals = list(vals)
    h = 1
    size = len(vals)
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                x, y = vals[j], vals[j + h]
                vals[j], vals[j + h] = x + y, x - y
        h *= 2
    return vals


def walsh_hadamard(vals) -> list:
    """Unnormalized transform g(a) = sum_x f(x) (-1)^(a.x), exact."""
    vals = list(vals)
    if len(vals) & (len(vals) - 1) or not vals:
        raise ValueError("length must be a power of two")
    return _butterfly(vals)


def fourier(values, n: int | None = None) -> AlgebraElement:
    """f_a = 2^-n sum_x f(x) e_a(x)."""
    values = list(values)
    if n is None:
        n = len(values).bit_length() - 1
    if len(values) != 1 << n:
        raise DimensionError(f"need {1 << n} values for n={n}, got {len(values)}")
    scale = Fraction(1, 1 << n)
    g = _butterfly([Fraction(v) if isinstance(v, int) else v for v in values])
    return AlgebraElement._raw({a: c * scale for a, c in enumerate(g)}, n)


def inverse_fourier(elem: AlgebraElement) -> list:
    """f(x) = sum_a f_a e_a(x), for every x."""
    vals = [Fraction(0)] * (1 << elem.n)
    for a, c in elem.coeffs.items():
        vals[a] = c
    return _butterfly(vals)
