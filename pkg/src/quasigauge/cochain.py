"""Cochains on Z_2^n, their coboundary and Fourier transform."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .core import (
    GroupVector,
    as_mask,
    bitstring,
    check_dim,
    cross,
    dot,
    format_scalar,
    parity,
    parse_scalar,
    walsh_hadamard,
)

SCHEMA = "quasigauge.cochain/1"

_ONE, _MINUS_ONE = Fraction(1), Fraction(-1)

# tabulate eagerly up to this dimension, evaluate on demand above it
_TABLE_DIM = 6


class ExponentForm:
    """F(a,b) = (-1)^(a^T M b + sum of monomials).

    ``monomials`` is a tuple of monomials, each a tuple of (arg, index) pairs
    with arg 0 for the first argument, 1 for the second, and index 1-based.
    ``((0, 1), (1, 2), (1, 3))`` is a1 b2 b3.
    """

    def __init__(self, matrix, monomials=()):
        self.matrix = tuple(tuple(int(x) % 2 for x in row) for row in matrix)
        self.n = len(self.matrix)
        if any(len(row) != self.n for row in self.matrix):
            raise ValueError("matrix must be square")
        self.monomials = tuple(tuple((int(s), int(i)) for s, i in mono) for mono in monomials)
        for mono in self.monomials:
            for s, i in mono:
                if s not in (0, 1) or not 1 <= i <= self.n:
                    raise ValueError(f"bad monomial {mono}")
        self._rows = [sum(1 << j for j in range(self.n) if self.matrix[i][j]) for i in range(self.n)]
        self._monos = [
            (sum(1 << (i - 1) for s, i in mono if s == 0), sum(1 << (i - 1) for s, i in mono if s == 1))
            for mono in self.monomials
        ]

    def exponent(self, a: int, b: int) -> int:
        e = 0
        for i, row in enumerate(self._rows):
            if (a >> i) & 1:
                e ^= parity(row & b)
        for ma, mb in self._monos:
            if a & ma == ma and b & mb == mb:
                e ^= 1
        return e

    def __call__(self, a: int, b: int) -> int:
        return -1 if self.exponent(a, b) else 1

    def to_json(self):
        return {"matrix": [list(r) for r in self.matrix], "cubic": [monomial_name(m) for m in self.monomials]}

    @classmethod
    def from_json(cls, data):
        return cls(data["matrix"], [parse_monomial(t) for t in data.get("cubic", [])])

    def __eq__(self, other):
        return isinstance(other, ExponentForm) and self.matrix == other.matrix and set(self.monomials) == set(other.monomials)

    def __repr__(self):
        return f"ExponentForm({self.matrix}, {self.monomials})"


def monomial_name(mono, letters="ab") -> str:
    return "".join(f"{letters[s]}{i}" for s, i in sorted(mono, key=lambda t: (t[1], t[0])))


def parse_monomial(text: str, letters="ab"):
    out = []
    pos = 0
    while pos < len(text):
        s = letters.index(text[pos])
        j = pos + 1
        while j < len(text) and text[j].isdigit():
            j += 1
        out.append((s, int(text[pos + 1:j])))
        pos = j
    return tuple(out)


class Cochain:
    """A normalized, nowhere vanishing function F(a,b) on Z_2^n x Z_2^n."""

    def __init__(self, n: int, func=None, exponent_form: ExponentForm | None = None, table=None, name=""):
        self.n = check_dim(n)
        self.name = name
        self.exponent_form = exponent_form
        N = 1 << n
        if exponent_form is not None:
            if exponent_form.n != n:
                raise ValueError("exponent form dimension mismatch")
            func = func or exponent_form
        self._func = func
        self._table = None
        if table is not None:
            table = list(table)
            if len(table) != N * N:
                raise ValueError(f"table needs {N * N} entries")
            self._table = [Fraction(v) if isinstance(v, int) else v for v in table]
        elif n <= _TABLE_DIM:
            self._table = [self._scal(func(a, b)) for a in range(N) for b in range(N)]
        if self._table is None and func is None:
            raise ValueError("need a function, an exponent form or a table")
        if self._table is not None and exponent_form is not None:
            for a in range(N):
                for b in range(N):
                    if self._table[a * N + b] != exponent_form(a, b):
                        raise ValueError(f"table disagrees with exponent form at ({a}, {b})")
        for a in range(N) if n <= _TABLE_DIM else (0,):
            if self.value(0, a) != 1 or self.value(a, 0) != 1:
                raise ValueError("cochain is not normalized: F(0,b) = F(a,0) = 1 fails")
        if self._table is not None and any(v == 0 for v in self._table):
            raise ValueError("cochain vanishes somewhere")

    @staticmethod
    def _scal(v):
        return Fraction(v) if isinstance(v, int) else v

    def value(self, a: int, b: int):
        """F on int masks."""
        if self._table is not None:
            return self._table[(a << self.n) | b]
        return self._scal(self._func(a, b))

    def __call__(self, a, b):
        return self.value(as_mask(a, self.n), as_mask(b, self.n))

    @property
    def table(self) -> list:
        if self._table is None:
            N = 1 << self.n
            self._table = [self.value(a, b) for a in range(N) for b in range(N)]
        return self._table

    def is_sign_valued(self) -> bool:
        return all(v == 1 or v == -1 for v in self.table)

    def inverse(self) -> "Cochain":
        """The pointwise inverse F^-1."""
        return Cochain(self.n, table=[Fraction(1) / v for v in self.table], name=f"{self.name}^-1" if self.name else "")

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.n == other.n and self.table == other.table

    def __repr__(self):
        return f"Cochain(n={self.n}{', ' + self.name if self.name else ''})"

    def to_json(self):
        N = 1 << self.n
        data = {
            "schema": SCHEMA,
            "n": self.n,
            "values": {
                f"{bitstring(a, self.n)}|{bitstring(b, self.n)}": format_scalar(self.value(a, b))
                for a in range(N)
                for b in range(N)
            },
        }
        if self.exponent_form is not None:
            data["exponent_form"] = self.exponent_form.to_json()
        return data

    @classmethod
    def from_json(cls, data):
        n = data["n"]
        if "exponent_form" in data:
            return cls(n, exponent_form=ExponentForm.from_json(data["exponent_form"]))
        N = 1 << n
        table = [None] * (N * N)
        for key, txt in data["values"].items():
            a, b = key.split("|")
            table[(GroupVector(a).mask << n) | GroupVector(b).mask] = parse_scalar(txt)
        return cls(n, table=table)


class Associator:
    """Phi(a,b,c), a 3-argument scalar function on the group."""

    def __init__(self, n: int, func=None, table=None):
        self.n = check_dim(n)
        self._func = func
        self._table = list(table) if table is not None else None
        if self._table is None and func is None:
            raise ValueError("need a function or a table")

    def value(self, a: int, b: int, c: int):
        if self._table is not None:
            return self._table[(((a << self.n) | b) << self.n) | c]
        return self._func(a, b, c)

    def __call__(self, a, b, c):
        return self.value(as_mask(a, self.n), as_mask(b, self.n), as_mask(c, self.n))

    @property
    def table(self):
        if self._table is None:
            N = 1 << self.n
            self._table = [self._func(a, b, c) for a in range(N) for b in range(N) for c in range(N)]
        return self._table

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.table)


def coboundary(F: Cochain) -> Associator:
    """Phi(a,b,c) = F(b,c) F(a,b+c) / (F(a+b,c) F(a,b))."""
    n = F.n
    f = F.value
    sign_valued = F.is_sign_valued() if n <= _TABLE_DIM else False
    if sign_valued:
        # integer signs avoid Fraction arithmetic; results are mapped back to Fractions
        t = [1 if v == 1 else -1 for v in F.table]
        signs = (None, _ONE, _MINUS_ONE)

        def phi(a, b, c):
            return signs[t[(b << n) | c] * t[(a << n) | (b ^ c)] * t[((a ^ b) << n) | c] * t[(a << n) | b]]
    else:
        def phi(a, b, c):
            return f(b, c) * f(a, b ^ c) / (f(a ^ b, c) * f(a, b))

    if n <= 4:
        N = 1 << n
        return Associator(n, table=[phi(a, b, c) for a in range(N) for b in range(N) for c in range(N)])
    return Associator(n, func=phi)


def is_normalized(phi: Associator) -> bool:
    N = 1 << phi.n
    for x in range(N):
        for y in range(N):
            if phi.value(0, x, y) != 1 or phi.value(x, 0, y) != 1 or phi.value(x, y, 0) != 1:
                return False
    return True


def cocycle_failures(phi: Associator, limit: int | None = None) -> list:
    """Quadruples where Phi(b,c,d) Phi(a,b+c,d) Phi(a,b,c) != Phi(a+b,c,d) Phi(a,b,c+d)."""
    N = 1 << phi.n
    p = phi.value
    bad = []
    for a in range(N):
        for b in range(N):
            for c in range(N):
                lhs_bc = p(a, b, c)
                for d in range(N):
                    if p(b, c, d) * p(a, b ^ c, d) * lhs_bc != p(a ^ b, c, d) * p(a, b, c ^ d):
                        bad.append((a, b, c, d))
                        if limit is not None and len(bad) >= limit:
                            return bad
    return bad


def is_cocycle(phi: Associator) -> bool:
    """Normalized 3-cocycle test, exhaustive over all quadruples.

    A function that satisfies the identity but is not 1 whenever an argument
    is 0 is rejected.
    """
    return is_normalized(phi) and not cocycle_failures(phi, limit=1)


# ---------------------------------------------------------------- built-ins

_OCTONION_MATRIX = ((1, 1, 1), (0, 1, 1), (0, 0, 1))
# a1 b2 b3 + b1 a2 b3 + b1 b2 a3
_OCTONION_CUBIC = (((0, 1), (1, 2), (1, 3)), ((1, 1), (0, 2), (1, 3)), ((1, 1), (1, 2), (0, 3)))
# b1 a2 a3 + a1 b2 a3 + a1 a2 b3, same associator, different signs
_OCTONION_CUBIC_T = (((1, 1), (0, 2), (0, 3)), ((0, 1), (1, 2), (0, 3)), ((0, 1), (0, 2), (1, 3)))


def octonion_cochain(transposed_cubic: bool = False) -> Cochain:
    """The cochain twisting the group algebra of Z_2^3 into the octonions.

    By default the cubic part is a1 b2 b3 + b1 a2 b3 + b1 b2 a3, which is linear
    in the first argument. ``transposed_cubic=True`` gives the companion
    cochain with cubic part b1 a2 a3 + a1 b2 a3 + a1 a2 b3. Both have the same
    associator (-1)^(a.(b x c)) and the same squares, but they are different
    cochains with different Fourier transforms.
    """
    cubic = _OCTONION_CUBIC_T if transposed_cubic else _OCTONION_CUBIC
    name = "octonion-transposed" if transposed_cubic else "octonion"
    return Cochain(3, exponent_form=ExponentForm(_OCTONION_MATRIX, cubic), name=name)


def clifford_cochain(n: int) -> Cochain:
    """F(a,b) = (-1)^(sum_{i<=j} a_i b_j); associative twist."""
    matrix = [[1 if j >= i else 0 for j in range(n)] for i in range(n)]
    return Cochain(n, exponent_form=ExponentForm(matrix), name=f"clifford-{n}")


def quaternion_cochain() -> Cochain:
    c = clifford_cochain(2)
    c.name = "quaternion"
    return c


def trivial_cochain(n: int) -> Cochain:
    return Cochain(n, exponent_form=ExponentForm([[0] * n for _ in range(n)]), name=f"trivial-{n}")


def triple_product_associator() -> Associator:
    """(-1)^(a.(b x c)) on Z_2^3, written independently of any cochain."""

    def phi(a, b, c):
        A, B, C = (GroupVector(x, 3) for x in (a, b, c))
        return Fraction(-1) if dot(A, cross(B, C)) else Fraction(1)

    N = 8
    return Associator(3, table=[phi(a, b, c) for a in range(N) for b in range(N) for c in range(N)])


# ---------------------------------------------------------------- Fourier


class PositionCochain:
    """F(y,z) = sum_{a,b} F(a,b) e_a(y) e_b(z), with its 2^n factor kept."""

    def __init__(self, n: int, table):
        self.n = n
        self.table = list(table)

    def value(self, y: int, z: int):
        return self.table[(y << self.n) | z]

    def __call__(self, y, z):
        return self.value(as_mask(y, self.n), as_mask(z, self.n))

    def normalized(self, y, z):
        """F(y,z) / 2^n."""
        return self(y, z) / (1 << self.n)

    def normalized_table(self):
        scale = Fraction(1, 1 << self.n)
        return [v * scale for v in self.table]

    def __eq__(self, other):
        return isinstance(other, PositionCochain) and self.n == other.n and self.table == other.table

    def to_json(self):
        N = 1 << self.n
        return {
            "schema": "quasigauge.position-cochain/1",
            "n": self.n,
            "values": {
                f"{bitstring(y, self.n)}|{bitstring(z, self.n)}": format_scalar(self.value(y, z))
                for y in range(N)
                for z in range(N)
            },
        }


def fourier_cochain(F: Cochain) -> PositionCochain:
    """Transform both arguments to position space; the 2^n factor is kept."""
    n = F.n
    N = 1 << n
    rows = [walsh_hadamard(F.table[a * N:(a + 1) * N]) for a in range(N)]
    out = [None] * (N * N)
    for z in range(N):
        col = walsh_hadamard([rows[a][z] for a in range(N)])
        for y in range(N):
            out[y * N + z] = col[y]
    return PositionCochain(n, out)


# Expected position-space forms, exponent only (the value is 2^n times the sign).
_OCTONION_POSITION_MATRIX = ((1, 1, 0), (0, 1, 0), (1, 1, 1))


def octonion_position_form() -> ExponentForm:
    """y^T M z + y1 z2 z3 + z1 y2 z3 + z1 z2 y3 with M = (1 1 0; 0 1 0; 1 1 1)."""
    return ExponentForm(_OCTONION_POSITION_MATRIX, _OCTONION_CUBIC)


def clifford_position_form(n: int) -> ExponentForm:
    """(y1 + y2) z1 + (y2 + y3) z2 + ... + yn zn."""
    matrix = [[1 if i in (j, j + 1) else 0 for j in range(n)] for i in range(n)]
    return ExponentForm(matrix)


def fourier_mismatches(F: Cochain, form: ExponentForm) -> list:
    """Pairs (y, z) where the transform of F differs from 2^n (-1)^form(y,z)."""
    P = fourier_cochain(F)
    N = 1 << F.n
    return [(y, z) for y in range(N) for z in range(N) if P.value(y, z) != N * form(y, z)]


def fourier_relabellings(F: Cochain) -> list:
    """Relabellings under which the normalized transform of F has the same form as F."""
    P = fourier_cochain(F)
    return relabellings(P.normalized, F, F.n)


def anf(bits_function, nvars: int) -> list:
    """Algebraic normal form of a Boolean function as a list of variable masks."""
    g = [bits_function(x) & 1 for x in range(1 << nvars)]
    h = 1
    while h < len(g):
        for i in range(0, len(g), 2 * h):
            for j in range(i, i + h):
                g[j + h] ^= g[j]
        h *= 2
    return [m for m, v in enumerate(g) if v]


def fit_exponent_form(sign_function, n: int) -> ExponentForm:
    """Recover the exponent form of a +-1 valued normalized two-argument function.

    Degree-two monomials with one variable from each argument go into the
    matrix; everything else is kept as an extra monomial.
    """

    def bit(x):
        a, b = x & ((1 << n) - 1), x >> n
        v = sign_function(a, b)
        if v not in (1, -1):
            raise ValueError("function is not +-1 valued")
        return 1 if v == -1 else 0

    matrix = [[0] * n for _ in range(n)]
    extra = []
    for m in anf(bit, 2 * n):
        vars_ = [(0, i + 1) for i in range(n) if (m >> i) & 1] + [(1, i + 1) for i in range(n) if (m >> (n + i)) & 1]
        if len(vars_) == 2 and vars_[0][0] == 0 and vars_[1][0] == 1:
            matrix[vars_[0][1] - 1][vars_[1][1] - 1] = 1
        else:
            extra.append(tuple(vars_))
    return ExponentForm(matrix, extra)


def describe_exponent(form: ExponentForm, letters="ab") -> str:
    terms = []
    for i in range(form.n):
        for j in range(form.n):
            if form.matrix[i][j]:
                terms.append(f"{letters[0]}{i + 1}{letters[1]}{j + 1}")
    terms += [monomial_name(m, letters) for m in form.monomials]
    return " + ".join(terms) if terms else "0"


def permute_mask(mask: int, perm) -> int:
    """Send direction k (0-based) to perm[k]."""
    return sum(1 << perm[k] for k in range(len(perm)) if (mask >> k) & 1)


def relabellings(f1, f2, n: int, allow_swap: bool = True) -> list:
    """All (perm, swap) with f1(P a, P b) == f2(a, b) (or f2(b, a) when swapped) for all a, b.

    ``perm`` sends direction k to perm[k], both 0-based.
    """
    N = 1 << n
    found = []
    for perm in permutations(range(n)):
        pm = [permute_mask(x, perm) for x in range(N)]
        for swap in (False, True) if allow_swap else (False,):
            ok = True
            for a in range(N):
                for b in range(N):
                    rhs = f2(b, a) if swap else f2(a, b)
                    if f1(pm[a], pm[b]) != rhs:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append((perm, swap))
    return found


def rotation(n: int, shift: int = 1):
    """Cyclic relabelling i -> i + shift."""
    return tuple((k + shift) % n for k in range(n))
