"""The twisted group algebra A_F, inverses, and star-product expansions."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from itertools import permutations

from .cochain import Cochain, PositionCochain, coboundary, fourier_cochain, permute_mask
from .core import (
    AlgebraElement,
    DimensionError,
    GroupVector,
    as_mask,
    bitstring,
    format_scalar,
    parity,
    parse_scalar,
    popcount,
)


class SingularGaugeElement(ValueError):
    """Raised when an element vanishes at some position x."""

    def __init__(self, x: GroupVector, element=None):
        self.x = x
        self.element = element
        super().__init__(f"element vanishes at position x={x}")


class TwistedAlgebra:
    """Group algebra of Z_2^n with product e_a . e_b = F^-1(a,b) e_(a+b)."""

    def __init__(self, F: Cochain):
        self.F = F
        self.n = F.n
        sign_valued = F.is_sign_valued()
        self._finv = F.table if sign_valued else F.inverse().table
        self._signs = [1 if v == 1 else -1 for v in self._finv] if sign_valued else None
        self._phi = None

    @property
    def phi(self):
        if self._phi is None:
            self._phi = coboundary(self.F)
        return self._phi

    def finv(self, a: int, b: int):
        return self._finv[(a << self.n) | b]

    def basis_product(self, a: int, b: int):
        """(coefficient, mask) of e_a . e_b."""
        return self.finv(a, b), a ^ b

    def bullet(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        return bullet(x, y, self)

    def __repr__(self):
        return f"TwistedAlgebra({self.F!r})"


def _check(x: AlgebraElement, alg: TwistedAlgebra):
    if x.n != alg.n:
        raise DimensionError(f"element has n={x.n}, algebra has n={alg.n}")


def bullet(x: AlgebraElement, y: AlgebraElement, alg: TwistedAlgebra) -> AlgebraElement:
    _check(x, alg)
    _check(y, alg)
    out = {}
    for a, c in x.coeffs.items():
        for b, d in y.coeffs.items():
            m = a ^ b
            out[m] = out.get(m, 0) + alg.finv(a, b) * c * d
    return AlgebraElement._raw(out, alg.n)


def associator_identity(a, b, c, alg: TwistedAlgebra) -> bool:
    """(e_a . e_b) . e_c == Phi(a,b,c) e_a . (e_b . e_c) on basis elements."""
    n = alg.n
    a, b, c = as_mask(a, n), as_mask(b, n), as_mask(c, n)
    if alg._signs is not None:
        t = alg._signs
        lhs = t[(a << n) | b] * t[((a ^ b) << n) | c]
        rhs = t[(b << n) | c] * t[(a << n) | (b ^ c)]
        return lhs == alg.phi.value(a, b, c) * rhs
    s1, ab = alg.basis_product(a, b)
    s2, _ = alg.basis_product(ab, c)
    t1, bc = alg.basis_product(b, c)
    t2, _ = alg.basis_product(a, bc)
    return s1 * s2 == alg.phi.value(a, b, c) * t1 * t2


def multiplication_table(alg: TwistedAlgebra):
    """Rows of (coefficient, mask) pairs for e_a . e_b."""
    N = 1 << alg.n
    return [[alg.basis_product(a, b) for b in range(N)] for a in range(N)]


def e_normalized(a, alg: TwistedAlgebra | None = None) -> AlgebraElement:
    """E_a = (-1)^(a1 a2 + a1 a3 + a2 a3) e_a on Z_2^3."""
    n = 3 if alg is None else alg.n
    if n != 3:
        raise DimensionError("E_a is defined for n=3")
    m = as_mask(a, 3)
    a1, a2, a3 = m & 1, (m >> 1) & 1, (m >> 2) & 1
    sign = -1 if (a1 * a2 + a1 * a3 + a2 * a3) % 2 else 1
    return AlgebraElement.basis(m, 3, sign)


def e_ordered_product(a, alg: TwistedAlgebra) -> AlgebraElement:
    """(u^a1 . v^a2) . w^a3 computed with the bullet product."""
    m = as_mask(a, 3)
    out = AlgebraElement.one(3)
    for i in range(3):
        if (m >> i) & 1:
            out = bullet(out, AlgebraElement.basis(1 << i, 3), alg)
    return out


def invert(gamma: AlgebraElement, alg: TwistedAlgebra | None = None) -> AlgebraElement:
    """Inverse through position space: coefficients of 1/gamma(x).

    This is the inverse for the untwisted product and, equivalently, for the
    twisted convolution sum_(a,b) F(a,b) x_a . y_b. It is not the inverse for
    the bullet product itself (see :func:`bullet_inverse`).
    """
    vals = gamma.values()
    for x, v in enumerate(vals):
        if v == 0:
            raise SingularGaugeElement(GroupVector(x, gamma.n), gamma)
    return AlgebraElement.from_values([Fraction(1) / v for v in vals], gamma.n)


def twisted_convolution(x: AlgebraElement, y: AlgebraElement, alg: TwistedAlgebra) -> AlgebraElement:
    """sum_(a,b) F(a,b) x_a . y_b."""
    out = AlgebraElement.zero(alg.n)
    for a, c in x.coeffs.items():
        for b, d in y.coeffs.items():
            term = bullet(AlgebraElement.basis(a, alg.n, c), AlgebraElement.basis(b, alg.n, d), alg)
            out = out + term * alg.F.value(a, b)
    return out


def solve_exact(matrix, rhs):
    """Solve a square linear system over exact scalars by Gauss-Jordan elimination.

    Returns None when the matrix is singular.
    """
    size = len(matrix)
    rows = [list(matrix[i]) + [rhs[i]] for i in range(size)]
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return [rows[i][size] for i in range(size)]


def bullet_inverse(gamma: AlgebraElement, alg: TwistedAlgebra, side: str = "left") -> AlgebraElement:
    """Solve g . gamma = 1 (side="left") or gamma . g = 1 in the bullet algebra."""
    N = 1 << alg.n
    # column b of the matrix: coefficients of e_b . gamma (or gamma . e_b)
    matrix = [[Fraction(0)] * N for _ in range(N)]
    for b in range(N):
        e_b = AlgebraElement.basis(b, alg.n)
        prod = bullet(e_b, gamma, alg) if side == "left" else bullet(gamma, e_b, alg)
        for m, c in prod.coeffs.items():
            matrix[m][b] = c
    rhs = [Fraction(1)] + [Fraction(0)] * (N - 1)
    sol = solve_exact(matrix, rhs)
    if sol is None:
        raise SingularGaugeElement(GroupVector(0, alg.n), gamma)
    return AlgebraElement({b: c for b, c in enumerate(sol)}, alg.n)


# ---------------------------------------------------------------- star product


class BidiffOperator:
    """sum c_(S,T) d^S (x) d^T with d^i = R_i - 1 the finite difference."""

    def __init__(self, n: int, terms: dict):
        self.n = n
        self.terms = {(S, T): c for (S, T), c in terms.items() if c}

    def coefficient(self, S, T):
        return self.terms.get((_dirs_mask(S, self.n), _dirs_mask(T, self.n)), Fraction(0))

    def apply_values(self, f: list, g: list) -> list:
        """Apply to two position-space functions and multiply pointwise."""
        N = 1 << self.n
        df = {S: _diff_values(f, S, self.n) for S in range(N)}
        dg = {T: _diff_values(g, T, self.n) for T in range(N)}
        out = [Fraction(0)] * N
        for (S, T), c in self.terms.items():
            fs, gt = df[S], dg[T]
            for x in range(N):
                out[x] += c * fs[x] * gt[x]
        return out

    def __call__(self, f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
        return AlgebraElement.from_values(self.apply_values(f.values(), g.values()), self.n)

    def __eq__(self, other):
        return isinstance(other, BidiffOperator) and self.n == other.n and self.terms == other.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (bitstring(kv[0][0], self.n), bitstring(kv[0][1], self.n)))

    def to_json(self):
        return [
            {"left": bitstring(S, self.n), "right": bitstring(T, self.n), "coeff": format_scalar(c)}
            for (S, T), c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data, n=None):
        if n is None:
            n = len(data[0]["left"]) if data else 1
        return cls(n, {(GroupVector(t["left"]).mask, GroupVector(t["right"]).mask): parse_scalar(t["coeff"]) for t in data})

    def relabelled(self, perm, swap=False) -> "BidiffOperator":
        out = {}
        for (S, T), c in self.terms.items():
            key = (permute_mask(S, perm), permute_mask(T, perm))
            out[key[::-1] if swap else key] = c
        return BidiffOperator(self.n, out)

    def __str__(self):
        parts = []
        for (S, T), c in self.sorted_terms():
            parts.append(f"{format_scalar(c)} {derivative_name(S, self.n)}(x){derivative_name(T, self.n)}")
        return "\n".join(parts)


def derivative_name(S: int, n: int) -> str:
    if S == 0:
        return "1"
    return "d" + "".join(str(i + 1) for i in range(n) if (S >> i) & 1)


def _dirs_mask(S, n):
    """Accept a mask, a digit string such as "13", or an iterable of 1-based directions."""
    if isinstance(S, int):
        return S
    if isinstance(S, str):
        S = [int(ch) for ch in S]
    mask = 0
    for i in S:
        if not 1 <= i <= n:
            raise ValueError(f"direction {i} out of range for n={n}")
        mask |= 1 << (i - 1)
    return mask


def _diff_values(f: list, S: int, n: int) -> list:
    for i in range(n):
        if (S >> i) & 1:
            bit = 1 << i
            f = [f[x ^ bit] - f[x] for x in range(len(f))]
    return f


def star_expand(F_pos: PositionCochain) -> BidiffOperator:
    """Expand 2^-2n sum_(y,z) F_pos(y,z) (1+d)^y (x) (1+d)^z into d^S (x) d^T.

    (1+d)^y = sum_(S subset of y) d^S since d^i and d^j commute, so the
    coefficient of d^S (x) d^T sums F_pos over y containing S and z containing T.
    """
    n = F_pos.n
    N = 1 << n
    # superset sums in both arguments
    table = [[F_pos.value(y, z) for z in range(N)] for y in range(N)]
    for i in range(n):
        bit = 1 << i
        for y in range(N):
            if not y & bit:
                row, up = table[y], table[y | bit]
                for z in range(N):
                    row[z] += up[z]
    for row in table:
        for i in range(n):
            bit = 1 << i
            for z in range(N):
                if not z & bit:
                    row[z] += row[z | bit]
    scale = Fraction(1, N * N)
    return BidiffOperator(n, {(S, T): table[S][T] * scale for S in range(N) for T in range(N)})


def star_operator(alg: TwistedAlgebra) -> BidiffOperator:
    """The bidifferential operator reproducing the bullet product of ``alg``.

    The bullet product multiplies by F^-1, so the transform of F^-1 is
    expanded; for +-1 valued cochains that is F itself.
    """
    G = alg.F if alg.F.is_sign_valued() else alg.F.inverse()
    return star_expand(fourier_cochain(G))


# ---------------------------------------------------------------- printed tables


def printed_expansions() -> dict:
    """Transcriptions of two published expansions, bundled as fixture data."""
    text = resources.files("quasigauge").joinpath("data/printed_expansions.json").read_text()
    return json.loads(text)


def printed_operator(name: str) -> BidiffOperator:
    """``name`` is "octonion" or "clifford-3"."""
    entry = printed_expansions()["tables"][name]
    n = entry["n"]
    terms = {}
    for t in entry["terms"]:
        key = (_dirs_mask(t["left"], n), _dirs_mask(t["right"], n))
        terms[key] = terms.get(key, 0) + parse_scalar(t["coeff"])
    return BidiffOperator(n, terms)


def printed_annotations(name: str) -> list:
    return printed_expansions()["tables"][name].get("annotations", [])


class ExpansionDiff:
    """Term-by-term comparison of a recomputed operator with a printed one."""

    def __init__(self, computed: BidiffOperator, printed: BidiffOperator, annotations=()):
        self.computed = computed
        self.printed = printed
        self.annotations = list(annotations)
        keys = sorted(set(computed.terms) | set(printed.terms), key=lambda k: (popcount(k[0]), k[0], popcount(k[1]), k[1]))
        self.entries = [
            (S, T, computed.terms.get((S, T), Fraction(0)), printed.terms.get((S, T), Fraction(0)))
            for S, T in keys
            if computed.terms.get((S, T), 0) != printed.terms.get((S, T), 0)
        ]
        self.equivalences = _matching_relabellings(computed, printed)

    @property
    def matches(self) -> bool:
        return not self.entries

    def annotated_keys(self):
        n = self.computed.n
        return {(_dirs_mask(a["left"], n), _dirs_mask(a["right"], n)) for a in self.annotations}

    def unexplained(self):
        """Mismatches not covered by an annotation in the fixture."""
        flagged = self.annotated_keys()
        return [e for e in self.entries if (e[0], e[1]) not in flagged]

    def to_json(self):
        n = self.computed.n
        return {
            "schema": "quasigauge.expansion-diff/1",
            "matches": self.matches,
            "mismatches": [
                {
                    "left": derivative_name(S, n),
                    "right": derivative_name(T, n),
                    "recomputed": format_scalar(c),
                    "printed": format_scalar(p),
                    "annotated": (S, T) in self.annotated_keys(),
                }
                for S, T, c, p in self.entries
            ],
            "equivalent_under": [{"perm": [p + 1 for p in perm], "swap": swap} for perm, swap in self.equivalences],
        }

    def report(self) -> str:
        n = self.computed.n
        if self.matches:
            return "all terms match"
        lines = [f"{len(self.entries)} mismatching terms (recomputed vs printed):"]
        flagged = self.annotated_keys()
        for S, T, c, p in self.entries:
            mark = "  [annotated]" if (S, T) in flagged else ""
            lines.append(f"  {derivative_name(S, n)}(x){derivative_name(T, n)}: {format_scalar(c)} vs {format_scalar(p)}{mark}")
        if self.equivalences:
            for perm, swap in self.equivalences:
                relab = ", ".join(f"{i + 1}->{p + 1}" for i, p in enumerate(perm))
                lines.append(f"  printed table equals the recomputed one after relabelling ({relab})" + (" and swapping the tensor factors" if swap else ""))
        else:
            lines.append("  no relabelling of directions or tensor factors reconciles them")
        return "\n".join(lines)


def _matching_relabellings(computed: BidiffOperator, printed: BidiffOperator):
    found = []
    for perm in permutations(range(computed.n)):
        for swap in (False, True):
            if computed.relabelled(perm, swap).terms == printed.terms:
                found.append((perm, swap))
    return found


def compare_with_printed(computed: BidiffOperator, name: str) -> ExpansionDiff:
    return ExpansionDiff(computed, printed_operator(name), printed_annotations(name))


def plane_wave_values(a: int, n: int) -> list:
    return [-1 if parity(a & x) else 1 for x in range(1 << n)]


def star_mismatches(op: BidiffOperator, alg: TwistedAlgebra) -> list:
    """Basis pairs (a, b) where op(e_a, e_b) differs from e_a . e_b."""
    n = alg.n
    N = 1 << n
    waves = [plane_wave_values(a, n) for a in range(N)]
    bad = []
    for a in range(N):
        for b in range(N):
            got = AlgebraElement.from_values(op.apply_values(waves[a], waves[b]), n)
            if got != bullet(AlgebraElement.basis(a, n), AlgebraElement.basis(b, n), alg):
                bad.append((a, b))
    return bad
