"""Flat unitary U(1) connections on Z_2^n for small n, in float arithmetic.

A connection is stored by its edge variables phi^i(x) = 1 + alpha^i(x) at
every vertex x (int mask, bit i-1 is x_i). Hermiticity pairs the two ends
of an edge: phi^i(x + e_i) = conj(phi^i(x)).
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOLERANCE = 1e-9
TOLERANCE_ENV = "QUASIGAUGE_TOLERANCE"
SCHEMA = "quasigauge.flat-search/1"


def tolerance(tol: float | None = None) -> float:
    if tol is not None:
        return tol
    env = os.environ.get(TOLERANCE_ENV)
    return float(env) if env else DEFAULT_TOLERANCE


class FlatnessViolation(ValueError):
    """The lambda constraints of a flat connection fail."""


class NotFlat(ValueError):
    pass


class HolonomyObstruction(ValueError):
    """Phase transport around some loop is nontrivial."""


class UnclassifiedPattern(ValueError):
    """A flat connection matching none of the known families."""

    def __init__(self, message, lambdas=None):
        super().__init__(message)
        self.lambdas = lambdas


def lower_vertices(n: int, i: int) -> list:
    """Vertices with x_i = 0, one per edge in direction i (1-based i)."""
    bit = 1 << (i - 1)
    return [x for x in range(1 << n) if not x & bit]


class HermitianConnection:
    """phi[i-1, x] = phi^i(x) as complex floats."""

    def __init__(self, phi, check: bool = True, tol: float | None = None):
        phi = np.array(phi, dtype=complex)
        if phi.ndim != 2 or phi.shape[1] != 1 << phi.shape[0]:
            raise ValueError(f"phi must have shape (n, 2^n), got {phi.shape}")
        self.phi = phi
        self.n = phi.shape[0]
        if check and self.hermiticity_residual() > tolerance(tol):
            raise ValueError("phi is not hermitian")

    @classmethod
    def from_edges(cls, n: int, edges):
        """edges[i-1][k] is phi^i at the k-th lower vertex of direction i."""
        phi = np.zeros((n, 1 << n), dtype=complex)
        for i in range(1, n + 1):
            bit = 1 << (i - 1)
            vals = list(edges[i - 1])
            for x, z in zip(lower_vertices(n, i), vals, strict=True):
                phi[i - 1, x] = z
                phi[i - 1, x | bit] = np.conj(z)
        return cls(phi, check=False)

    @classmethod
    def from_function(cls, n: int, func):
        """phi^i(x) = func(i, bits) on lower vertices, bits = (x_1, ..., x_n)."""
        edges = []
        for i in range(1, n + 1):
            edges.append([func(i, tuple((x >> k) & 1 for k in range(n))) for x in lower_vertices(n, i)])
        return cls.from_edges(n, edges)

    @classmethod
    def from_connection(cls, conn):
        """From an exact gauge.Connection."""
        phis = [complex_values(p) for p in conn.phi()]
        return cls(np.array(phis))

    def edges(self) -> list:
        return [self.phi[i - 1, lower_vertices(self.n, i)] for i in range(1, self.n + 1)]

    def hermiticity_residual(self) -> float:
        out = 0.0
        for i in range(self.n):
            flipped = self.phi[i, np.arange(1 << self.n) ^ (1 << i)]
            out = max(out, float(np.max(np.abs(np.conj(self.phi[i]) - flipped))))
        return out

    def copy(self):
        return HermitianConnection(self.phi.copy(), check=False)

    def to_json(self):
        return {
            "n": self.n,
            "edges": [[[float(z.real), float(z.imag)] for z in row] for row in self.edges()],
        }

    @classmethod
    def from_json(cls, data):
        return cls.from_edges(data["n"], [[complex(re, im) for re, im in row] for row in data["edges"]])

    def __repr__(self):
        return f"HermitianConnection(n={self.n}, edges={[np.round(e, 6).tolist() for e in self.edges()]})"


def complex_values(elem) -> list:
    return [complex(v) for v in elem.values()]


def _residuals(phi: np.ndarray) -> np.ndarray:
    """|phi^i(x) phi^j(x+e_i) - phi^j(x) phi^i(x+e_j)| over a trailing batch of connections.

    phi has shape (..., n, 2^n); the result has shape (...,).
    """
    n = phi.shape[-2]
    xs = np.arange(1 << n)
    out = np.zeros(phi.shape[:-2])
    for i in range(n):
        for j in range(i + 1, n):
            pi, pj = phi[..., i, :], phi[..., j, :]
            diff = pi * pj[..., xs ^ (1 << i)] - pj * pi[..., xs ^ (1 << j)]
            out = np.maximum(out, np.max(np.abs(diff), axis=-1))
    return out


def flatness_residual(c: HermitianConnection) -> float:
    return float(_residuals(c.phi))


def is_flat(c: HermitianConnection, tol: float | None = None) -> bool:
    return flatness_residual(c) <= tolerance(tol)


def gauge_invariants(c: HermitianConnection, assume_flat: bool = False, tol: float | None = None) -> np.ndarray:
    """lambda[i-1, x] = |phi^i(x)|; with assume_flat the lambda constraints are enforced."""
    lam = np.abs(c.phi)
    if assume_flat:
        tol = tolerance(tol)
        xs = np.arange(1 << c.n)
        for i in range(c.n):
            for j in range(c.n):
                defect = lam[i] * (lam[j, xs ^ (1 << i)] - lam[j])
                if np.max(np.abs(defect)) > tol:
                    raise FlatnessViolation(f"lambda_{i + 1} d^{i + 1} lambda_{j + 1} != 0")
    return lam


def gauge_transform(c: HermitianConnection, gamma) -> HermitianConnection:
    """(phi^gamma)^i = (gamma / R_i gamma) phi^i for a pointwise unitary gamma."""
    gamma = np.asarray(gamma, dtype=complex)
    xs = np.arange(1 << c.n)
    phi = np.array([gamma / gamma[xs ^ (1 << i)] * c.phi[i] for i in range(c.n)])
    return HermitianConnection(phi, check=False)


def random_unitary_gauge(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.exp(1j * rng.uniform(0, 2 * math.pi, 1 << n))


def phase_gauge_fix(c: HermitianConnection, tol: float | None = None):
    """Unitary gamma with gamma(0) = 1 making every phi^i real and nonnegative.

    Phases are transported along nonzero edges from the smallest vertex of
    each connected component; every nonzero edge is then rechecked, which
    compares the tree path with the alternative path through that edge.
    """
    tol = tolerance(tol)
    if flatness_residual(c) > tol:
        raise NotFlat(f"flatness residual {flatness_residual(c):.3g} exceeds {tol:g}")
    n, N = c.n, 1 << c.n
    lam = np.abs(c.phi)
    gamma = np.full(N, np.nan + 0j)
    for root in range(N):
        if not np.isnan(gamma[root]):
            continue
        gamma[root] = 1.0
        queue = [root]
        while queue:
            x = queue.pop(0)
            for i in range(n):
                y = x ^ (1 << i)
                if lam[i, x] > tol and np.isnan(gamma[y]):
                    # (gamma(x)/gamma(y)) phi^i(x) real positive
                    gamma[y] = gamma[x] * c.phi[i, x] / lam[i, x]
                    queue.append(y)
    fixed = gauge_transform(c, gamma)
    bad = np.abs(fixed.phi - lam)[lam > tol]
    if bad.size and np.max(bad) > math.sqrt(tol):
        raise HolonomyObstruction(f"phase transport is path dependent (defect {np.max(bad):.3g})")
    fixed.phi = np.where(lam > tol, lam, 0) + 0j
    return gamma, fixed


# ---------------------------------------------------------------- cube symmetries


@dataclass(frozen=True)
class CubeSymmetry:
    """g(x)_k = x_(perm[k]) xor flips_k, with 0-based k and perm."""

    perm: tuple
    flips: int

    @property
    def n(self):
        return len(self.perm)

    def vertex(self, x: int) -> int:
        y = 0
        for k, p in enumerate(self.perm):
            y |= ((x >> p) & 1) << k
        return y ^ self.flips

    def direction(self, i: int) -> int:
        """Image of direction i (1-based)."""
        return self.perm.index(i - 1) + 1

    def chirality(self) -> int:
        inv = sum(1 for a, b in itertools.combinations(self.perm, 2) if a > b)
        return (-1) ** (inv + bin(self.flips).count("1"))

    def edge(self, edge):
        i, x = edge
        y = self.vertex(x)
        k = self.direction(i)
        return (k, y & ~(1 << (k - 1)))

    def apply(self, c: HermitianConnection) -> HermitianConnection:
        phi = np.zeros_like(c.phi)
        for i in range(1, c.n + 1):
            k = self.direction(i)
            for x in range(1 << c.n):
                phi[k - 1, self.vertex(x)] = c.phi[i - 1, x]
        return HermitianConnection(phi, check=False)


def cube_symmetries(n: int = 3) -> list:
    return [CubeSymmetry(p, t) for p in itertools.permutations(range(n)) for t in range(1 << n)]


IDENTITY3 = CubeSymmetry((0, 1, 2), 0)
MIRROR3 = CubeSymmetry((0, 1, 2), 0b001)

# case (iii) with A at the origin: one nonzero edge per direction, (direction, lower vertex)
CASE_III_EDGES = ((1, 0b110), (2, 0b001), (3, 0b000))


def case_iii_edge_set(sym: CubeSymmetry = IDENTITY3) -> frozenset:
    return frozenset(sym.edge(e) for e in CASE_III_EDGES)


def nonzero_edges(lam: np.ndarray, tol: float) -> frozenset:
    n = lam.shape[0]
    return frozenset((i, x) for i in range(1, n + 1) for x in lower_vertices(n, i) if lam[i - 1, x] > tol)


# ---------------------------------------------------------------- families


@dataclass
class FlatClassification:
    kind: str
    n: int
    params: tuple = ()
    direction: int | None = None
    faces: tuple = ()
    symmetry: CubeSymmetry | None = None
    chirality: int | None = None

    def to_json(self):
        out = {"kind": self.kind, "n": self.n, "params": [float(p) for p in self.params]}
        if self.kind == "split":
            out["direction"] = self.direction
            out["faces"] = [f.to_json() for f in self.faces]
        if self.kind == "cube-case-iii":
            out["symmetry"] = {"perm": list(self.symmetry.perm), "flips": self.symmetry.flips}
            out["chirality"] = self.chirality
        return out

    @classmethod
    def from_json(cls, data):
        kw = dict(kind=data["kind"], n=data["n"], params=tuple(data.get("params", ())))
        if data["kind"] == "split":
            kw["direction"] = data["direction"]
            kw["faces"] = tuple(cls.from_json(f) for f in data["faces"])
        if data["kind"] == "cube-case-iii":
            s = data["symmetry"]
            kw["symmetry"] = CubeSymmetry(tuple(s["perm"]), s["flips"])
            kw["chirality"] = data["chirality"]
        return cls(**kw)

    def same_as(self, other, tol: float = 1e-9) -> bool:
        if self.kind != other.kind or self.n != other.n or len(self.params) != len(other.params):
            return False
        if any(abs(a - b) > tol for a, b in zip(self.params, other.params)):
            return False
        if self.kind == "split":
            return self.direction == other.direction and all(
                a.same_as(b, tol) for a, b in zip(self.faces, other.faces))
        if self.kind == "cube-case-iii":
            return self.chirality == other.chirality and case_iii_edge_set(self.symmetry) == case_iii_edge_set(other.symmetry)
        return True

    def describe(self) -> str:
        if self.kind == "zero-family":
            return "zero-family"
        if self.kind == "constant-maximal":
            return "constant-maximal(" + ", ".join(f"{p:g}" for p in self.params) + ")"
        if self.kind == "split":
            return f"split[{self.direction}](" + "; ".join(f.describe() for f in self.faces) + ")"
        hand = "standard" if self.chirality == 1 else "mirror"
        return f"cube-case-iii[{hand}](" + ", ".join(f"{p:g}" for p in self.params) + ")"


def constant_maximal(params) -> FlatClassification:
    return FlatClassification("constant-maximal", len(params), tuple(params))


def zero_family(n: int) -> FlatClassification:
    return FlatClassification("zero-family", n)


def split(direction: int, face0: FlatClassification, face1: FlatClassification) -> FlatClassification:
    if face0.n != face1.n:
        raise ValueError("faces of a split have different dimensions")
    return FlatClassification("split", face0.n + 1, direction=direction, faces=(face0, face1))


def case_iii(params, chirality: int = 1, symmetry: CubeSymmetry | None = None) -> FlatClassification:
    if symmetry is None:
        symmetry = IDENTITY3 if chirality == 1 else MIRROR3
    return FlatClassification("cube-case-iii", 3, tuple(params), symmetry=symmetry, chirality=symmetry.chirality())


def face_vertices(n: int, direction: int, side: int) -> list:
    """Vertices of the face x_direction = side, ordered by the face's own coordinates."""
    bit = 1 << (direction - 1)
    return [x for x in range(1 << n) if bool(x & bit) == bool(side)]


def face_connection(c: HermitianConnection, direction: int, side: int) -> HermitianConnection:
    dirs = [i for i in range(c.n) if i != direction - 1]
    verts = face_vertices(c.n, direction, side)
    return HermitianConnection(c.phi[dirs][:, verts], check=False)


def canonical_flat(kind, params=(), n: int | None = None) -> HermitianConnection:
    """The real representative of a family, given a FlatClassification or (kind, params, n).

    kinds: zero-family, constant-maximal, split (params = (direction, face0, face1)),
    cube-case-iii (params = (lambda, mu, nu)), cube-case-iii-mirror.
    """
    if isinstance(kind, FlatClassification):
        return _build(kind)
    if kind == "zero-family":
        cls = zero_family(n)
    elif kind == "constant-maximal":
        if n is not None and len(params) != n:
            raise ValueError(f"constant-maximal on n={n} needs {n} parameters")
        cls = constant_maximal(params)
    elif kind == "split":
        direction, f0, f1 = params
        cls = split(direction, f0, f1)
    elif kind in ("cube-case-iii", "cube-case-iii-mirror"):
        if n not in (None, 3):
            raise ValueError("case (iii) exists only on the cube n=3")
        cls = case_iii(params, -1 if kind.endswith("mirror") else 1)
    else:
        raise ValueError(f"unknown family {kind!r}")
    if n is not None and cls.n != n:
        raise ValueError(f"family has n={cls.n}, requested n={n}")
    return _build(cls)


def _build(cls: FlatClassification) -> HermitianConnection:
    n = cls.n
    if cls.kind in ("zero-family", "constant-maximal", "cube-case-iii") and any(p <= 0 for p in cls.params):
        raise ValueError("family parameters must be positive")
    phi = np.zeros((n, 1 << n), dtype=complex)
    if cls.kind == "constant-maximal":
        for i, p in enumerate(cls.params):
            phi[i, :] = p
    elif cls.kind == "split":
        dirs = [i for i in range(n) if i != cls.direction - 1]
        for side, face in enumerate(cls.faces):
            sub = _build(face).phi
            verts = face_vertices(n, cls.direction, side)
            for k, i in enumerate(dirs):
                phi[i, verts] = sub[k]
    elif cls.kind == "cube-case-iii":
        std = np.zeros((3, 8), dtype=complex)
        for (i, x), p in zip(CASE_III_EDGES, cls.params):
            std[i - 1, x] = std[i - 1, x | (1 << (i - 1))] = p
        return cls.symmetry.apply(HermitianConnection(std, check=False))
    elif cls.kind != "zero-family":
        raise ValueError(f"unknown family {cls.kind!r}")
    return HermitianConnection(phi, check=False)


def case_iii_formula(lam, mu, nu) -> HermitianConnection:
    """alpha = x2 x3 lam tau1 + x1 (1-x3) mu tau2 + (1-x1)(1-x2) nu tau3 - theta."""
    coeff = {1: lambda x: x[1] * x[2] * lam, 2: lambda x: x[0] * (1 - x[2]) * mu, 3: lambda x: (1 - x[0]) * (1 - x[1]) * nu}
    return HermitianConnection.from_function(3, lambda i, x: coeff[i](x))


def classify_flat(c: HermitianConnection, tol: float | None = None, verify: bool = True) -> FlatClassification:
    """Place a flat connection in its family by the zero pattern of its lambda field.

    With verify, the gauge-fixed connection is also compared with the family
    representative, so a successful return means gauge equivalence.
    """
    tol = tolerance(tol)
    if flatness_residual(c) > tol:
        raise NotFlat(f"flatness residual {flatness_residual(c):.3g} exceeds {tol:g}")
    lam = gauge_invariants(c, assume_flat=True, tol=tol)
    cls = _classify_lambda(lam, tol)
    if verify:
        _, fixed = phase_gauge_fix(c, tol)
        rep = _build(cls)
        if np.max(np.abs(fixed.phi - rep.phi)) > math.sqrt(tol):
            raise UnclassifiedPattern("gauge-fixed connection differs from its family representative", lam)
    return cls


def _classify_lambda(lam: np.ndarray, tol: float) -> FlatClassification:
    n = lam.shape[0]
    nonzero = lam > tol
    if not nonzero.any():
        return zero_family(n)
    full = np.all(nonzero, axis=0)
    if full.any():
        params = lam[:, int(np.argmax(full))]
        if np.max(np.abs(lam - params[:, None])) > math.sqrt(tol):
            raise UnclassifiedPattern("a vertex has all lambda nonzero but lambda is not constant", lam)
        return constant_maximal(tuple(float(p) for p in params))
    for i in range(1, n + 1):
        if not nonzero[i - 1].any():
            dirs = [k for k in range(n) if k != i - 1]
            faces = []
            for side in (0, 1):
                verts = face_vertices(n, i, side)
                faces.append(_classify_lambda(lam[dirs][:, verts], tol))
            return split(i, *faces)
    if n == 3:
        observed = nonzero_edges(lam, tol)
        for sym in cube_symmetries(3):
            if case_iii_edge_set(sym) == observed:
                params = tuple(float(lam[k - 1, y]) for k, y in (sym.edge(e) for e in CASE_III_EDGES))
                return case_iii(params, symmetry=sym)
    raise UnclassifiedPattern(f"no family matches this lambda pattern on n={n}", lam)


# ---------------------------------------------------------------- search


@dataclass
class SearchHit:
    index: int
    connection: HermitianConnection
    residual: float
    classification: FlatClassification | None = None
    error: str | None = None

    def to_json(self):
        return {
            "index": self.index,
            "phi": self.connection.to_json(),
            "residual": self.residual,
            "classification": self.classification.to_json() if self.classification else None,
            "error": self.error,
        }


@dataclass
class SearchResult:
    n: int
    values: list
    scanned: int = 0
    hits: list = field(default_factory=list)

    @property
    def unclassified(self) -> list:
        return [h for h in self.hits if h.classification is None]

    def __iter__(self):
        return iter(self.hits)

    def __len__(self):
        return len(self.hits)

    def counts(self) -> dict:
        out = {}
        for h in self.hits:
            key = h.classification.kind if h.classification else "UNCLASSIFIED"
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))


def grid_values(amplitudes, phases) -> list:
    """Distinct complex values a e^(i p); zero amplitude contributes 0 once."""
    out = []
    for a in amplitudes:
        for p in phases:
            z = complex(a * math.cos(p), a * math.sin(p))
            z = complex(round(z.real, 15), round(z.imag, 15))
            if not any(abs(z - w) < 1e-12 for w in out):
                out.append(z)
    return out


def _edge_slots(n: int) -> list:
    return [(i, x) for i in range(1, n + 1) for x in lower_vertices(n, i)]


def _scan(args):
    n, values, start, stop, tol = args
    slots = _edge_slots(n)
    m = len(values)
    vals = np.array(values, dtype=complex)
    idx = np.arange(start, stop)
    phi = np.zeros((len(idx), n, 1 << n), dtype=complex)
    rem = idx.copy()
    for i, x in slots:
        z = vals[rem % m]
        rem //= m
        phi[:, i - 1, x] = z
        phi[:, i - 1, x | (1 << (i - 1))] = np.conj(z)
    res = _residuals(phi)
    keep = np.nonzero(res <= tol)[0]
    return [(int(idx[k]), phi[k], float(res[k])) for k in keep]


def search_flat(n: int, amplitudes, phases, tol: float | None = None, workers: int = 1,
                chunk: int = 1 << 16, classify: bool = True) -> SearchResult:
    """Enumerate every hermitian connection with edge values on the grid and classify the flat ones."""
    if n not in (1, 2, 3):
        raise ValueError("search is supported for n <= 3")
    tol = tolerance(tol)
    values = grid_values(amplitudes, phases)
    result = SearchResult(n, values)
    if not values:
        return result
    total = len(values) ** len(_edge_slots(n))
    jobs = [(n, values, s, min(s + chunk, total), tol) for s in range(0, total, chunk)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            batches = list(pool.map(_scan, jobs))
    else:
        batches = [_scan(j) for j in jobs]
    result.scanned = total
    for batch in batches:
        for index, phi, res in batch:
            conn = HermitianConnection(phi, check=False)
            hit = SearchHit(index, conn, res)
            if classify:
                try:
                    hit.classification = classify_flat(conn, tol)
                except (UnclassifiedPattern, HolonomyObstruction, FlatnessViolation) as exc:
                    hit.error = f"{type(exc).__name__}: {exc}"
            result.hits.append(hit)
    result.hits.sort(key=lambda h: h.index)
    return result
