import math
import random

import numpy as np
import pytest

from quasigauge import gauge as gg
from quasigauge import moduli as md


FAMILIES = [
    md.constant_maximal((1.0, 2.0, 0.5)),
    md.zero_family(3),
    md.split(1, md.constant_maximal((1.0, 2.0)), md.zero_family(2)),
    md.split(2, md.constant_maximal((0.7, 1.3)), md.constant_maximal((2.0, 0.4))),
    md.split(3, md.split(1, md.constant_maximal((1.5,)), md.zero_family(1)), md.constant_maximal((1.0, 1.0))),
    md.case_iii((1.0, 2.0, 3.0)),
    md.case_iii((0.5, 0.25, 4.0), chirality=-1),
]


@pytest.mark.parametrize("cls", FAMILIES, ids=lambda c: c.describe())
def test_families_flat_and_classified(cls):
    c = md.canonical_flat(cls)
    assert md.flatness_residual(c) < 1e-12
    assert md.classify_flat(c).same_as(cls)


def test_case_iii_formula_matches_representative():
    c = md.case_iii_formula(1.0, 2.0, 3.0)
    assert np.allclose(c.phi, md.canonical_flat("cube-case-iii", (1.0, 2.0, 3.0)).phi)
    lam = md.gauge_invariants(c)
    assert np.all(lam[:, 2] == 0) and np.all(lam[:, 5] == 0)


def test_case_iii_symmetry_orbit():
    base = md.canonical_flat("cube-case-iii", (1.0, 2.0, 3.0))
    stab = [g for g in md.cube_symmetries(3) if md.case_iii_edge_set(g) == md.case_iii_edge_set()]
    assert len(stab) == 6 and all(g.chirality() == 1 for g in stab)
    patterns = {md.case_iii_edge_set(g) for g in md.cube_symmetries(3)}
    assert len(patterns) == 8
    for g in md.cube_symmetries(3):
        moved = g.apply(base)
        assert md.flatness_residual(moved) < 1e-12
        cls = md.classify_flat(moved)
        assert cls.kind == "cube-case-iii" and cls.chirality == g.chirality()
        assert sorted(cls.params) == [1.0, 2.0, 3.0]


def test_mirror_is_distinct():
    std = md.classify_flat(md.canonical_flat("cube-case-iii", (1.0, 1.0, 1.0)))
    mir = md.classify_flat(md.canonical_flat("cube-case-iii-mirror", (1.0, 1.0, 1.0)))
    assert std.chirality == 1 and mir.chirality == -1
    assert not std.same_as(mir)


def test_gauge_invariance_of_classification():
    rng = np.random.default_rng(0)
    for cls in FAMILIES:
        c = md.canonical_flat(cls)
        lam = md.gauge_invariants(c)
        for _ in range(20):
            moved = md.gauge_transform(c, md.random_unitary_gauge(rng, 3))
            assert md.flatness_residual(moved) < 1e-12
            assert np.max(np.abs(md.gauge_invariants(moved) - lam)) < 1e-10
            assert md.classify_flat(moved).same_as(cls)


def test_phase_gauge_fix_returns_gamma():
    rng = np.random.default_rng(1)
    c = md.canonical_flat(md.case_iii((1.0, 2.0, 3.0)))
    moved = md.gauge_transform(c, md.random_unitary_gauge(rng, 3))
    gamma, fixed = md.phase_gauge_fix(moved)
    assert np.allclose(np.abs(gamma), 1)
    assert np.allclose(md.gauge_transform(moved, gamma).phi, fixed.phi)
    assert np.allclose(fixed.phi.imag, 0)


def test_not_flat_rejected():
    c = md.HermitianConnection.from_edges(2, [[1, 1], [1, 2]])
    assert not md.is_flat(c)
    with pytest.raises(md.NotFlat):
        md.classify_flat(c)


def test_exact_connection_bridge():
    c = gg.constant_connection([1, 2, 3])
    h = md.HermitianConnection.from_connection(c)
    assert md.classify_flat(h).same_as(md.constant_maximal((1.0, 2.0, 3.0)))
    rng = random.Random(3)
    alpha = gg.random_connection(rng, 3)
    F = gg.curvature(alpha)
    assert (md.flatness_residual(md.HermitianConnection(np.array([md.complex_values(p) for p in alpha.phi()]), check=False)) < 1e-12) == (not F)


def test_json_roundtrip():
    c = md.canonical_flat(md.case_iii((1.0, 2.0, 3.0), chirality=-1))
    back = md.HermitianConnection.from_json(c.to_json())
    assert np.allclose(back.phi, c.phi)
    cls = md.classify_flat(c)
    assert md.FlatClassification.from_json(cls.to_json()).same_as(cls)


def test_search_n1():
    res = md.search_flat(1, [0, 1], [0, math.pi])
    assert res.scanned == 3
    assert len(res) == 3 and not res.unclassified


def test_search_n2():
    res = md.search_flat(2, [0, 1, 2], [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    assert res.scanned == 9 ** 4
    assert not res.unclassified
    assert res.counts() == {"constant-maximal": 256, "split": 160, "zero-family": 1}


def test_search_parallel_matches_serial():
    args = (2, [0, 1], [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    a = md.search_flat(*args, chunk=1000)
    b = md.search_flat(*args, workers=2, chunk=1000)
    assert [h.index for h in a] == [h.index for h in b]


def test_tolerance_env(monkeypatch):
    monkeypatch.setenv("QUASIGAUGE_TOLERANCE", "1e-6")
    assert md.tolerance() == 1e-6
    assert md.tolerance(1e-3) == 1e-3
