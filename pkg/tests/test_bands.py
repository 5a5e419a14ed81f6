import json
import math

import numpy as np
import pytest

import jacobiband as jb
from jacobiband.discriminant import DiscriminantEval
from conftest import tame_instance, wild_instance
from oracles import eig2_symmetric, free_edges


def test_floquet_constant_p4():
    J = jb.free_instance(4)
    expected = np.array([
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
    ])
    np.testing.assert_array_equal(jb.floquet_matrix(J, 0.0).entries, expected)
    expected_pi = expected.copy()
    expected_pi[0, 3] = expected_pi[3, 0] = -1.0
    np.testing.assert_array_equal(jb.floquet_matrix(J, math.pi).entries,
                                  expected_pi)


def test_floquet_p2_corner_overlap():
    J = jb.new_periodic_jacobi((1, 2), (0, 0))
    np.testing.assert_array_equal(jb.floquet_matrix(J, math.pi).entries,
                                  [[0.0, -1.0], [-1.0, 0.0]])
    np.testing.assert_array_equal(jb.floquet_matrix(J, 0.0).entries,
                                  [[0.0, 3.0], [3.0, 0.0]])


def test_floquet_p3_diagonal():
    J = jb.new_periodic_jacobi((1, 1, 1), (5, 5, 5))
    expected = np.array([
        [5.0, 1.0, 1.0],
        [1.0, 5.0, 1.0],
        [1.0, 1.0, 5.0],
    ])
    np.testing.assert_array_equal(jb.floquet_matrix(J, 0.0).entries, expected)


def test_floquet_rejects_other_k():
    J = jb.free_instance(2)
    with pytest.raises(jb.UnsupportedK):
        jb.floquet_matrix(J, 1.0)


def test_band_structure_p2_example():
    J = jb.new_periodic_jacobi((1, 2), (0, 0))
    S = jb.band_structure(J)
    np.testing.assert_allclose(S.edges, [-3, -1, 1, 3], atol=1e-13)
    assert S.gaps[0].length == pytest.approx(2.0, abs=1e-13)
    assert S.summary.radius_r == pytest.approx(6.0, abs=1e-13)
    assert S.summary.band_measure == pytest.approx(4.0, abs=1e-13)
    assert S.summary.gap_measure == pytest.approx(2.0, abs=1e-13)


def test_band_structure_free_p4():
    S = jb.band_structure(jb.free_instance(4))
    s = math.sqrt(2.0)
    np.testing.assert_allclose(S.edges, [-2, -s, -s, 0, 0, s, s, 2], atol=1e-13)
    assert np.all(S.gap_lengths < 1e-13)


def test_band_structure_small_coupling_split_diagonal():
    J = jb.new_periodic_jacobi((0.1, 0.1), (0, 1))
    S = jb.band_structure(J)
    # phase -1 matrix is diag(0, 1); phase +1 is [[0, 0.2], [0.2, 1]]
    lo, hi = eig2_symmetric(0.0, 0.2, 1.0)
    np.testing.assert_allclose(S.edges, sorted([0.0, 1.0, lo, hi]), atol=1e-13)
    assert S.gaps[0].lo == pytest.approx(0.0, abs=1e-13)
    assert S.gaps[0].hi == pytest.approx(1.0, abs=1e-13)
    assert S.gaps[0].length == pytest.approx(1.0, abs=1e-13)


def test_spectrum_structure_invariants():
    rng = np.random.default_rng(51)
    for _ in range(15):
        J = wild_instance(rng)
        S = jb.band_structure(J)
        assert len(S.bands) == J.p
        assert len(S.gaps) == J.p - 1
        for i, g in enumerate(S.gaps):
            assert S.bands[i].hi == g.lo
            assert g.hi == S.bands[i + 1].lo
        assert S.summary.band_measure == math.fsum(b.length for b in S.bands)
        assert S.summary.gap_measure == math.fsum(g.length for g in S.gaps)
        assert S.summary.radius_r == S.summary.band_measure + S.summary.gap_measure


def test_edge_sign_pattern():
    # scanning from the top band down, the discriminant at (hi, lo) edges
    # alternates (+2, -2), (-2, +2), ...
    rng = np.random.default_rng(52)
    for _ in range(8):
        J = tame_instance(rng)
        S = jb.band_structure(J)
        ctx = DiscriminantEval(J)
        for j, band in enumerate(reversed(S.bands)):
            top_target = 2.0 if j % 2 == 0 else -2.0
            assert ctx.delta(band.hi) == pytest.approx(top_target, abs=1e-6)
            assert ctx.delta(band.lo) == pytest.approx(-top_target, abs=1e-6)


def test_radius_at_least_twice_max_coupling():
    rng = np.random.default_rng(53)
    for _ in range(15):
        J = wild_instance(rng)
        S = jb.band_structure(J)
        r = S.summary.radius_r
        assert r >= 2.0 * max(J.a) - 1e-9 * (1.0 + r)


def test_each_band_solvable_for_dispersion():
    rng = np.random.default_rng(54)
    for _ in range(4):
        J = tame_instance(rng)
        S = jb.band_structure(J)
        ctx = DiscriminantEval(J)
        for i in range(1, J.p + 1):
            band = S.bands[i - 1]
            for k in np.linspace(0.0, math.pi, 10):
                lam = ctx.dispersion(i, float(k))
                assert band.lo - 1e-8 <= lam <= band.hi + 1e-8


def test_degenerate_gaps_free_instance():
    for p in (2, 3, 6, 9):
        S = jb.band_structure(jb.free_instance(p))
        assert np.all(S.gap_lengths < 1e-10)
        np.testing.assert_allclose(S.edges, free_edges(p), atol=1e-12)


def test_gap_closed_flag():
    S = jb.band_structure(jb.free_instance(4))
    assert all(g.numerically_closed for g in S.gaps)
    S2 = jb.band_structure(jb.new_periodic_jacobi((1, 2), (0, 0)))
    assert not S2.gaps[0].numerically_closed


def test_cross_check_examples():
    res = jb.cross_check(jb.new_periodic_jacobi((1, 2), (0, 0)), 1e-8)
    assert res.ok
    assert res.max_deviation < 1e-10

    assert jb.cross_check(jb.free_instance(6), 1e-8).ok

    rng = np.random.default_rng(55)
    J = tame_instance(rng, p=7)
    assert jb.cross_check(J, 1e-8).ok


def test_cross_check_rejects_bad_tol():
    with pytest.raises(ValueError):
        jb.cross_check(jb.free_instance(2), 0.0)


def test_spectrum_json_schema():
    J = jb.new_periodic_jacobi((1, 2), (0, 0))
    d = json.loads(jb.spectrum_to_json(jb.band_structure(J)))
    assert set(d) == {"bands", "gaps", "r", "band_measure", "gap_measure"}
    assert d["bands"] == [[-3.0, -1.0], [1.0, 3.0]]
    assert d["gaps"] == [[-1.0, 1.0]]
    assert d["r"] == 6.0
    assert d["band_measure"] == 4.0
    assert d["gap_measure"] == 2.0


def test_band_gap_validation():
    with pytest.raises(ValueError):
        jb.Band(2.0, 1.0)
    with pytest.raises(ValueError):
        jb.Gap(1.0, 0.0, -1.0)
