import math

import numpy as np
import pytest

import jacobiband as jb
from jacobiband.perturbation import THEOREM1_CSV_HEADER, free_edge_eigenvalues
from oracles import p2_gap_length


def test_instance_examples():
    J = jb.theorem1_instance(4, 0.1)
    assert J.a == (1.0, 1.0, 1.0, 0.9)
    assert J.b == (0.0, 0.0, 0.0, 0.0)
    assert jb.theorem1_instance(2, 0.5).a == (1.0, 0.5)


def test_instance_rejects_bad_c():
    with pytest.raises(jb.BadC):
        jb.theorem1_instance(3, 1.0)
    with pytest.raises(jb.BadC):
        jb.theorem1_instance(3, 0.0)
    with pytest.raises(jb.BadC):
        jb.theorem1_instance(3, -0.2)
    with pytest.raises(ValueError):
        jb.theorem1_instance(1, 0.1)


def test_h_matrix_p4():
    H = jb.h_matrix(4, 1)
    np.testing.assert_allclose(H, [[0.0, 0.5j], [-0.5j, 0.0]], atol=1e-15)
    w = np.linalg.eigvalsh(H)
    np.testing.assert_allclose(w, [-0.5, 0.5], atol=1e-15)
    assert jb.h_eigenvalue_split(4, 1) == pytest.approx(1.0, abs=1e-15)


def test_h_matrix_p6_diagonal():
    H = jb.h_matrix(6, 1)
    assert H[0, 0].real == pytest.approx(math.cos(5.0 * math.pi / 3.0) / 6.0,
                                         abs=1e-15)
    assert H[0, 0].real == pytest.approx(1.0 / 12.0, abs=1e-15)
    assert jb.h_eigenvalue_split(6, 1) == pytest.approx(4.0 / 6.0, abs=1e-15)


def test_h_matrix_offdiagonal_magnitude():
    for p in (4, 8, 10, 30):
        for n in range(1, p // 2):
            H = jb.h_matrix(p, n)
            assert abs(H[0, 1]) == pytest.approx(2.0 / p, abs=1e-15)
            assert H[1, 0] == H[0, 1].conjugate()
            assert H[0, 0] == H[1, 1]


def test_h_matrix_index_validation():
    with pytest.raises(jb.IndexOutOfRange):
        jb.h_matrix(5, 1)
    with pytest.raises(jb.IndexOutOfRange):
        jb.h_matrix(4, 0)
    with pytest.raises(jb.IndexOutOfRange):
        jb.h_matrix(4, 2)
    with pytest.raises(jb.IndexOutOfRange):
        jb.h_matrix_sandwich(6, 3)


def test_h_sandwich_confirms_closed_form():
    # The eigenvector sandwich reproduces the off-diagonal magnitude and the
    # 4/p split; its diagonal comes out exactly twice the closed-form one.
    for p in (4, 6, 12):
        for n in range(1, p // 2):
            printed = jb.h_matrix(p, n)
            sandwich = jb.h_matrix_sandwich(p, n)
            np.testing.assert_allclose(sandwich, sandwich.conj().T, atol=1e-14)
            assert abs(sandwich[0, 1]) == pytest.approx(abs(printed[0, 1]),
                                                        abs=1e-14)
            assert sandwich[0, 0].real == pytest.approx(2.0 * printed[0, 0].real,
                                                        abs=1e-14)
            w_printed = np.linalg.eigvalsh(printed)
            w_sandwich = np.linalg.eigvalsh(sandwich)
            assert w_printed[1] - w_printed[0] == pytest.approx(4.0 / p, abs=1e-14)
            assert w_sandwich[1] - w_sandwich[0] == pytest.approx(4.0 / p, abs=1e-14)


def test_h_split_all_even_periods():
    for p in range(4, 66, 2):
        for n in range(1, p // 2):
            assert abs(jb.h_eigenvalue_split(p, n) - 4.0 / p) <= 1e-14


def test_prediction_values():
    pred = jb.first_order_prediction(4, 0.01)
    assert pred.predicted_gap_lengths == (0.01,) * 3
    assert pred.predicted_gap_sum == pytest.approx(0.03, abs=1e-16)
    assert pred.predicted_gap_sum == math.fsum(pred.predicted_gap_lengths)
    assert pred.predicted_extreme_shift_magnitude == pytest.approx(0.005)
    assert pred.hn_offdiag_magnitude == 0.5

    pred2 = jb.first_order_prediction(2, 0.1)
    assert pred2.predicted_gap_sum == pytest.approx(0.2, abs=1e-16)
    # the prediction is exact at p = 2: closed-form gap is 2c
    assert pred2.predicted_gap_sum == pytest.approx(p2_gap_length(1.0, 0.9),
                                                    abs=1e-15)

    zero = jb.first_order_prediction(8, 0.0)
    assert zero.predicted_gap_sum == 0.0
    assert all(x == 0.0 for x in zero.predicted_gap_lengths)

    assert jb.first_order_prediction(3, 0.1).odd_period_extrapolated
    assert not jb.first_order_prediction(4, 0.1).odd_period_extrapolated

    with pytest.raises(jb.BadC):
        jb.first_order_prediction(4, 1.5)


def test_p2_gap_exact_for_any_c():
    for c in np.linspace(0.05, 0.95, 10):
        J = jb.theorem1_instance(2, float(c))
        S = jb.band_structure(J)
        assert abs(S.summary.gap_measure - 2.0 * c) <= 1e-12
        pred = jb.first_order_prediction(2, float(c))
        assert abs(S.summary.gap_measure - pred.predicted_gap_sum) <= 1e-12


def test_gap_sum_quadratic_remainder():
    for p in range(2, 9):
        c = 1e-4
        S = jb.band_structure(jb.theorem1_instance(p, c))
        assert abs(S.summary.gap_measure - 4.0 * (p - 1) * c / p) <= 50.0 * c * c


def test_per_gap_law():
    for p in range(2, 9):
        for c in (1e-3, 1e-4):
            S = jb.band_structure(jb.theorem1_instance(p, c))
            assert np.all(np.abs(S.gap_lengths - 4.0 * c / p) <= 50.0 * c * c)


def test_ratio_improves_as_c_shrinks():
    for p in (3, 4, 7):
        rows = jb.theorem1_report(p, [1e-3, 1e-4])
        dev_coarse = abs(rows[0].ratio - 1.0)
        dev_fine = abs(rows[1].ratio - 1.0)
        assert dev_fine < dev_coarse


def test_report_rows():
    rows = jb.theorem1_report(2, [0.01])
    row = rows[0]
    assert row.gap_sum_measured == pytest.approx(0.02, abs=1e-13)
    assert row.ratio == pytest.approx(1.0, abs=1e-11)
    assert row.gap_sum_predicted == pytest.approx(0.02, abs=1e-16)
    assert row.max_single_gap_abs_err <= 1e-12

    rows4 = jb.theorem1_report(4, [1e-2, 1e-3, 1e-4])
    ratios = [abs(r.ratio - 1.0) for r in rows4]
    assert ratios == sorted(ratios, reverse=True)


def test_report_odd_period():
    row = jb.theorem1_report(3, [1e-3])[0]
    assert abs(row.ratio - 1.0) <= 1e-2


def test_report_csv():
    text = jb.theorem1_csv(jb.theorem1_report(4, [1e-2, 1e-3]))
    lines = text.strip().split("\n")
    assert lines[0] == THEOREM1_CSV_HEADER
    assert len(lines) == 3
    cells = lines[1].split(",")
    assert cells[0] == "4"
    assert float(cells[1]) == 1e-2


def test_unperturbed_ring_eigenvalues():
    for p in (2, 3, 4, 8, 12):
        J = jb.free_instance(p)
        w = jb.symmetric_eigenvalues(jb.floquet_matrix(J, 0.0))
        np.testing.assert_allclose(w, free_edge_eigenvalues(p, 0.0), atol=1e-10)
        w_pi = jb.symmetric_eigenvalues(jb.floquet_matrix(J, math.pi))
        np.testing.assert_allclose(w_pi, free_edge_eigenvalues(p, math.pi),
                                   atol=1e-10)


def test_extreme_edge_shift_magnitude():
    # only the magnitude 2c/p is asserted; the sign is recorded as observed
    observed_signs = set()
    for p in (2, 4, 6):
        c = 1e-4
        shift = jb.extreme_edge_shift(p, c)
        assert abs(abs(shift) - 2.0 * c / p) <= 50.0 * c * c
        observed_signs.add(math.copysign(1.0, shift))
    assert len(observed_signs) == 1  # consistent across periods
