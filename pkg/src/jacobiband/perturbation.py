"""First-order gap predictions for the single-weakened-coupling family.

The family fixes b = 0 and a = (1, ..., 1, 1-c) with 0 < c < 1, the sharpness
witnesses for the gap-sum bounds.  For small c every one of the p-1 gaps
opens with length 4c/p + o(c), the extreme band edges move by 2c/p + o(c),
and the gap sum is 4(p-1)c/p + o(c).  The degenerate-eigenvalue splitting is
governed by 2x2 coupling matrices with equal diagonals and off-diagonal
magnitude 2/p, so their eigenvalue split is exactly 4/p.

The closed forms below are derived for even p; odd p reuses the same 4c/p
law unchanged (no separate derivation), which theorem1_report validates
numerically for all p >= 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bands import band_structure
from .core import PeriodicJacobi
from .estimates import estimate_rhs


class BadC(ValueError):
    """Perturbation size c outside (0, 1)."""


class IndexOutOfRange(ValueError):
    """Degenerate-pair index n outside 1..p/2-1 (or p not even)."""


@dataclass(frozen=True)
class Theorem1Family:
    """Parameters (p, c) of the weakened-coupling family."""

    p: int
    c: float

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError(f"period {self.p} < 2")
        if not 0.0 < self.c < 1.0:
            raise BadC(f"c={self.c} outside (0, 1)")

    def instance(self) -> PeriodicJacobi:
        a = (1.0,) * (self.p - 1) + (1.0 - self.c,)
        return PeriodicJacobi(a, (0.0,) * self.p)


def theorem1_instance(p: int, c: float) -> PeriodicJacobi:
    """b = 0 and a = (1, ..., 1, 1-c): all couplings 1 except the last."""
    return Theorem1Family(p, float(c)).instance()


def free_instance(p: int) -> PeriodicJacobi:
    """The constant instance a = 1, b = 0 stored with period p."""
    if p < 2:
        raise ValueError(f"period {p} < 2")
    return PeriodicJacobi((1.0,) * p, (0.0,) * p)


def free_edge_eigenvalues(p: int, k: float) -> np.ndarray:
    """Closed-form eigenvalues of the free boundary-condition matrices.

    k = 0 gives {2 cos(2 pi n / p)}, k = pi gives {2 cos((2n+1) pi / p)},
    n = 0..p-1, sorted ascending.
    """
    n = np.arange(p)
    if k == 0.0:
        vals = 2.0 * np.cos(2.0 * np.pi * n / p)
    elif k == math.pi:
        vals = 2.0 * np.cos((2.0 * n + 1.0) * np.pi / p)
    else:
        raise ValueError("k must be 0 or pi")
    return np.sort(vals)


def h_matrix(p: int, n: int) -> np.ndarray:
    """2x2 Hermitian coupling matrix of the n-th degenerate eigenvalue pair.

    Closed form: diagonal cos(2 pi n (p-1) / p) / p, off-diagonal
    2 exp(2 pi i n (p+1) / p) / p.  Requires even p and 1 <= n <= p/2 - 1.
    """
    if p < 2 or p % 2 != 0:
        raise IndexOutOfRange(f"p={p} must be even")
    if not 1 <= n <= p // 2 - 1:
        raise IndexOutOfRange(f"n={n} outside 1..{p // 2 - 1}")
    d = math.cos(2.0 * math.pi * n * (p - 1) / p) / p
    w = 2.0 * cmath.exp(2j * math.pi * n * (p + 1) / p) / p
    return np.array([[d, w], [w.conjugate(), d]])


def h_matrix_sandwich(p: int, n: int) -> np.ndarray:
    """Same coupling matrix assembled from the degenerate eigenvectors.

    Sandwiches the rank-two corner matrix (ones at (0, p-1) and (p-1, 0))
    between the plane-wave eigenvectors exp(+-2 pi i n j / p)/sqrt(p).
    Double-entry check for h_matrix: the off-diagonal magnitude and the
    eigenvalue split agree; the diagonal comes out twice the closed-form
    value (see the eigenvalue split, which is unaffected).
    """
    if p < 2 or p % 2 != 0:
        raise IndexOutOfRange(f"p={p} must be even")
    if not 1 <= n <= p // 2 - 1:
        raise IndexOutOfRange(f"n={n} outside 1..{p // 2 - 1}")
    j = np.arange(1, p + 1)
    v1 = np.exp(2j * np.pi * n * j / p) / math.sqrt(p)
    v2 = np.exp(-2j * np.pi * n * j / p) / math.sqrt(p)
    J1 = np.zeros((p, p))
    J1[0, p - 1] = 1.0
    J1[p - 1, 0] = 1.0
    return np.array([
        [v1.conj() @ J1 @ v1, v1.conj() @ J1 @ v2],
        [v2.conj() @ J1 @ v1, v2.conj() @ J1 @ v2],
    ])


def h_eigenvalue_split(p: int, n: int) -> float:
    """Difference of the two eigenvalues of h_matrix(p, n).

    Equal diagonals make the eigenvalues d +- |offdiag|, so the split is
    2 |offdiag| = 4/p.
    """
    H = h_matrix(p, n)
    return 2.0 * abs(H[0, 1])


@dataclass(frozen=True)
class PerturbationPrediction:
    """First-order predictions for the family at (p, c).

    predicted_gap_sum is the exact sum of predicted_gap_lengths by
    construction.  odd_period_extrapolated marks periods where the closed
    forms are reused beyond their even-p derivation.
    """

    p: int
    c: float
    predicted_gap_lengths: tuple[float, ...]
    predicted_gap_sum: float
    predicted_extreme_shift_magnitude: float
    hn_offdiag_magnitude: float
    odd_period_extrapolated: bool


def first_order_prediction(p: int, c: float) -> PerturbationPrediction:
    """All p-1 gaps at 4c/p; gap sum 4(p-1)c/p; extreme edge shift 2c/p.

    Accepts c = 0 (all predictions vanish); otherwise c must lie in (0, 1)
    like the instance itself.
    """
    c = float(c)
    if p < 2:
        raise ValueError(f"period {p} < 2")
    if c != 0.0 and not 0.0 < c < 1.0:
        raise BadC(f"c={c} outside (0, 1)")
    per_gap = 4.0 * c / p
    lengths = (per_gap,) * (p - 1)
    return PerturbationPrediction(
        p=p,
        c=c,
        predicted_gap_lengths=lengths,
        predicted_gap_sum=math.fsum(lengths),
        predicted_extreme_shift_magnitude=2.0 * c / p,
        hn_offdiag_magnitude=2.0 / p,
        odd_period_extrapolated=(p % 2 == 1),
    )


def extreme_edge_shift(p: int, c: float) -> float:
    """Measured displacement of the top spectral edge from its c = 0 value 2.

    Only the magnitude ~ 2c/p is predicted; the sign is an observed output
    (weakening a coupling pulls the top edge down, so it comes out negative).
    """
    S = band_structure(theorem1_instance(p, c))
    return S.summary.lambda_max - 2.0


@dataclass(frozen=True)
class TheoremOneRow:
    p: int
    c: float
    gap_sum_measured: float
    gap_sum_predicted: float
    ratio: float
    rhs_est: float
    max_single_gap_abs_err: float


def theorem1_report(p: int, c_values) -> list[TheoremOneRow]:
    """Measured vs predicted gap structure for each c.

    Per row: exact gap sum against 4(p-1)c/p, their ratio (which tends to 1
    as c -> 0), the geometric-mean gap-sum lower bound for the same instance,
    and the worst per-gap deviation from 4c/p.
    """
    rows = []
    for c in c_values:
        c = float(c)
        J = theorem1_instance(p, c)
        S = band_structure(J)
        pred = first_order_prediction(p, c)
        measured = S.summary.gap_measure
        per_gap = 4.0 * c / p
        max_err = float(np.max(np.abs(S.gap_lengths - per_gap)))
        rows.append(TheoremOneRow(
            p=p,
            c=c,
            gap_sum_measured=measured,
            gap_sum_predicted=pred.predicted_gap_sum,
            ratio=measured / pred.predicted_gap_sum,
            rhs_est=estimate_rhs(J).rhs_est,
            max_single_gap_abs_err=max_err,
        ))
    return rows


THEOREM1_CSV_HEADER = ("p,c,gap_sum_measured,gap_sum_predicted,ratio,"
                       "rhs_est,max_single_gap_abs_err")


def theorem1_csv(rows: list[TheoremOneRow]) -> str:
    lines = [THEOREM1_CSV_HEADER]
    for row in rows:
        lines.append(",".join([
            str(row.p), repr(row.c), repr(row.gap_sum_measured),
            repr(row.gap_sum_predicted), repr(row.ratio), repr(row.rhs_est),
            repr(row.max_single_gap_abs_err),
        ]))
    return "\n".join(lines) + "\n"
