"""Band/gap structure from the boundary-condition eigenvalue path.

The spectrum of a p-periodic instance is the union of p closed bands; the
band edges are the eigenvalues of the two real p x p matrices obtained by
closing the period ring with phase +1 (k = 0) and -1 (k = pi).  The merged,
sorted 2p eigenvalues are paired in order into bands, which is the correct
assembly for positive couplings because the discriminant oscillates across
the edge list.  cross_check compares this path against the independent
discriminant bisection oracle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import PeriodicJacobi, SpectrumSummary, summary_from_edges
from .discriminant import band_edges_by_bisection
from .eigen import SymmetricMatrix, symmetric_eigenvalues

NUMERICALLY_CLOSED_GAP = 1e-10


class UnsupportedK(ValueError):
    """Boundary phase k must be 0 or pi."""


@dataclass(frozen=True)
class Band:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"band [{self.lo}, {self.hi}] has lo > hi")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class Gap:
    """Interval between consecutive bands; zero-length gaps are retained."""

    lo: float
    hi: float
    length: float

    def __post_init__(self) -> None:
        if self.length < 0.0:
            raise ValueError(f"gap [{self.lo}, {self.hi}] has negative length")

    @property
    def numerically_closed(self) -> bool:
        return self.length < NUMERICALLY_CLOSED_GAP


@dataclass(frozen=True)
class Spectrum:
    """p ascending bands, the p-1 gaps between them, and aggregate measures.

    Bands and gaps tile [lambda_min, lambda_max] contiguously: band i ends
    where gap i starts and gap i ends where band i+1 starts.  Edges are
    reported exactly as computed; nearly closed gaps are never snapped shut.
    """

    bands: tuple[Band, ...]
    gaps: tuple[Gap, ...]
    summary: SpectrumSummary

    @property
    def p(self) -> int:
        return len(self.bands)

    @property
    def edges(self) -> np.ndarray:
        """The sorted 2p edge values."""
        out = np.empty(2 * len(self.bands))
        for i, band in enumerate(self.bands):
            out[2 * i] = band.lo
            out[2 * i + 1] = band.hi
        return out

    @property
    def gap_lengths(self) -> np.ndarray:
        return np.array([g.length for g in self.gaps])


def floquet_matrix(J: PeriodicJacobi, k: float) -> SymmetricMatrix:
    """Real p x p matrix closing the period ring with phase cos(k) = +-1.

    Diagonal b, first off-diagonals a[0..p-2], and corner entries
    cos(k) * a[p-1].  For p = 2 the corner lands on the existing off-diagonal
    slot, so that entry becomes a[0] + cos(k) * a[1].
    """
    if k == 0.0:
        corner_sign = 1.0
    elif k == math.pi:
        corner_sign = -1.0
    else:
        raise UnsupportedK(f"k={k!r}; only 0 and pi give real matrices")
    p = J.p
    M = np.zeros((p, p))
    for n in range(p):
        M[n, n] = J.b[n]
    for n in range(p - 1):
        M[n, n + 1] = J.a[n]
        M[n + 1, n] = J.a[n]
    corner = corner_sign * J.a[p - 1]
    M[0, p - 1] += corner
    M[p - 1, 0] += corner
    return SymmetricMatrix(M)


def spectrum_from_edges(edges) -> Spectrum:
    """Pair a sorted even-length edge list into bands and gaps."""
    x = np.asarray(edges, dtype=float)
    bands = tuple(Band(float(x[2 * i]), float(x[2 * i + 1]))
                  for i in range(x.size // 2))
    gaps = tuple(
        Gap(float(x[2 * i + 1]), float(x[2 * i + 2]),
            float(x[2 * i + 2] - x[2 * i + 1]))
        for i in range(x.size // 2 - 1)
    )
    return Spectrum(bands=bands, gaps=gaps, summary=summary_from_edges(x))


def band_structure(J: PeriodicJacobi) -> Spectrum:
    """Exact band/gap structure via the two boundary-condition eigensolves."""
    e0 = symmetric_eigenvalues(floquet_matrix(J, 0.0))
    epi = symmetric_eigenvalues(floquet_matrix(J, math.pi))
    edges = np.sort(np.concatenate([e0, epi]))
    return spectrum_from_edges(edges)


@dataclass(frozen=True)
class CrossCheckResult:
    ok: bool
    max_deviation: float


def cross_check(J: PeriodicJacobi, tol: float) -> CrossCheckResult:
    """Compare eigenvalue-path edges against the bisection oracle.

    A mismatch is a reported result, not an exception: both paths are exact
    up to tolerance, so any deviation beyond tol indicates a defect.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    eig_edges = band_structure(J).edges
    oracle_edges = band_edges_by_bisection(J)
    dev = float(np.max(np.abs(eig_edges - oracle_edges)))
    return CrossCheckResult(ok=dev <= tol, max_deviation=dev)


def spectrum_to_dict(S: Spectrum) -> dict:
    return {
        "bands": [[b.lo, b.hi] for b in S.bands],
        "gaps": [[g.lo, g.hi] for g in S.gaps],
        "r": S.summary.radius_r,
        "band_measure": S.summary.band_measure,
        "gap_measure": S.summary.gap_measure,
    }


def spectrum_to_json(S: Spectrum) -> str:
    return json.dumps(spectrum_to_dict(S))
