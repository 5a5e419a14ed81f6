"""Dense real symmetric eigensolver built on cyclic Jacobi rotations.

Only real symmetric problems are needed here: band edges come from the two
real boundary-condition matrices, so no complex Hermitian solve is required.
The solver targets small dense matrices (dimension up to a few hundred) and
returns eigenvalues only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import NonFiniteEntry

MAX_SWEEPS = 100
OFF_DIAG_REL_TOL = 1e-13
_ASYMMETRY_REL_TOL = 1e-8


class NoConvergence(RuntimeError):
    """Sweep cap hit before the off-diagonal norm dropped below tolerance."""


@dataclass(frozen=True)
class SymmetricMatrix:
    """Square real matrix stored exactly symmetric.

    The constructor symmetrizes by (A + A.T)/2, which is bitwise symmetric,
    and rejects inputs whose asymmetry exceeds a small relative tolerance.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        A = np.asarray(self.entries, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise NonFiniteEntry("matrix entries must be finite")
        scale = 1.0 + float(np.max(np.abs(A)))
        if float(np.max(np.abs(A - A.T))) > _ASYMMETRY_REL_TOL * scale:
            raise ValueError("matrix is not symmetric")
        A = 0.5 * (A + A.T)
        A.flags.writeable = False
        object.__setattr__(self, "entries", A)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@njit(cache=True)
def _cyclic_jacobi_eigvals(A, max_sweeps, rel_tol):
    """Cyclic-by-row Jacobi sweeps on A (overwritten). Returns sweep count, -1 if the cap is hit."""
    n = A.shape[0]
    fro2 = 0.0
    for i in range(n):
        for j in range(n):
            fro2 += A[i, j] * A[i, j]
    thresh2 = (rel_tol * rel_tol) * fro2
    skip = 1e-18 * np.sqrt(fro2)
    for sweep in range(max_sweeps + 1):
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += 2.0 * A[i, j] * A[i, j]
        if off2 <= thresh2:
            return sweep
        if sweep == max_sweeps:
            return -1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    if i != p and i != q:
                        aip = A[i, p]
                        aiq = A[i, q]
                        A[i, p] = aip * c - aiq * s
                        A[p, i] = A[i, p]
                        A[i, q] = aiq * c + aip * s
                        A[q, i] = A[i, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
    return -1


def symmetric_eigenvalues(M: SymmetricMatrix) -> np.ndarray:
    """All n eigenvalues of M with multiplicity, ascending."""
    A = np.array(M.entries, dtype=float)
    sweeps = _cyclic_jacobi_eigvals(A, MAX_SWEEPS, OFF_DIAG_REL_TOL)
    if sweeps < 0:
        raise NoConvergence(
            f"no convergence after {MAX_SWEEPS} sweeps on a {M.n}x{M.n} matrix"
        )
    w = np.diagonal(A).copy()
    w.sort()
    return w
