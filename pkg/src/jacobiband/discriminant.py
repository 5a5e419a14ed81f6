"""Transfer-matrix discriminant and the bisection band-edge oracle.

The one-period transfer product (monodromy) has unit determinant and its
trace D(lambda) characterizes the spectrum: spectrum = {lambda : |D| <= 2},
band edges solve D = +-2, and inside band i the dispersion value lambda_i(k)
is the unique solution of D(lambda) = 2 cos k.

Edges are located without any eigensolve, so this module serves as an
independent cross-check of the boundary-condition eigenvalue path:

1. every band holds exactly one simple zero of D; the p zeros are bracketed
   by a sign scan over Gershgorin enclosures of the spectrum (D alternates
   sign between consecutive bands) and bisected;
2. between consecutive zeros lies exactly one critical point of D, bisected
   on the exact derivative D'; critical values satisfy |D| >= 2, with
   equality exactly at closed gaps;
3. each monotone piece between critical points crosses D = +2 and D = -2
   once apiece, giving the 2p edges; a critical value within TOUCH_TOL of
   +-2 is a tangency and is reported as a double edge.

Transfer products are accumulated with power-of-two rescaling so that far
outside the spectrum the sign of D stays exact instead of overflowing, and
in extended precision for periods above EXTENDED_PRECISION_PERIOD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .core import PeriodicJacobi

BISECT_TOL = 1e-12
TOUCH_TOL = 1e-9
EXTENDED_PRECISION_PERIOD = 64
_MAX_BISECT_ITER = 200
_RESCALE_HI = 1e150
_RESCALE_LO = 1e-150
_RESCALE_UP = 2.0 ** 512
_RESCALE_DOWN = 2.0 ** -512


class RootCountMismatch(RuntimeError):
    """The edge search did not resolve the expected root structure."""


class BandIndexOutOfRange(ValueError):
    """Band index outside 1..p."""


# ----------------------------------------------------------------------
# float64 kernels (periods up to EXTENDED_PRECISION_PERIOD)
# ----------------------------------------------------------------------

@njit(cache=True)
def _delta_scalar(a, b, lam):
    p = a.size
    m00 = 1.0
    m01 = 0.0
    m10 = 0.0
    m11 = 1.0
    shift = 0
    for n in range(p):
        t00 = (lam - b[n]) / a[n]
        t01 = -a[n - 1] / a[n]
        n00 = t00 * m00 + t01 * m10
        n01 = t00 * m01 + t01 * m11
        m10 = m00
        m11 = m01
        m00 = n00
        m01 = n01
        m = max(max(abs(m00), abs(m01)), max(abs(m10), abs(m11)))
        if m > _RESCALE_HI:
            m00 *= _RESCALE_DOWN
            m01 *= _RESCALE_DOWN
            m10 *= _RESCALE_DOWN
            m11 *= _RESCALE_DOWN
            shift += 1
        elif m < _RESCALE_LO:
            m00 *= _RESCALE_UP
            m01 *= _RESCALE_UP
            m10 *= _RESCALE_UP
            m11 *= _RESCALE_UP
            shift -= 1
    val = m00 + m11
    while shift > 0:
        val *= _RESCALE_UP
        shift -= 1
    while shift < 0:
        val *= _RESCALE_DOWN
        shift += 1
    return val


@njit(cache=True)
def _ddelta_scalar(a, b, lam):
    """Derivative of the discriminant via the product rule on the transfer chain."""
    p = a.size
    m00 = 1.0
    m01 = 0.0
    m10 = 0.0
    m11 = 1.0
    d00 = 0.0
    d01 = 0.0
    d10 = 0.0
    d11 = 0.0
    shift = 0
    for n in range(p):
        t00 = (lam - b[n]) / a[n]
        t01 = -a[n - 1] / a[n]
        inv_a = 1.0 / a[n]
        e00 = t00 * d00 + t01 * d10 + inv_a * m00
        e01 = t00 * d01 + t01 * d11 + inv_a * m01
        d10 = d00
        d11 = d01
        d00 = e00
        d01 = e01
        n00 = t00 * m00 + t01 * m10
        n01 = t00 * m01 + t01 * m11
        m10 = m00
        m11 = m01
        m00 = n00
        m01 = n01
        m = max(max(abs(m00), abs(m01)), max(abs(m10), abs(m11)))
        m = max(m, max(max(abs(d00), abs(d01)), max(abs(d10), abs(d11))))
        if m > _RESCALE_HI:
            m00 *= _RESCALE_DOWN
            m01 *= _RESCALE_DOWN
            m10 *= _RESCALE_DOWN
            m11 *= _RESCALE_DOWN
            d00 *= _RESCALE_DOWN
            d01 *= _RESCALE_DOWN
            d10 *= _RESCALE_DOWN
            d11 *= _RESCALE_DOWN
            shift += 1
        elif m < _RESCALE_LO:
            m00 *= _RESCALE_UP
            m01 *= _RESCALE_UP
            m10 *= _RESCALE_UP
            m11 *= _RESCALE_UP
            d00 *= _RESCALE_UP
            d01 *= _RESCALE_UP
            d10 *= _RESCALE_UP
            d11 *= _RESCALE_UP
            shift -= 1
    val = d00 + d11
    while shift > 0:
        val *= _RESCALE_UP
        shift -= 1
    while shift < 0:
        val *= _RESCALE_DOWN
        shift += 1
    return val


@njit(cache=True)
def _delta_many_f64(a, b, lams):
    out = np.empty(lams.size)
    for j in range(lams.size):
        out[j] = _delta_scalar(a, b, lams[j])
    return out


@njit(cache=True)
def _bisect_delta_f64(a, b, los, his, targets, tol, maxit):
    roots = np.empty(los.size)
    for r in range(los.size):
        lo = los[r]
        hi = his[r]
        tgt = targets[r]
        flo_neg = (_delta_scalar(a, b, lo) - tgt) < 0.0
        for _ in range(maxit):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            fm_neg = (_delta_scalar(a, b, mid) - tgt) < 0.0
            if fm_neg == flo_neg:
                lo = mid
            else:
                hi = mid
        roots[r] = 0.5 * (lo + hi)
    return roots


@njit(cache=True)
def _bisect_ddelta_f64(a, b, los, his, tol, maxit):
    roots = np.empty(los.size)
    for r in range(los.size):
        lo = los[r]
        hi = his[r]
        flo_neg = _ddelta_scalar(a, b, lo) < 0.0
        for _ in range(maxit):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            fm_neg = _ddelta_scalar(a, b, mid) < 0.0
            if fm_neg == flo_neg:
                lo = mid
            else:
                hi = mid
        roots[r] = 0.5 * (lo + hi)
    return roots


# ----------------------------------------------------------------------
# extended-precision path (periods above EXTENDED_PRECISION_PERIOD)
# ----------------------------------------------------------------------

def _delta_many_ld(a, b, lams, want_deriv=False):
    """Discriminant (and optionally its derivative) in extended precision."""
    lams = np.asarray(lams, dtype=np.longdouble)
    a = a.astype(np.longdouble)
    b = b.astype(np.longdouble)
    one = np.ones_like(lams)
    zero = np.zeros_like(lams)
    m00, m01, m10, m11 = one.copy(), zero.copy(), zero.copy(), one.copy()
    d00, d01, d10, d11 = zero.copy(), zero.copy(), zero.copy(), zero.copy()
    shift = np.zeros(lams.shape, dtype=np.int64)
    hi = np.longdouble(_RESCALE_HI) ** 2
    lo = np.longdouble(_RESCALE_LO) ** 2
    up = np.longdouble(2.0) ** 1024
    down = np.longdouble(2.0) ** -1024
    p = a.size
    for n in range(p):
        t00 = (lams - b[n]) / a[n]
        t01 = -a[n - 1] / a[n]
        if want_deriv:
            e00 = t00 * d00 + t01 * d10 + m00 / a[n]
            e01 = t00 * d01 + t01 * d11 + m01 / a[n]
            d10, d11 = d00, d01
            d00, d01 = e00, e01
        n00 = t00 * m00 + t01 * m10
        n01 = t00 * m01 + t01 * m11
        m10, m11 = m00, m01
        m00, m01 = n00, n01
        m = np.maximum(np.maximum(np.abs(m00), np.abs(m01)),
                       np.maximum(np.abs(m10), np.abs(m11)))
        big = m > hi
        if big.any():
            for arr in (m00, m01, m10, m11, d00, d01, d10, d11):
                arr[big] *= down
            shift[big] += 1
        small = (m < lo) & (m > 0)
        if small.any():
            for arr in (m00, m01, m10, m11, d00, d01, d10, d11):
                arr[small] *= up
            shift[small] -= 1

    def _rescaled(val):
        val = val.copy()
        s = shift.copy()
        while (s != 0).any():
            pos = s > 0
            val[pos] *= up
            s[pos] -= 1
            neg = s < 0
            val[neg] *= down
            s[neg] += 1
        return np.asarray(val, dtype=float)

    if want_deriv:
        return _rescaled(m00 + m11), _rescaled(d00 + d11)
    return _rescaled(m00 + m11)


def _bisect_masked(f, los, his, targets, tol, maxit):
    """Vectorized bisection of f(lambda) = target over parallel brackets."""
    lo = np.array(los, dtype=float)
    hi = np.array(his, dtype=float)
    targets = np.asarray(targets, dtype=float)
    flo_neg = (f(lo) - targets) < 0
    for _ in range(maxit):
        mid = 0.5 * (lo + hi)
        active = (hi - lo > tol) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        fm_neg = (f(mid) - targets) < 0
        go_lo = active & (fm_neg == flo_neg)
        go_hi = active & ~go_lo
        lo[go_lo] = mid[go_lo]
        flo_neg[go_lo] = fm_neg[go_lo]
        hi[go_hi] = mid[go_hi]
    return 0.5 * (lo + hi)


# ----------------------------------------------------------------------
# public evaluation surface
# ----------------------------------------------------------------------

def transfer_matrix(J: PeriodicJacobi, n: int, lam: float) -> np.ndarray:
    """Single-site transfer step propagating (y[n+1], y[n]).

    T_n = [[(lam - b[n])/a[n], -a[n-1]/a[n]], [1, 0]] with wraparound on the
    second coupling; det T_n = a[n-1]/a[n], so the one-period product has
    determinant one.
    """
    p = J.p
    if not 0 <= n < p:
        raise ValueError(f"site index {n} outside 0..{p - 1}")
    an = J.a[n]
    aprev = J.a[(n - 1) % p]
    return np.array([[(lam - J.b[n]) / an, -aprev / an], [1.0, 0.0]])


def monodromy(J: PeriodicJacobi, lam: float) -> np.ndarray:
    """One-period transfer product T_{p-1} ... T_0 (unit determinant)."""
    M = np.eye(2)
    for n in range(J.p):
        M = transfer_matrix(J, n, lam) @ M
    return M


@dataclass
class DiscriminantEval:
    """Evaluation context for one instance: discriminant, edges, dispersion.

    Stateless apart from the instance and a lazily computed edge cache, so
    concurrent use on distinct contexts is safe.
    """

    instance: PeriodicJacobi
    _a: np.ndarray = field(init=False, repr=False)
    _b: np.ndarray = field(init=False, repr=False)
    _edges: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        self._a = np.array(self.instance.a, dtype=float)
        self._b = np.array(self.instance.b, dtype=float)

    @property
    def _extended(self) -> bool:
        return self.instance.p > EXTENDED_PRECISION_PERIOD

    def delta_many(self, lams) -> np.ndarray:
        lams = np.ascontiguousarray(lams, dtype=float)
        if self._extended:
            return _delta_many_ld(self._a, self._b, lams)
        return _delta_many_f64(self._a, self._b, lams)

    def delta(self, lam: float) -> float:
        return float(self.delta_many(np.array([float(lam)]))[0])

    def delta_prime_many(self, lams) -> np.ndarray:
        lams = np.ascontiguousarray(lams, dtype=float)
        if self._extended:
            return _delta_many_ld(self._a, self._b, lams, want_deriv=True)[1]
        out = np.empty(lams.size)
        for j, x in enumerate(lams):
            out[j] = _ddelta_scalar(self._a, self._b, x)
        return out

    def delta_prime(self, lam: float) -> float:
        return float(self.delta_prime_many(np.array([float(lam)]))[0])

    def _solve_delta(self, los, his, targets) -> np.ndarray:
        los = np.ascontiguousarray(los, dtype=float)
        his = np.ascontiguousarray(his, dtype=float)
        targets = np.ascontiguousarray(targets, dtype=float)
        if self._extended:
            return _bisect_masked(self.delta_many, los, his, targets,
                                  BISECT_TOL, _MAX_BISECT_ITER)
        return _bisect_delta_f64(self._a, self._b, los, his, targets,
                                 BISECT_TOL, _MAX_BISECT_ITER)

    def _solve_delta_prime_zero(self, los, his) -> np.ndarray:
        los = np.ascontiguousarray(los, dtype=float)
        his = np.ascontiguousarray(his, dtype=float)
        if self._extended:
            return _bisect_masked(self.delta_prime_many, los, his,
                                  np.zeros_like(los), BISECT_TOL,
                                  _MAX_BISECT_ITER)
        return _bisect_ddelta_f64(self._a, self._b, los, his,
                                  BISECT_TOL, _MAX_BISECT_ITER)

    # -- spectral enclosure and zero scan ------------------------------

    def search_bracket(self) -> tuple[float, float]:
        """Interval guaranteed to contain the whole spectrum, with margin."""
        return (float(self._b.min() - 2.0 * self._a.max() - 1.0),
                float(self._b.max() + 2.0 * self._a.max() + 1.0))

    def _gershgorin_components(self) -> list[tuple[float, float, int]]:
        """Merged row-circle intervals with their disk counts.

        Every spectral band lies inside some component, and a component built
        from m disks contains exactly m bands.
        """
        a, b = self._a, self._b
        radii = a + np.roll(a, 1)
        lo = b - radii
        hi = b + radii
        pad = 1e-9 * (1.0 + float(np.max(np.abs(b)) + 2.0 * np.max(a)))
        order = np.argsort(lo)
        comps: list[list[float | int]] = []
        for i in order:
            if comps and lo[i] - pad <= comps[-1][1]:
                comps[-1][1] = max(comps[-1][1], hi[i] + pad)
                comps[-1][2] += 1
            else:
                comps.append([lo[i] - pad, hi[i] + pad, 1])
        return [(float(c[0]), float(c[1]), int(c[2])) for c in comps]

    def _component_zero_brackets(self, lo: float, hi: float,
                                 count: int) -> tuple[np.ndarray, np.ndarray]:
        """Brackets for the `count` zeros of the discriminant in [lo, hi].

        The sign of the discriminant alternates between consecutive bands, so
        a fine enough scan shows exactly `count` sign changes.
        """
        npts = max(65, 32 * count + 1)
        for _ in range(10):
            grid = np.linspace(lo, hi, npts)
            vals = self.delta_many(grid)
            neg = np.signbit(vals)
            idx = np.nonzero(neg[:-1] != neg[1:])[0]
            if idx.size == count:
                return grid[idx], grid[idx + 1]
            if idx.size > count:
                break
            npts = 8 * (npts - 1) + 1
        raise RootCountMismatch(
            f"expected {count} discriminant zeros in [{lo}, {hi}], "
            f"scan found {idx.size}"
        )

    def _band_zeros(self) -> np.ndarray:
        zeros = []
        for lo, hi, count in self._gershgorin_components():
            blo, bhi = self._component_zero_brackets(lo, hi, count)
            zeros.append(self._solve_delta(blo, bhi, np.zeros(count)))
        return np.concatenate(zeros)

    # -- edges ---------------------------------------------------------

    def band_edges(self) -> np.ndarray:
        """Sorted 2p solutions of D = +-2 with multiplicity (cached)."""
        if self._edges is None:
            self._edges = self._compute_edges()
        return self._edges

    def _compute_edges(self) -> np.ndarray:
        p = self.instance.p
        zeros = self._band_zeros()
        if zeros.size != p or np.any(np.diff(zeros) < 0):
            raise RootCountMismatch(
                f"found {zeros.size} discriminant zeros, expected {p}"
            )
        crit = self._solve_delta_prime_zero(zeros[:-1], zeros[1:])
        crit_vals = self.delta_many(crit)
        zero_vals = self.delta_many(zeros)

        L, R = self.search_bracket()
        dL = self.delta(L)
        dR = self.delta(R)
        if abs(dL) <= 2.0 or abs(dR) <= 2.0:
            raise RootCountMismatch("search bracket does not enclose the spectrum")

        edges = np.empty(2 * p)
        open_lo, open_hi, open_tgt, open_pos = [], [], [], []

        def resolve(z, z_val, other, other_val, tgt, pos):
            # A band narrower than the bisection resolution places the zero
            # estimate on the far side of its own edge, so the bracket shows
            # no sign change; the edge then coincides with the zero estimate
            # to within that resolution.
            if ((z_val - tgt) < 0.0) != ((other_val - tgt) < 0.0):
                open_lo.append(min(z, other))
                open_hi.append(max(z, other))
                open_tgt.append(tgt)
                open_pos.append(pos)
            else:
                edges[pos] = z

        resolve(zeros[0], zero_vals[0], L, dL, math.copysign(2.0, dL), 0)
        for i in range(p - 1):
            v = crit_vals[i]
            tgt = math.copysign(2.0, v)
            excess = abs(v) - 2.0
            if excess > TOUCH_TOL:
                resolve(zeros[i], zero_vals[i], crit[i], v, tgt, 2 * i + 1)
                resolve(zeros[i + 1], zero_vals[i + 1], crit[i], v, tgt, 2 * i + 2)
            elif excess >= -TOUCH_TOL:
                # tangency: closed gap, double edge at the critical point
                edges[2 * i + 1] = crit[i]
                edges[2 * i + 2] = crit[i]
            else:
                raise RootCountMismatch(
                    f"critical value {v} inside (-2, 2): gap structure lost"
                )
        resolve(zeros[-1], zero_vals[-1], R, dR, 2.0, 2 * p - 1)

        if open_lo:
            roots = self._solve_delta(np.array(open_lo), np.array(open_hi),
                                      np.array(open_tgt))
            for pos, root in zip(open_pos, roots):
                edges[pos] = root
        edges.sort()
        return edges

    # -- dispersion ----------------------------------------------------

    def dispersion(self, i: int, k: float) -> float:
        """lambda_i(k): the unique point of band i where D = 2 cos k."""
        p = self.instance.p
        if not 1 <= i <= p:
            raise BandIndexOutOfRange(f"band index {i} outside 1..{p}")
        if not 0.0 <= k <= math.pi:
            raise ValueError(f"k={k} outside [0, pi]")
        edges = self.band_edges()
        lo = edges[2 * i - 2]
        hi = edges[2 * i - 1]
        if lo == hi:
            return float(lo)
        if k == 0.0 or k == math.pi:
            # boundary values are the band edges themselves; pick the edge
            # whose discriminant value matches 2 cos k
            target = 2.0 if k == 0.0 else -2.0
            if abs(self.delta(lo) - target) <= abs(self.delta(hi) - target):
                return float(lo)
            return float(hi)
        target = 2.0 * math.cos(k)
        flo = self.delta(lo) - target
        fhi = self.delta(hi) - target
        if (flo < 0) == (fhi < 0):
            # target within edge tolerance of an endpoint value
            return float(lo) if abs(flo) <= abs(fhi) else float(hi)
        return float(self._solve_delta(np.array([lo]), np.array([hi]),
                                       np.array([target]))[0])


def discriminant(J: PeriodicJacobi, lam: float) -> float:
    """Trace of the one-period transfer product at lam."""
    return DiscriminantEval(J).delta(lam)


def discriminant_many(J: PeriodicJacobi, lams) -> np.ndarray:
    return DiscriminantEval(J).delta_many(lams)


def band_edges_by_bisection(J: PeriodicJacobi) -> np.ndarray:
    """All 2p band edges (roots of D = +2 and D = -2), ascending.

    Independent of the eigenvalue path: uses only discriminant evaluations,
    sign scans, and bisection to absolute tolerance BISECT_TOL.
    """
    return DiscriminantEval(J).band_edges()


def dispersion(J: PeriodicJacobi, i: int, k: float,
               ctx: DiscriminantEval | None = None) -> float:
    """Dispersion value lambda_i(k) for band i (1-based) and k in [0, pi]."""
    return (ctx or DiscriminantEval(J)).dispersion(i, k)


def dispersion_table(J: PeriodicJacobi, kpoints: int = 201) -> tuple[np.ndarray, np.ndarray]:
    """Uniform k-grid on [0, pi] and the (kpoints, p) array of lambda_i(k)."""
    if kpoints < 2:
        raise ValueError("kpoints must be at least 2")
    ctx = DiscriminantEval(J)
    ks = np.linspace(0.0, math.pi, kpoints)
    table = np.empty((kpoints, J.p))
    for i in range(1, J.p + 1):
        for row, k in enumerate(ks):
            table[row, i - 1] = ctx.dispersion(i, float(k))
    return ks, table


def dispersion_csv(J: PeriodicJacobi, kpoints: int = 201) -> str:
    """CSV rows (k, lambda_1(k), ..., lambda_p(k)) on a uniform k-grid."""
    ks, table = dispersion_table(J, kpoints)
    lines = ["k," + ",".join(f"lambda_{i}" for i in range(1, J.p + 1))]
    for row, k in enumerate(ks):
        lines.append(",".join(repr(float(x)) for x in (k, *table[row])))
    return "\n".join(lines) + "\n"
