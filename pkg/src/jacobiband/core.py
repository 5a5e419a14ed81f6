"""Periodic Jacobi instances: validation, transforms, JSON round-trip.

An instance is the pair of p-periodic real sequences (a, b): a[n] > 0 couples
sites n and n+1, b[n] sits on the diagonal.  Indices wrap modulo p, so a[-1]
is the coupling closing the period ring.  Instances are immutable and safe to
share between threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class LengthMismatch(ValueError):
    """a and b have different lengths."""


class PeriodTooSmall(ValueError):
    """Period p < 2."""


class NonPositiveCoupling(ValueError):
    """Some off-diagonal entry a[n] <= 0 (or NaN)."""


class NonFiniteEntry(ValueError):
    """Some entry is infinite or NaN."""


class NonPositiveScale(ValueError):
    """Scale factor s <= 0."""


@dataclass(frozen=True)
class PeriodicJacobi:
    """A p-periodic Jacobi instance (a, b) with all a[n] > 0 and p >= 2.

    The minimal period is not enforced: constant sequences stored with any
    p >= 2 are fine.  Use :func:`new_periodic_jacobi` to build from arbitrary
    sequences; direct construction validates too.
    """

    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            raise LengthMismatch(
                f"a has {len(self.a)} entries, b has {len(self.b)}"
            )
        if len(self.a) < 2:
            raise PeriodTooSmall(f"period {len(self.a)} < 2")
        for x in self.a:
            if math.isnan(x) or not x > 0.0:
                raise NonPositiveCoupling(f"off-diagonal entry {x!r} is not > 0")
            if math.isinf(x):
                raise NonFiniteEntry(f"off-diagonal entry {x!r} is not finite")
        for x in self.b:
            if not math.isfinite(x):
                raise NonFiniteEntry(f"diagonal entry {x!r} is not finite")

    @property
    def p(self) -> int:
        return len(self.a)

    def a_wrapped(self, n: int) -> float:
        """Coupling a[n mod p]; a_wrapped(-1) closes the period ring."""
        return self.a[n % len(self.a)]


def new_periodic_jacobi(a: Sequence[float], b: Sequence[float]) -> PeriodicJacobi:
    """Validated instance from two equal-length sequences of reals."""
    return PeriodicJacobi(tuple(float(x) for x in a), tuple(float(x) for x in b))


def shift(J: PeriodicJacobi, t: float) -> PeriodicJacobi:
    """Add t to every diagonal entry; translates the whole spectrum by t.

    Off-diagonal entries, and hence all band and gap lengths, are unchanged.
    """
    t = float(t)
    if not math.isfinite(t):
        raise NonFiniteEntry(f"shift {t!r} is not finite")
    return PeriodicJacobi(J.a, tuple(x + t for x in J.b))


def scale(J: PeriodicJacobi, s: float) -> PeriodicJacobi:
    """Multiply all entries by s > 0; every band edge scales by s."""
    s = float(s)
    if math.isnan(s) or s <= 0.0:
        raise NonPositiveScale(f"scale {s!r} is not > 0")
    if math.isinf(s):
        raise NonFiniteEntry(f"scale {s!r} is not finite")
    return PeriodicJacobi(
        tuple(s * x for x in J.a), tuple(s * x for x in J.b)
    )


@dataclass(frozen=True)
class SpectrumSummary:
    """Aggregate spectral extents of one instance.

    radius_r is the distance between the extreme spectral points and equals
    band_measure + gap_measure exactly: all three are assembled from the same
    sorted edge list.
    """

    lambda_min: float
    lambda_max: float
    radius_r: float
    band_measure: float
    gap_measure: float

    def __post_init__(self) -> None:
        for name in ("lambda_min", "lambda_max", "radius_r",
                     "band_measure", "gap_measure"):
            if not math.isfinite(getattr(self, name)):
                raise NonFiniteEntry(f"{name} is not finite")
        if self.radius_r < 0.0:
            raise ValueError("radius_r < 0")


def summary_from_edges(edges: Iterable[float]) -> SpectrumSummary:
    """Summary from the sorted 2p edge list (bands are consecutive pairs).

    band_measure and gap_measure are exact sums (math.fsum) of the band and
    gap lengths; radius_r is defined as their sum so the partition identity
    holds bit-exactly.
    """
    x = list(edges)
    if len(x) < 2 or len(x) % 2 != 0:
        raise ValueError(f"edge list must have even length >= 2, got {len(x)}")
    band_measure = math.fsum(x[2 * i + 1] - x[2 * i] for i in range(len(x) // 2))
    gap_measure = math.fsum(x[2 * i + 2] - x[2 * i + 1] for i in range(len(x) // 2 - 1))
    return SpectrumSummary(
        lambda_min=x[0],
        lambda_max=x[-1],
        radius_r=band_measure + gap_measure,
        band_measure=band_measure,
        gap_measure=gap_measure,
    )


def instance_to_dict(J: PeriodicJacobi) -> dict:
    return {"a": list(J.a), "b": list(J.b)}


def instance_to_json(J: PeriodicJacobi) -> str:
    """Serialize as {"a": [...], "b": [...]}; floats round-trip bit-exactly."""
    return json.dumps(instance_to_dict(J))


def instance_from_dict(d: dict) -> PeriodicJacobi:
    if not isinstance(d, dict) or "a" not in d or "b" not in d:
        raise ValueError('instance JSON must be an object with "a" and "b" arrays')
    return new_periodic_jacobi(d["a"], d["b"])


def instance_from_json(s: str) -> PeriodicJacobi:
    """Parse {"a": [...], "b": [...]}; p is inferred from the array length."""
    return instance_from_dict(json.loads(s))
