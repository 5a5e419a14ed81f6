"""Spectral estimate right-hand sides and slack checks.

Eight inequalities relate the spectrum of an instance to its coefficients
(r is the spectral radius lambda_max - lambda_min, |bands| the total band
measure, |gaps| the total gap measure):

    rad    r >= 4 (a_1 ... a_p)^(1/p)
    mes    |bands| <= 4 (a_1 ... a_p)^(1/p)
    mes1   |bands| <= 4 min a
    est    |gaps| >= 4 (a_1 ... a_p)^(1/p) - 4 min a
    est2   |gaps| >= 2 max a - 4 min a
    est4   |gaps| >= (2/p) (max a - min a)
    estb   |gaps| >= max b - min b
    estc   |gaps| >= max(max(4 (a_1...a_p)^(1/p), 2 max a) - 4 min a,
                         max b - min b)

All eight are theorems for valid instances, so a negative slack beyond
tolerance signals an implementation defect, which is why violations are
returned as data rather than raised.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .bands import Spectrum
from .core import PeriodicJacobi

INEQUALITY_IDS = ("rad", "mes", "mes1", "est", "est2", "est4", "estb", "estc")


def default_tolerance(radius: float, rel: float = 1e-9) -> float:
    """Slack tolerance rel * (1 + r); scales with the spectral extent."""
    return rel * (1.0 + radius)


@dataclass(frozen=True)
class EstimateReport:
    """RHS values for the eight inequalities, plus slack once checked.

    Slack is the margin by which an inequality holds (lower bounds:
    LHS - RHS; upper bounds mes/mes1: RHS - LHS), so slack >= -tol always on
    a correct implementation.  Fields after `rhs_estc` stay None until
    check_estimates fills them.
    """

    p: int
    geomean4: float
    min4: float
    max2: float
    rhs_rad: float
    rhs_mes: float
    rhs_mes1: float
    rhs_est: float
    rhs_est2: float
    rhs_est4: float
    rhs_estb: float
    rhs_estc: float
    r: float | None = None
    band_measure: float | None = None
    gap_measure: float | None = None
    tol: float | None = None
    slack_rad: float | None = None
    slack_mes: float | None = None
    slack_mes1: float | None = None
    slack_est: float | None = None
    slack_est2: float | None = None
    slack_est4: float | None = None
    slack_estb: float | None = None
    slack_estc: float | None = None
    violated: tuple[str, ...] = ()

    def rhs(self, ineq: str) -> float:
        return getattr(self, f"rhs_{ineq}")

    def slack(self, ineq: str) -> float | None:
        return getattr(self, f"slack_{ineq}")

    @property
    def checked(self) -> bool:
        return self.slack_rad is not None


def estimate_rhs(J: PeriodicJacobi) -> EstimateReport:
    """Right-hand sides of all eight inequalities (no spectrum needed).

    The geometric mean is computed in log space so extreme couplings neither
    overflow nor underflow.
    """
    p = J.p
    geomean4 = 4.0 * math.exp(math.fsum(math.log(x) for x in J.a) / p)
    min_a = min(J.a)
    max_a = max(J.a)
    min4 = 4.0 * min_a
    max2 = 2.0 * max_a
    b_spread = max(J.b) - min(J.b)
    return EstimateReport(
        p=p,
        geomean4=geomean4,
        min4=min4,
        max2=max2,
        rhs_rad=geomean4,
        rhs_mes=geomean4,
        rhs_mes1=min4,
        rhs_est=geomean4 - min4,
        rhs_est2=max2 - min4,
        rhs_est4=(2.0 / p) * (max_a - min_a),
        rhs_estb=b_spread,
        rhs_estc=max(max(geomean4, max2) - min4, b_spread),
    )


def check_estimates(J: PeriodicJacobi, S: Spectrum,
                    tol: float | None = None) -> EstimateReport:
    """Slack of every inequality against a computed spectrum.

    tol defaults to 1e-9 * (1 + r), loose enough to absorb eigensolver
    roundoff at genuine equality cases yet tight enough that any real
    violation is caught.  Violations are reported, never raised.
    """
    report = estimate_rhs(J)
    r = S.summary.radius_r
    bandm = S.summary.band_measure
    gapm = S.summary.gap_measure
    if tol is None:
        tol = default_tolerance(r)
    slacks = {
        "rad": r - report.rhs_rad,
        "mes": report.rhs_mes - bandm,
        "mes1": report.rhs_mes1 - bandm,
        "est": gapm - report.rhs_est,
        "est2": gapm - report.rhs_est2,
        "est4": gapm - report.rhs_est4,
        "estb": gapm - report.rhs_estb,
        "estc": gapm - report.rhs_estc,
    }
    violated = tuple(i for i in INEQUALITY_IDS if slacks[i] < -tol)
    return replace(
        report,
        r=r,
        band_measure=bandm,
        gap_measure=gapm,
        tol=tol,
        violated=violated,
        **{f"slack_{i}": slacks[i] for i in INEQUALITY_IDS},
    )


def report_to_dict(report: EstimateReport) -> dict:
    d = {
        "p": report.p,
        "rhs": {i: report.rhs(i) for i in INEQUALITY_IDS},
        "geomean4": report.geomean4,
        "min4": report.min4,
        "max2": report.max2,
    }
    if report.checked:
        d["lhs"] = {
            "r": report.r,
            "band_measure": report.band_measure,
            "gap_measure": report.gap_measure,
        }
        d["slack"] = {i: report.slack(i) for i in INEQUALITY_IDS}
        d["tol"] = report.tol
        d["violated"] = list(report.violated)
    return d


def report_to_json(report: EstimateReport) -> str:
    return json.dumps(report_to_dict(report))


CSV_HEADER = (
    "p,r,band_measure,gap_measure,"
    + ",".join(f"rhs_{i}" for i in INEQUALITY_IDS)
    + ","
    + ",".join(f"slack_{i}" for i in INEQUALITY_IDS)
    + ",violated"
)


def report_to_csv_row(report: EstimateReport) -> str:
    """One CSV row per instance, for aggregating fuzzing campaigns."""
    if not report.checked:
        raise ValueError("report has no slack values; run check_estimates first")
    cells = [str(report.p), repr(report.r), repr(report.band_measure),
             repr(report.gap_measure)]
    cells += [repr(report.rhs(i)) for i in INEQUALITY_IDS]
    cells += [repr(report.slack(i)) for i in INEQUALITY_IDS]
    cells.append(";".join(report.violated))
    return ",".join(cells)
