"""Randomized inequality campaigns and a slack-minimizing sharpness search.

Couplings are drawn log-uniform so both weakly and strongly oscillating
regimes get exercised; diagonals are uniform.  Every trial gets its own RNG
stream derived from (seed, trial index), so campaigns are reproducible and
trials are order-independent and parallelizable in principle.

The eight inequalities are theorems, so the expected violation list of any
campaign is empty; a nonempty list is a defect to investigate.  The search
is a sharpness-evidence heuristic, not a certified minimizer: it performs
coordinate-wise random descent on the slack of one chosen inequality.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bands import band_structure, cross_check
from .core import PeriodicJacobi, instance_to_dict, new_periodic_jacobi
from .estimates import INEQUALITY_IDS, check_estimates

RNG_ALGORITHM = "numpy-pcg64-seedsequence(seed,trial)"
DEFAULT_CROSS_TOL = 1e-8


@dataclass(frozen=True)
class FuzzConfig:
    """Campaign shape: trial count, period range, coupling/diagonal laws, seed.

    Couplings are log-uniform on [a_lo, a_hi], diagonals uniform on
    [b_lo, b_hi], the period uniform on [p_min, p_max].
    """

    trials: int
    p_min: int = 2
    p_max: int = 12
    a_lo: float = 1e-3
    a_hi: float = 1e3
    b_lo: float = -10.0
    b_hi: float = 10.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 2 <= self.p_min <= self.p_max:
            raise ValueError("need 2 <= p_min <= p_max")
        if not 0.0 < self.a_lo <= self.a_hi:
            raise ValueError("need 0 < a_lo <= a_hi")
        if not self.b_lo <= self.b_hi:
            raise ValueError("need b_lo <= b_hi")


def trial_rng(cfg: FuzzConfig, trial: int) -> np.random.Generator:
    """Independent, replayable stream for one trial."""
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence((cfg.seed, trial))
    ))


def random_instance(cfg: FuzzConfig, rng: np.random.Generator) -> PeriodicJacobi:
    """One draw: p uniform, a log-uniform, b uniform."""
    p = int(rng.integers(cfg.p_min, cfg.p_max + 1))
    a = np.exp(rng.uniform(math.log(cfg.a_lo), math.log(cfg.a_hi), p))
    b = rng.uniform(cfg.b_lo, cfg.b_hi, p)
    return new_periodic_jacobi(a, b)


@dataclass(frozen=True)
class Violation:
    trial: int
    inequality: str
    slack: float
    instance: PeriodicJacobi


@dataclass(frozen=True)
class CrossCheckFailure:
    trial: int
    max_deviation: float
    instance: PeriodicJacobi
    error: str = ""


@dataclass(frozen=True)
class MinSlack:
    value: float
    trial: int
    instance: PeriodicJacobi


@dataclass
class FuzzReport:
    """Campaign outcome.

    Everything except elapsed_seconds is a deterministic function of the
    config, which is what summary_dict / per-trial CSV expose by default;
    wall-clock stats are opt-in so reports stay byte-comparable.
    """

    config: FuzzConfig
    cross_tol: float = DEFAULT_CROSS_TOL
    slack_rel_tol: float = 1e-9
    trials_run: int = 0
    violations: list[Violation] = field(default_factory=list)
    cross_failures: list[CrossCheckFailure] = field(default_factory=list)
    min_slack: dict[str, MinSlack] = field(default_factory=dict)
    per_trial: list[tuple[int, int, str, float]] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations and not self.cross_failures


def fuzz_estimates(cfg: FuzzConfig,
                   cross_tol: float = DEFAULT_CROSS_TOL,
                   slack_rel_tol: float = 1e-9) -> FuzzReport:
    """Run the campaign: per trial, spectrum + all eight slack checks at
    tolerance slack_rel_tol * (1 + r) + the discriminant-oracle cross-check.
    Violations and oracle mismatches are recorded, not raised."""
    report = FuzzReport(config=cfg, cross_tol=cross_tol,
                        slack_rel_tol=slack_rel_tol)
    t0 = time.perf_counter()
    for trial in range(cfg.trials):
        J = random_instance(cfg, trial_rng(cfg, trial))
        S = band_structure(J)
        est = check_estimates(J, S,
                              slack_rel_tol * (1.0 + S.summary.radius_r))
        min_id = min(INEQUALITY_IDS, key=est.slack)
        report.per_trial.append((trial, J.p, min_id, est.slack(min_id)))
        for ineq in est.violated:
            report.violations.append(
                Violation(trial, ineq, est.slack(ineq), J)
            )
        for ineq in INEQUALITY_IDS:
            s = est.slack(ineq)
            cur = report.min_slack.get(ineq)
            if cur is None or s < cur.value:
                report.min_slack[ineq] = MinSlack(s, trial, J)
        try:
            cc = cross_check(J, cross_tol)
            if not cc.ok:
                report.cross_failures.append(
                    CrossCheckFailure(trial, cc.max_deviation, J)
                )
        except Exception as exc:  # oracle breakdown is a recorded defect
            report.cross_failures.append(
                CrossCheckFailure(trial, math.inf, J, error=repr(exc))
            )
        report.trials_run += 1
    report.elapsed_seconds = time.perf_counter() - t0
    return report


def fuzz_summary_dict(report: FuzzReport, include_runtime: bool = False) -> dict:
    cfg = report.config
    d = {
        "rng": RNG_ALGORITHM,
        "config": {
            "trials": cfg.trials, "p_min": cfg.p_min, "p_max": cfg.p_max,
            "a_lo": cfg.a_lo, "a_hi": cfg.a_hi,
            "b_lo": cfg.b_lo, "b_hi": cfg.b_hi, "seed": cfg.seed,
        },
        "cross_tol": report.cross_tol,
        "slack_rel_tol": report.slack_rel_tol,
        "trials_run": report.trials_run,
        "ok": report.ok,
        "violations": [
            {"trial": v.trial, "inequality": v.inequality, "slack": v.slack,
             "instance": instance_to_dict(v.instance)}
            for v in report.violations
        ],
        "cross_check_failures": [
            {"trial": f.trial, "max_deviation": f.max_deviation,
             "instance": instance_to_dict(f.instance), "error": f.error}
            for f in report.cross_failures
        ],
        "min_slack": {
            ineq: {"value": m.value, "trial": m.trial,
                   "instance": instance_to_dict(m.instance)}
            for ineq, m in sorted(report.min_slack.items())
        },
    }
    if include_runtime:
        d["elapsed_seconds"] = report.elapsed_seconds
        d["trials_per_second"] = (report.trials_run / report.elapsed_seconds
                                  if report.elapsed_seconds > 0 else None)
    return d


def fuzz_summary_json(report: FuzzReport, include_runtime: bool = False) -> str:
    return json.dumps(fuzz_summary_dict(report, include_runtime))


FUZZ_CSV_HEADER = "trial,p,min_slack_id,min_slack_value"


def fuzz_csv(report: FuzzReport) -> str:
    """Per-trial log: which inequality came closest to its bound, and by how much."""
    lines = [FUZZ_CSV_HEADER]
    for trial, p, min_id, min_val in report.per_trial:
        lines.append(f"{trial},{p},{min_id},{min_val!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SharpnessResult:
    inequality: str
    best_instance: PeriodicJacobi
    best_slack: float
    trace: tuple[float, ...]


def _slack_of(J: PeriodicJacobi, inequality: str) -> float:
    return check_estimates(J, band_structure(J)).slack(inequality)


def sharpness_search(inequality: str, p: int, iterations: int, seed: int,
                     start: PeriodicJacobi | None = None) -> SharpnessResult:
    """Coordinate-wise random descent on the slack of one inequality.

    Proposals tweak a single coordinate (multiplicative on a couplings,
    additive on b diagonals) and are accepted only when the slack strictly
    decreases, so the recorded trace is monotone nonincreasing.  The step
    halves after 50 consecutive rejections, with floor 1e-8.
    """
    if inequality not in INEQUALITY_IDS:
        raise ValueError(f"unknown inequality {inequality!r}; "
                         f"choose from {INEQUALITY_IDS}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if p < 2:
        raise ValueError(f"period {p} < 2")
    rng = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence((seed, 0x5ea7c4))
    ))
    if start is None:
        a = np.exp(rng.uniform(math.log(0.5), math.log(2.0), p))
        b = rng.uniform(-1.0, 1.0, p)
        current = new_periodic_jacobi(a, b)
    else:
        if start.p != p:
            raise ValueError(f"start instance has p={start.p}, expected {p}")
        current = start
    current_slack = _slack_of(current, inequality)
    trace = [current_slack]
    step = 0.1
    rejections = 0
    for _ in range(iterations):
        coord = int(rng.integers(0, 2 * p))
        u = rng.uniform(-1.0, 1.0)
        a = list(current.a)
        b = list(current.b)
        if coord < p:
            a[coord] *= math.exp(step * u)
        else:
            b[coord - p] += step * u
        proposal = new_periodic_jacobi(a, b)
        slack = _slack_of(proposal, inequality)
        if slack < current_slack:
            current = proposal
            current_slack = slack
            rejections = 0
        else:
            rejections += 1
            if rejections >= 50:
                step = max(0.5 * step, 1e-8)
                rejections = 0
        trace.append(current_slack)
    return SharpnessResult(inequality, current, current_slack, tuple(trace))


SHARPNESS_CSV_HEADER = "iteration,best_slack"


def sharpness_trace_csv(result: SharpnessResult) -> str:
    lines = [SHARPNESS_CSV_HEADER]
    for i, s in enumerate(result.trace):
        lines.append(f"{i},{s!r}")
    return "\n".join(lines) + "\n"
