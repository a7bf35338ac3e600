"""Trajectory simulation between two base stations with Monte Carlo
aggregation and hysteresis/threshold sweeps.

The mobile walks the straight line from base station 0 toward base station 1
at a fixed step; per sample both RSS traces are generated, smoothed, and fed
through the gated network decision. Each handoff swaps the serving and
target roles and the walk continues, so ping-pong sequences are possible.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import _kernels
from .channel import (MIN_DISTANCE_M, PropagationParams, RngStream,
                      trace_components)
from .decision import (DecisionConfig, GateMode, HandoffDecision, Provenance,
                       RssLevel, TiLevel, encode, quantize_ti)
from .estimator import EstimatorConfig, estimate_arrays
from .neuralnet import NetworkWeights, classify


class TrafficGroup(Enum):
    """Traffic-intensity pairings that share a decision pattern."""

    GROUP1 = 1  # L/L, M/M, H/H, L/M (serving/target)
    GROUP2 = 2  # H/L, H/M, M/L
    GROUP3 = 3  # L/H, M/H: handoff never fires


_GROUPS = {
    (TiLevel.LOW, TiLevel.LOW): TrafficGroup.GROUP1,
    (TiLevel.MEDIUM, TiLevel.MEDIUM): TrafficGroup.GROUP1,
    (TiLevel.HIGH, TiLevel.HIGH): TrafficGroup.GROUP1,
    (TiLevel.LOW, TiLevel.MEDIUM): TrafficGroup.GROUP1,
    (TiLevel.HIGH, TiLevel.LOW): TrafficGroup.GROUP2,
    (TiLevel.HIGH, TiLevel.MEDIUM): TrafficGroup.GROUP2,
    (TiLevel.MEDIUM, TiLevel.LOW): TrafficGroup.GROUP2,
    (TiLevel.LOW, TiLevel.HIGH): TrafficGroup.GROUP3,
    (TiLevel.MEDIUM, TiLevel.HIGH): TrafficGroup.GROUP3,
}


def group_of(ti_s_level: TiLevel, ti_t_level: TiLevel) -> TrafficGroup:
    return _GROUPS[(ti_s_level, ti_t_level)]


@dataclass(frozen=True)
class ScenarioConfig:
    cell_radius_m: float = 500.0
    bs_separation_m: float | None = None  # defaults to 2 * cell_radius_m
    sample_step_m: float = 1.0
    ti_serving: float = 0.5
    ti_target: float = 0.5
    n_runs: int = 100
    master_seed: int = 42
    use_estimates: bool = True
    propagation: PropagationParams = field(default_factory=PropagationParams)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    decision: DecisionConfig = field(default_factory=DecisionConfig)

    def __post_init__(self):
        if self.cell_radius_m <= 0:
            raise ValueError("cell_radius_m must be > 0")
        if self.bs_separation_m is None:
            object.__setattr__(self, "bs_separation_m", 2.0 * self.cell_radius_m)
        if self.bs_separation_m <= 2 * MIN_DISTANCE_M:
            raise ValueError("bs_separation_m leaves no room for a trajectory")
        if self.sample_step_m <= 0:
            raise ValueError("sample_step_m must be > 0")
        if self.ti_serving < 0 or self.ti_target < 0:
            raise ValueError("traffic intensities must be >= 0")
        if int(self.n_runs) != self.n_runs or self.n_runs < 1:
            raise ValueError("n_runs must be a positive integer")


@dataclass(frozen=True)
class RunResult:
    """Per-trajectory outcome. decisions/provenance/serving are int8 arrays
    aligned with distances; serving[i] is the serving BS index when the
    decision at i was taken."""

    distances: np.ndarray
    decisions: np.ndarray
    provenance: np.ndarray
    serving: np.ndarray
    handoff_count: int
    first_handoff_distance_m: float | None
    fluctuation_count: int
    est_serving: np.ndarray | None = None
    est_target: np.ndarray | None = None
    rss_serving: np.ndarray | None = None
    rss_target: np.ndarray | None = None

    @property
    def decision_trace(self):
        """(distance_m, HandoffDecision, serving_bs_id) tuples."""
        return [
            (float(d),
             HandoffDecision.HANDOFF if dec else HandoffDecision.NO_HANDOFF,
             int(bs))
            for d, dec, bs in zip(self.distances, self.decisions, self.serving)
        ]


class MonteCarloResult(NamedTuple):
    avg_handoff_count: float
    avg_first_handoff_distance_m: float | None
    results: list


@dataclass(frozen=True)
class SweepRow:
    hysteresis_db: float
    threshold_dbm: float
    ti_serving: float
    ti_target: float
    avg_handoff_count: float
    avg_first_handoff_distance_m: float | None
    runs: int


@dataclass(frozen=True)
class SweepResult:
    rows: list


def trajectory_positions(scenario: ScenarioConfig) -> np.ndarray:
    """Sample positions from 1 m after BS0 to 1 m before BS1."""
    stop = scenario.bs_separation_m - MIN_DISTANCE_M
    return np.arange(MIN_DISTANCE_M, stop + 1e-9, scenario.sample_step_m)


def link_stream(master_seed: int, run_index: int, link_id: int) -> RngStream:
    """Independent stream per (run, link); link 0 is the BS at the origin."""
    return RngStream(seed=master_seed, stream_id=2 * run_index + link_id)


def _decide_table(net: NetworkWeights, scenario: ScenarioConfig) -> np.ndarray:
    """Network decision for every (serving role, RSS level pair), with the
    run's traffic intensities quantised once. Index order matches
    decision_scan: [role, rss_s_level, rss_t_level]."""
    cfg = scenario.decision
    ti_levels = (quantize_ti(scenario.ti_serving, cfg),
                 quantize_ti(scenario.ti_target, cfg))
    rss_levels = (RssLevel.LOW, RssLevel.HIGH)
    tbl = np.zeros((2, 2, 2), dtype=np.int8)
    for role in (0, 1):
        ti_s, ti_t = (ti_levels if role == 0 else ti_levels[::-1])
        for ls, rss_s in enumerate(rss_levels):
            for lt, rss_t in enumerate(rss_levels):
                x = encode(rss_s, rss_t, ti_s, ti_t)
                tbl[role, ls, lt] = 1 if classify(net, x) > 0 else 0
    return tbl


def run_once(scenario: ScenarioConfig, net: NetworkWeights, run_index: int,
             keep_signals: bool = False) -> RunResult:
    """Simulate one trajectory; deterministic in (scenario, net, run_index)."""
    positions = trajectory_positions(scenario)
    n = positions.size
    moved = np.empty(n)
    moved[0] = 0.0
    moved[1:] = np.diff(positions)
    d0 = np.maximum(positions, MIN_DISTANCE_M)
    d1 = np.maximum(scenario.bs_separation_m - positions, MIN_DISTANCE_M)

    traces = []
    for link_id, dist in ((0, d0), (1, d1)):
        gen = link_stream(scenario.master_seed, run_index, link_id).generator()
        mean, shadow, fading = trace_components(dist, moved,
                                                scenario.propagation, gen)
        traces.append(mean + shadow + fading)
    rss0, rss1 = traces

    if scenario.use_estimates:
        est0 = estimate_arrays(d0, rss0, scenario.estimator)
        est1 = estimate_arrays(d1, rss1, scenario.estimator)
    else:
        est0, est1 = rss0, rss1

    cfg = scenario.decision
    tbl = _decide_table(net, scenario)
    decisions, provenance, serving, count, first_idx = _kernels.decision_scan(
        est0, est1, cfg.threshold_dbm, cfg.hysteresis_db,
        cfg.gate_mode.kernel_code, tbl, 0)

    first = float(positions[first_idx]) if first_idx >= 0 else None
    fluct = int(np.count_nonzero(np.diff(decisions)))
    extra = {}
    if keep_signals:
        is_bs0 = serving == 0
        extra = dict(
            est_serving=np.where(is_bs0, est0, est1),
            est_target=np.where(is_bs0, est1, est0),
            rss_serving=np.where(is_bs0, rss0, rss1),
            rss_target=np.where(is_bs0, rss1, rss0),
        )
    return RunResult(distances=positions, decisions=decisions,
                     provenance=provenance, serving=serving,
                     handoff_count=count, first_handoff_distance_m=first,
                     fluctuation_count=fluct, **extra)


def run_monte_carlo(scenario: ScenarioConfig, net: NetworkWeights,
                    keep_signals: bool = False) -> MonteCarloResult:
    """Aggregate n_runs independent trajectories. The first-handoff average
    covers only runs where a handoff occurred."""
    results = [run_once(scenario, net, i, keep_signals=keep_signals and i == 0)
               for i in range(scenario.n_runs)]
    counts = [r.handoff_count for r in results]
    firsts = [r.first_handoff_distance_m for r in results
              if r.first_handoff_distance_m is not None]
    avg_first = float(np.mean(firsts)) if firsts else None
    return MonteCarloResult(float(np.mean(counts)), avg_first, results)


def sweep(scenario: ScenarioConfig, net: NetworkWeights, hysteresis_list,
          threshold_list) -> SweepResult:
    """Monte Carlo over the hysteresis x threshold grid. Every cell reuses
    the same master seed (common random numbers) so cells are comparable."""
    if len(hysteresis_list) == 0 or len(threshold_list) == 0:
        raise ValueError("sweep lists must not be empty")
    rows = []
    for h in hysteresis_list:
        for thr in threshold_list:
            cell = replace(scenario, decision=replace(
                scenario.decision, hysteresis_db=float(h),
                threshold_dbm=float(thr)))
            mc = run_monte_carlo(cell, net)
            rows.append(SweepRow(
                hysteresis_db=float(h), threshold_dbm=float(thr),
                ti_serving=scenario.ti_serving, ti_target=scenario.ti_target,
                avg_handoff_count=mc.avg_handoff_count,
                avg_first_handoff_distance_m=mc.avg_first_handoff_distance_m,
                runs=scenario.n_runs))
    return SweepResult(rows=rows)


def write_run_trace_csv(path, result: RunResult):
    """Decision trace of one run; needs a result with kept signals."""
    if result.est_serving is None:
        raise ValueError("run was simulated without keep_signals")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["distance_m", "rss_s_est", "rss_t_est", "decision",
                         "serving_bs"])
        for i in range(result.distances.size):
            writer.writerow([
                repr(float(result.distances[i])),
                repr(float(result.est_serving[i])),
                repr(float(result.est_target[i])),
                "HO" if result.decisions[i] else "NOHO",
                int(result.serving[i]),
            ])


def write_summary_csv(path, results):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "handoff_count", "first_handoff_m",
                         "fluctuations"])
        for i, r in enumerate(results):
            first = "" if r.first_handoff_distance_m is None \
                else repr(float(r.first_handoff_distance_m))
            writer.writerow([i, r.handoff_count, first, r.fluctuation_count])


def write_sweep_csv(path, sweep_result: SweepResult):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["hysteresis_db", "threshold_dbm", "ti_s", "ti_t",
                         "avg_handoffs", "avg_first_ho_m", "runs"])
        for row in sweep_result.rows:
            first = "" if row.avg_first_handoff_distance_m is None \
                else repr(float(row.avg_first_handoff_distance_m))
            writer.writerow([
                repr(row.hysteresis_db), repr(row.threshold_dbm),
                repr(row.ti_serving), repr(row.ti_target),
                repr(row.avg_handoff_count), first, row.runs,
            ])
