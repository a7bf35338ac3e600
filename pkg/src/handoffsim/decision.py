"""Handoff decision policy: level quantisation, the decision truth table,
the threshold/hysteresis gate, and the gated network pipeline.

Signal strength is graded low/high against the threshold; traffic intensity
(Erlang per channel) is graded low/medium/high against the band bounds,
both boundaries counting as medium.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .neuralnet import NetworkWeights, TrainingSample, classify


class RssLevel(Enum):
    LOW = "low"
    HIGH = "high"


class TiLevel(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class HandoffDecision(Enum):
    HANDOFF = "handoff"
    NO_HANDOFF = "no_handoff"


class Provenance(Enum):
    GATE_BLOCKED = "gate_blocked"
    NETWORK_DECIDED = "network_decided"


class GateMode(Enum):
    FULL = "full"
    HYSTERESIS_ONLY = "hysteresis_only"
    NONE = "none"

    @property
    def kernel_code(self) -> int:
        return {GateMode.FULL: _kernels.GATE_FULL,
                GateMode.HYSTERESIS_ONLY: _kernels.GATE_HYSTERESIS_ONLY,
                GateMode.NONE: _kernels.GATE_NONE}[self]


@dataclass(frozen=True)
class DecisionConfig:
    threshold_dbm: float = -85.0
    hysteresis_db: float = 5.0
    ti_low_bound: float = 0.66
    ti_high_bound: float = 0.76
    gate_mode: GateMode = GateMode.FULL

    def __post_init__(self):
        if not math.isfinite(self.threshold_dbm):
            raise ValueError("threshold_dbm must be finite")
        if self.hysteresis_db < 0:
            raise ValueError("hysteresis_db must be >= 0")
        if not self.ti_low_bound < self.ti_high_bound:
            raise ValueError("ti_low_bound must be < ti_high_bound")
        if isinstance(self.gate_mode, str):
            object.__setattr__(self, "gate_mode", GateMode(self.gate_mode))


@dataclass(frozen=True)
class DecisionOutcome:
    decision: HandoffDecision
    provenance: Provenance

    def __post_init__(self):
        if (self.provenance is Provenance.GATE_BLOCKED
                and self.decision is not HandoffDecision.NO_HANDOFF):
            raise ValueError("a blocked gate always means no handoff")


_HO = HandoffDecision.HANDOFF
_NO = HandoffDecision.NO_HANDOFF

# The decision table. One 3x3 block per (serving RSS, target RSS) pair;
# within a block, rows are the target TI level and columns the serving TI
# level, each ordered low, medium, high.
_POLICY = {
    (RssLevel.LOW, RssLevel.LOW): (
        (_NO, _HO, _HO),
        (_NO, _NO, _HO),
        (_NO, _NO, _NO),
    ),
    (RssLevel.HIGH, RssLevel.HIGH): (
        (_NO, _HO, _HO),
        (_NO, _NO, _HO),
        (_NO, _NO, _NO),
    ),
    (RssLevel.LOW, RssLevel.HIGH): (
        (_HO, _HO, _HO),
        (_HO, _HO, _HO),
        (_NO, _NO, _HO),
    ),
    (RssLevel.HIGH, RssLevel.LOW): (
        (_NO, _NO, _HO),
        (_NO, _NO, _HO),
        (_NO, _NO, _NO),
    ),
}

_RSS_CODE = {RssLevel.LOW: -1.0, RssLevel.HIGH: 1.0}
_TI_CODE = {TiLevel.LOW: -1.0, TiLevel.MEDIUM: 0.0, TiLevel.HIGH: 1.0}
_TI_INDEX = {TiLevel.LOW: 0, TiLevel.MEDIUM: 1, TiLevel.HIGH: 2}


def quantize_rss(rss_dbm: float, config: DecisionConfig) -> RssLevel:
    if not math.isfinite(rss_dbm):
        raise ValueError("rss must be finite")
    return RssLevel.LOW if rss_dbm <= config.threshold_dbm else RssLevel.HIGH


def quantize_ti(ti: float, config: DecisionConfig) -> TiLevel:
    """Traffic-intensity banding; both band bounds quantise to medium."""
    if not math.isfinite(ti) or ti < 0:
        raise ValueError("traffic intensity must be finite and >= 0")
    if ti < config.ti_low_bound:
        return TiLevel.LOW
    if ti > config.ti_high_bound:
        return TiLevel.HIGH
    return TiLevel.MEDIUM


def encode(rss_s: RssLevel, rss_t: RssLevel, ti_s: TiLevel,
           ti_t: TiLevel) -> np.ndarray:
    """Level codes as the network input vector [x1..x4, bias]."""
    return np.array([_RSS_CODE[rss_s], _RSS_CODE[rss_t],
                     _TI_CODE[ti_s], _TI_CODE[ti_t], 1.0])


def table_oracle(rss_s: RssLevel, rss_t: RssLevel, ti_s: TiLevel,
                 ti_t: TiLevel) -> HandoffDecision:
    """Direct truth-table lookup, independent of the trained network."""
    block = _POLICY[(rss_s, rss_t)]
    return block[_TI_INDEX[ti_t]][_TI_INDEX[ti_s]]


def level_combinations():
    """All 36 level tuples in canonical order."""
    return [(rs, rt, ts, tt)
            for rs in RssLevel for rt in RssLevel
            for ts in TiLevel for tt in TiLevel]


def canonical_dataset() -> list[TrainingSample]:
    """One training sample per level combination, labelled by the table."""
    samples = []
    for levels in level_combinations():
        target = 1.0 if table_oracle(*levels) is _HO else -1.0
        samples.append(TrainingSample(x=encode(*levels), target=target))
    return samples


def gate(rss_s_est: float, rss_t_est: float, config: DecisionConfig) -> bool:
    """Whether the decision pipeline proceeds past the signal-strength gate."""
    if not (math.isfinite(rss_s_est) and math.isfinite(rss_t_est)):
        raise ValueError("gate inputs must be finite")
    hysteresis_ok = rss_t_est - rss_s_est >= config.hysteresis_db
    if config.gate_mode is GateMode.FULL:
        return rss_s_est < config.threshold_dbm and hysteresis_ok
    if config.gate_mode is GateMode.HYSTERESIS_ONLY:
        return hysteresis_ok
    return True


def decide(rss_s_est: float, rss_t_est: float, ti_s: float, ti_t: float,
           net: NetworkWeights, config: DecisionConfig) -> DecisionOutcome:
    """Gated network decision from estimated RSS and traffic intensities."""
    if not gate(rss_s_est, rss_t_est, config):
        return DecisionOutcome(HandoffDecision.NO_HANDOFF,
                               Provenance.GATE_BLOCKED)
    x = encode(quantize_rss(rss_s_est, config), quantize_rss(rss_t_est, config),
               quantize_ti(ti_s, config), quantize_ti(ti_t, config))
    label = _HO if classify(net, x) > 0 else _NO
    return DecisionOutcome(label, Provenance.NETWORK_DECIDED)
