"""JSON scenario/config file handling for the CLI.

A config file is one JSON object with optional sections ``propagation``,
``estimator``, ``decision``, ``scenario`` and ``training``; every field is
optional and falls back to the module defaults. Unknown sections or keys
are rejected so typos surface immediately.
"""

from __future__ import annotations

import dataclasses
import json

from .channel import PropagationParams
from .decision import DecisionConfig
from .estimator import EstimatorConfig
from .neuralnet import TrainConfig
from .simulator import ScenarioConfig


class ConfigError(ValueError):
    pass


_SCENARIO_FIELDS = ("cell_radius_m", "bs_separation_m", "sample_step_m",
                    "ti_serving", "ti_target", "n_runs", "master_seed",
                    "use_estimates")

_SECTIONS = {
    "propagation": PropagationParams,
    "estimator": EstimatorConfig,
    "decision": DecisionConfig,
    "training": TrainConfig,
}


def _build_section(name, cls, data):
    allowed = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key {name}.{sorted(unknown)[0]} (allowed: "
            f"{sorted(allowed)})")
    try:
        return cls(**data)
    except ValueError as exc:
        raise ConfigError(f"invalid {name} config: {exc}") from exc


@dataclasses.dataclass(frozen=True)
class AppConfig:
    scenario: ScenarioConfig
    training: TrainConfig
    explicit_master_seed: bool = False
    explicit_shuffle_seed: bool = False

    def to_dict(self) -> dict:
        sc = self.scenario
        return {
            "propagation": dataclasses.asdict(sc.propagation),
            "estimator": dataclasses.asdict(sc.estimator),
            "decision": {
                "threshold_dbm": sc.decision.threshold_dbm,
                "hysteresis_db": sc.decision.hysteresis_db,
                "ti_low_bound": sc.decision.ti_low_bound,
                "ti_high_bound": sc.decision.ti_high_bound,
                "gate_mode": sc.decision.gate_mode.value,
            },
            "scenario": {name: getattr(sc, name) for name in _SCENARIO_FIELDS},
            "training": dataclasses.asdict(self.training),
        }

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def from_dict(doc: dict) -> AppConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - (set(_SECTIONS) | {"scenario"})
    if unknown:
        raise ConfigError(f"unknown config section {sorted(unknown)[0]!r}")

    parts = {}
    for name, cls in _SECTIONS.items():
        section = doc.get(name, {})
        if not isinstance(section, dict):
            raise ConfigError(f"section {name!r} must be a JSON object")
        parts[name] = _build_section(name, cls, section)

    scen = doc.get("scenario", {})
    if not isinstance(scen, dict):
        raise ConfigError("section 'scenario' must be a JSON object")
    unknown = set(scen) - set(_SCENARIO_FIELDS)
    if unknown:
        raise ConfigError(
            f"unknown key scenario.{sorted(unknown)[0]} (allowed: "
            f"{sorted(_SCENARIO_FIELDS)})")
    try:
        scenario = ScenarioConfig(propagation=parts["propagation"],
                                  estimator=parts["estimator"],
                                  decision=parts["decision"], **scen)
    except ValueError as exc:
        raise ConfigError(f"invalid scenario config: {exc}") from exc

    return AppConfig(scenario=scenario, training=parts["training"],
                     explicit_master_seed="master_seed" in scen,
                     explicit_shuffle_seed="shuffle_seed"
                     in doc.get("training", {}))


def load_config(path) -> AppConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return from_dict(doc)


def default_config() -> AppConfig:
    return from_dict({})
