import json

import pytest

from handoffsim.config import (AppConfig, ConfigError, default_config,
                               from_dict, load_config)
from handoffsim.decision import GateMode


class TestDefaults:
    def test_default_sections(self):
        cfg = default_config()
        assert cfg.scenario.cell_radius_m == 500.0
        assert cfg.scenario.bs_separation_m == 1000.0
        assert cfg.scenario.propagation.gamma == 3.0
        assert cfg.scenario.decision.threshold_dbm == -85.0
        assert cfg.scenario.decision.hysteresis_db == 5.0
        assert cfg.scenario.estimator.window_len == 50
        assert cfg.training.learning_rate == 0.05
        assert not cfg.explicit_master_seed
        assert not cfg.explicit_shuffle_seed


class TestFromDict:
    def test_sections_applied(self):
        cfg = from_dict({
            "propagation": {"gamma": 4.0, "shadowing_enabled": False},
            "decision": {"hysteresis_db": 8.0, "gate_mode": "none"},
            "scenario": {"cell_radius_m": 300.0, "master_seed": 7},
            "training": {"learning_rate": 0.1},
        })
        assert cfg.scenario.propagation.gamma == 4.0
        assert cfg.scenario.decision.hysteresis_db == 8.0
        assert cfg.scenario.decision.gate_mode is GateMode.NONE
        assert cfg.scenario.bs_separation_m == 600.0
        assert cfg.training.learning_rate == 0.1
        assert cfg.explicit_master_seed
        assert not cfg.explicit_shuffle_seed

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match="channel"):
            from_dict({"channel": {}})

    def test_unknown_key_named_in_error(self):
        with pytest.raises(ConfigError, match="propagation.gama"):
            from_dict({"propagation": {"gama": 3.0}})
        with pytest.raises(ConfigError, match="scenario.seed"):
            from_dict({"scenario": {"seed": 3}})

    def test_invalid_value_wrapped(self):
        with pytest.raises(ConfigError, match="gamma"):
            from_dict({"propagation": {"gamma": 9.0}})

    def test_invalid_gate_mode(self):
        with pytest.raises(ConfigError):
            from_dict({"decision": {"gate_mode": "sometimes"}})


class TestRoundTrip:
    def test_dump_parses_back_identically(self):
        cfg = from_dict({"scenario": {"master_seed": 123},
                         "propagation": {"gamma": 2.5}})
        dumped = cfg.dump_json()
        reparsed = from_dict(json.loads(dumped))
        assert reparsed.dump_json() == dumped

    def test_load_config_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"scenario": {"n_runs": 3}}))
        cfg = load_config(path)
        assert cfg.scenario.n_runs == 3

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(path)
