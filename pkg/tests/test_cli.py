import json

import numpy as np
import pytest

from handoffsim.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main
from handoffsim.neuralnet import save_weights


@pytest.fixture(scope="module")
def weights_file(tmp_path_factory, trained_net):
    path = tmp_path_factory.mktemp("weights") / "net.json"
    save_weights(trained_net, path)
    return str(path)


@pytest.fixture
def det_config(tmp_path):
    path = tmp_path / "det.json"
    path.write_text(json.dumps({
        "propagation": {"rayleigh_enabled": False, "shadowing_enabled": False},
        "scenario": {"n_runs": 3},
    }))
    return str(path)


class TestTrain:
    def test_train_then_verify(self, tmp_path, capsys):
        out = str(tmp_path / "w.json")
        assert main(["train", "--out", out, "--seed", "1"]) == EXIT_OK
        stdout = capsys.readouterr().out
        assert "converged after" in stdout
        assert main(["verify", "--weights", out]) == EXIT_OK
        stdout = capsys.readouterr().out
        assert "agreement: 36/36" in stdout

    def test_same_seed_byte_identical(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["train", "--out", str(a), "--seed", "9"]) == EXIT_OK
        assert main(["train", "--out", str(b), "--seed", "9"]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_zero_epochs_fails_with_domain_error(self, tmp_path, capsys):
        out = str(tmp_path / "w.json")
        code = main(["train", "--out", out, "--max-epochs", "0"])
        assert code == EXIT_DOMAIN
        assert "did not converge" in capsys.readouterr().err


class TestVerify:
    def test_zeroed_weights_fail(self, tmp_path, capsys):
        path = tmp_path / "zero.json"
        path.write_text(json.dumps({"hidden": [[0.0] * 5] * 20,
                                    "output": [0.0] * 20,
                                    "activation": "tanh"}))
        assert main(["verify", "--weights", str(path)]) == EXIT_DOMAIN
        # zero output classifies everything as no handoff
        assert "agreement: 21/36" in capsys.readouterr().out

    def test_wrong_dimensions_fail(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"hidden": [[0.0] * 4] * 20,
                                    "output": [0.0] * 20,
                                    "activation": "tanh"}))
        assert main(["verify", "--weights", str(path)]) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        assert main(["verify", "--weights",
                     str(tmp_path / "nope.json")]) == EXIT_USAGE


class TestDecide:
    def run_decide(self, weights_file, capsys, rss_s, rss_t, ti_s, ti_t):
        code = main(["decide", "--weights", weights_file,
                     "--rss-s", str(rss_s), "--rss-t", str(rss_t),
                     "--ti-s", str(ti_s), "--ti-t", str(ti_t)])
        assert code == EXIT_OK
        return json.loads(capsys.readouterr().out)

    def test_overloaded_target_no_handoff(self, weights_file, capsys):
        rec = self.run_decide(weights_file, capsys, -90, -84, 0.5, 0.9)
        assert rec["decision"] == "no_handoff"
        assert rec["provenance"] == "network_decided"
        assert rec["levels"] == {"rss_s": "low", "rss_t": "high",
                                 "ti_s": "low", "ti_t": "high"}

    def test_gate_blocked(self, weights_file, capsys):
        rec = self.run_decide(weights_file, capsys, -80, -90, 0.5, 0.5)
        assert rec["decision"] == "no_handoff"
        assert rec["provenance"] == "gate_blocked"

    def test_handoff(self, weights_file, capsys):
        rec = self.run_decide(weights_file, capsys, -90, -84, 0.5, 0.5)
        assert rec["decision"] == "handoff"
        assert rec["network_output"] > 0


class TestSimulate:
    def test_deterministic_summary(self, weights_file, det_config, tmp_path,
                                   capsys):
        out = tmp_path / "summary.csv"
        code = main(["simulate", "--weights", weights_file,
                     "--config", det_config, "--out", str(out)])
        assert code == EXIT_OK
        assert "avg handoffs: 1.000" in capsys.readouterr().out
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 4
        assert lines[1].split(",")[:3] == ["0", "1", "595.0"]

    def test_trace_outputs(self, weights_file, det_config, tmp_path):
        trace = tmp_path / "trace.csv"
        rss = tmp_path / "rss.csv"
        est = tmp_path / "est.csv"
        code = main(["simulate", "--weights", weights_file,
                     "--config", det_config, "--trace", str(trace),
                     "--rss-trace", str(rss), "--est-trace", str(est)])
        assert code == EXIT_OK
        assert trace.read_text().startswith(
            "distance_m,rss_s_est,rss_t_est,decision,serving_bs")
        assert rss.read_text().startswith(
            "distance_m,rss_serving_dbm,rss_target_dbm")
        assert est.read_text().startswith("distance_m,rss_raw_dbm,rss_est_dbm")

    def test_missing_weights(self, det_config, tmp_path):
        code = main(["simulate", "--weights", str(tmp_path / "no.json"),
                     "--config", det_config])
        assert code == EXIT_USAGE


class TestSweep:
    def test_grid_rows(self, weights_file, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"scenario": {"n_runs": 2}}))
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--weights", weights_file, "--config", str(cfg),
                     "--hysteresis", "0,2,4,6,8,10",
                     "--threshold=-80,-85,-90", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 19  # header + 18 cells

    def test_repeat_identical_bytes(self, weights_file, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"scenario": {"n_runs": 3,
                                                "master_seed": 5}}))
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for out in (a, b):
            assert main(["sweep", "--weights", weights_file,
                         "--config", str(cfg), "--hysteresis", "0,5",
                         "--threshold=-85", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_group3_all_zero(self, weights_file, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"scenario": {"n_runs": 5, "ti_serving": 0.5,
                                                "ti_target": 0.9}}))
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--weights", weights_file, "--config", str(cfg),
                     "--hysteresis", "0,5", "--threshold=-85,-90",
                     "--out", str(out)]) == EXIT_OK
        for line in out.read_text().strip().splitlines()[1:]:
            assert line.split(",")[4] == "0.0"

    def test_empty_list_rejected(self, weights_file, tmp_path):
        assert main(["sweep", "--weights", weights_file, "--hysteresis", ",",
                     "--threshold=-85",
                     "--out", str(tmp_path / "s.csv")]) == EXIT_USAGE


class TestConfigHandling:
    def test_dump_config_round_trip(self, tmp_path, capsys):
        assert main(["train", "--out", str(tmp_path / "w.json"),
                     "--dump-config"]) == EXIT_OK
        first = capsys.readouterr().out
        cfg_path = tmp_path / "dumped.json"
        cfg_path.write_text(first)
        assert main(["train", "--out", str(tmp_path / "w.json"),
                     "--config", str(cfg_path), "--dump-config"]) == EXIT_OK
        assert capsys.readouterr().out == first

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"scenario": {"radius": 100}}))
        code = main(["train", "--out", str(tmp_path / "w.json"),
                     "--config", str(cfg)])
        assert code == EXIT_USAGE
        assert "scenario.radius" in capsys.readouterr().err

    def test_seed_precedence_flag_over_file(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"training": {"shuffle_seed": 1}}))
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["train", "--out", str(a), "--config", str(cfg),
                     "--seed", "2"]) == EXIT_OK
        assert main(["train", "--out", str(b), "--seed", "2"]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_env_seed_only_without_flag_or_file(self, tmp_path, monkeypatch,
                                                capsys):
        monkeypatch.setenv("HANDOFFSIM_SEED", "3")
        env_out = tmp_path / "env.json"
        assert main(["train", "--out", str(env_out)]) == EXIT_OK
        explicit = tmp_path / "explicit.json"
        assert main(["train", "--out", str(explicit), "--seed", "3"]) == EXIT_OK
        assert env_out.read_bytes() == explicit.read_bytes()
        # file seed wins over the environment
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"training": {"shuffle_seed": 4}}))
        file_out = tmp_path / "file.json"
        assert main(["train", "--out", str(file_out),
                     "--config", str(cfg)]) == EXIT_OK
        seeded4 = tmp_path / "seeded4.json"
        assert main(["train", "--out", str(seeded4), "--seed", "4"]) == EXIT_OK
        assert file_out.read_bytes() == seeded4.read_bytes()

    def test_usage_error_exit_code(self):
        assert main(["simulate"]) == EXIT_USAGE  # missing --weights
        assert main(["unknown-command"]) == EXIT_USAGE
