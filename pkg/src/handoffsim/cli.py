"""Command-line front end.

Commands: train, verify, decide, simulate, sweep. Exit codes: 0 success,
1 usage or config error, 2 domain error (non-convergence, verification
failure). Flags override config-file values which override defaults; the
HANDOFFSIM_SEED environment variable applies only when neither a flag nor
the file sets a seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import __version__, _kernels
from .channel import write_trace_csv
from .config import AppConfig, ConfigError, default_config, load_config
from .decision import (HandoffDecision, canonical_dataset, decide, encode,
                       level_combinations, quantize_rss, quantize_ti,
                       table_oracle)
from .estimator import write_estimate_csv
from .neuralnet import (TrainingDidNotConverge, forward, load_weights,
                        save_weights, train)
from .simulator import (run_monte_carlo, sweep, write_run_trace_csv,
                        write_summary_csv, write_sweep_csv)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2

SEED_ENV_VAR = "HANDOFFSIM_SEED"

_DECISION_NAMES = {HandoffDecision.HANDOFF: "HO",
                   HandoffDecision.NO_HANDOFF: "NOHO"}


def _resolve_seed(flag_seed, file_has_seed, file_seed):
    """Precedence: flag > file > environment > default."""
    if flag_seed is not None:
        return flag_seed
    if file_has_seed:
        return file_seed
    raw = os.environ.get(SEED_ENV_VAR)
    if raw:
        return int(raw)
    return file_seed


def _effective_config(args) -> AppConfig:
    cfg = load_config(args.config) if args.config else default_config()
    training = cfg.training
    scenario = cfg.scenario
    flag_seed = getattr(args, "seed", None)
    train_seed = _resolve_seed(flag_seed, cfg.explicit_shuffle_seed,
                               training.shuffle_seed)
    master_seed = _resolve_seed(flag_seed, cfg.explicit_master_seed,
                                scenario.master_seed)
    if getattr(args, "max_epochs", None) is not None:
        training = dataclasses.replace(training, max_epochs=args.max_epochs)
    if train_seed != training.shuffle_seed:
        training = dataclasses.replace(training, shuffle_seed=train_seed)
    if master_seed != scenario.master_seed:
        scenario = dataclasses.replace(scenario, master_seed=master_seed)
    return AppConfig(scenario=scenario, training=training,
                     explicit_master_seed=cfg.explicit_master_seed,
                     explicit_shuffle_seed=cfg.explicit_shuffle_seed)


def cmd_train(args) -> int:
    cfg = _effective_config(args)
    if args.dump_config:
        print(cfg.dump_json())
        return EXIT_OK
    try:
        result = train(canonical_dataset(), cfg.training)
    except TrainingDidNotConverge as exc:
        print(f"training did not converge: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    save_weights(result.weights, args.out)
    print(f"converged after {result.epochs_used} epochs, "
          f"max error {result.final_max_error:.6f}")
    print(f"weights written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _effective_config(args)
    if args.dump_config:
        print(cfg.dump_json())
        return EXIT_OK
    net = load_weights(args.weights)
    combos = level_combinations()
    agree = 0
    print(f"{'rss_s':>5} {'rss_t':>5} {'ti_s':>6} {'ti_t':>6} "
          f"{'table':>5} {'net':>5} {'y':>9}")
    for levels in combos:
        expected = table_oracle(*levels)
        y, _ = forward(net, encode(*levels))
        got = HandoffDecision.HANDOFF if y > 0 else HandoffDecision.NO_HANDOFF
        if got is expected:
            agree += 1
            mark = ""
        else:
            mark = "  <- mismatch"
        rs, rt, ts, tt = levels
        print(f"{rs.value:>5} {rt.value:>5} {ts.value:>6} {tt.value:>6} "
              f"{_DECISION_NAMES[expected]:>5} {_DECISION_NAMES[got]:>5} "
              f"{y:>9.4f}{mark}")
    print(f"agreement: {agree}/{len(combos)}")
    return EXIT_OK if agree == len(combos) else EXIT_DOMAIN


def cmd_decide(args) -> int:
    cfg = _effective_config(args)
    if args.dump_config:
        print(cfg.dump_json())
        return EXIT_OK
    net = load_weights(args.weights)
    dcfg = cfg.scenario.decision
    outcome = decide(args.rss_s, args.rss_t, args.ti_s, args.ti_t, net, dcfg)
    levels = (quantize_rss(args.rss_s, dcfg), quantize_rss(args.rss_t, dcfg),
              quantize_ti(args.ti_s, dcfg), quantize_ti(args.ti_t, dcfg))
    record = {
        "decision": outcome.decision.value,
        "provenance": outcome.provenance.value,
        "levels": {"rss_s": levels[0].value, "rss_t": levels[1].value,
                   "ti_s": levels[2].value, "ti_t": levels[3].value},
        "network_output": forward(net, encode(*levels))[0],
    }
    print(json.dumps(record, indent=2))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _effective_config(args)
    if args.dump_config:
        print(cfg.dump_json())
        return EXIT_OK
    net = load_weights(args.weights)
    keep = bool(args.trace or args.rss_trace or args.est_trace)
    mc = run_monte_carlo(cfg.scenario, net, keep_signals=keep)
    if args.out:
        write_summary_csv(args.out, mc.results)
        print(f"per-run summary written to {args.out}")
    run0 = mc.results[0]
    if args.trace:
        write_run_trace_csv(args.trace, run0)
        print(f"decision trace of run 0 written to {args.trace}")
    if args.rss_trace:
        write_trace_csv(args.rss_trace, run0.distances, run0.rss_serving,
                        run0.rss_target)
        print(f"raw RSS trace of run 0 written to {args.rss_trace}")
    if args.est_trace:
        write_estimate_csv(args.est_trace, run0.distances, run0.rss_serving,
                           run0.est_serving)
        print(f"serving-link estimate trace of run 0 written to "
              f"{args.est_trace}")
    avg_first = "none" if mc.avg_first_handoff_distance_m is None \
        else f"{mc.avg_first_handoff_distance_m:.1f} m"
    print(f"runs: {cfg.scenario.n_runs}  avg handoffs: "
          f"{mc.avg_handoff_count:.3f}  avg first handoff: {avg_first}")
    return EXIT_OK


def _parse_float_list(raw, flag):
    try:
        values = [float(v) for v in raw.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag} must be a comma-separated list: {exc}")
    if not values:
        raise ConfigError(f"{flag} must not be empty")
    return values


def cmd_sweep(args) -> int:
    cfg = _effective_config(args)
    if args.dump_config:
        print(cfg.dump_json())
        return EXIT_OK
    net = load_weights(args.weights)
    hysteresis = _parse_float_list(args.hysteresis, "--hysteresis")
    thresholds = _parse_float_list(args.threshold, "--threshold")
    result = sweep(cfg.scenario, net, hysteresis, thresholds)
    write_sweep_csv(args.out, result)
    print(f"{len(result.rows)} sweep rows written to {args.out}")
    return EXIT_OK


def _add_common(p, need_weights=False, need_out=False, out_help="output path"):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--weights", required=need_weights,
                   help="network weights JSON file")
    p.add_argument("--seed", type=int, help="seed override (u64)")
    p.add_argument("--out", required=need_out, help=out_help)
    p.add_argument("--dump-config", action="store_true",
                   help="print the effective merged config and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="handoffsim",
        description="Neural-network handoff decision simulator")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} "
                                f"[{_kernels.active_backend()} kernels]")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the network on the decision table")
    _add_common(p, need_out=True, out_help="output weights JSON path")
    p.add_argument("--max-epochs", type=int, help="epoch cap override")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("verify",
                       help="check the network against the decision table")
    _add_common(p, need_weights=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decide", help="one-shot gated decision")
    _add_common(p, need_weights=True)
    p.add_argument("--rss-s", type=float, required=True,
                   help="estimated serving RSS (dBm)")
    p.add_argument("--rss-t", type=float, required=True,
                   help="estimated target RSS (dBm)")
    p.add_argument("--ti-s", type=float, required=True,
                   help="serving traffic intensity (Erlang/channel)")
    p.add_argument("--ti-t", type=float, required=True,
                   help="target traffic intensity (Erlang/channel)")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("simulate", help="Monte Carlo trajectory simulation")
    _add_common(p, need_weights=True, out_help="per-run summary CSV path")
    p.add_argument("--trace", help="decision trace CSV of run 0")
    p.add_argument("--rss-trace", help="raw RSS CSV of run 0")
    p.add_argument("--est-trace",
                   help="serving-link raw vs estimate CSV of run 0")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="hysteresis x threshold sweep")
    _add_common(p, need_weights=True, need_out=True, out_help="sweep CSV path")
    p.add_argument("--hysteresis", default="0,2,4,6,8,10",
                   help="comma-separated hysteresis margins (dB)")
    p.add_argument("--threshold", default="-80,-85,-90",
                   help="comma-separated thresholds (dBm)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrainingDidNotConverge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
