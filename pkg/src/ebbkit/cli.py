"""Command-line front end: simulate, validate, analyze, serve.

Thin shell over the library; every command loads or writes files and
delegates immediately.  Exit codes: 0 success, 1 invariant or analysis
failure, 2 usage or parse errors (argparse's own convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .core import validate_record
from .forensics import DetectorConfig, build_report
from .service import DEFAULT_HOST, DEFAULT_PORT, serve
from .sim import (
    MOCK_ACCIDENT_VARIANTS,
    builtin_mock_accident,
    load_scenario_file,
    simulate_session,
    with_overrides,
)
from .store import (
    LOG_SUFFIX,
    InvariantError,
    ParseError,
    read_csv,
    write_csv,
)


def truth_sidecar_path(csv_path: str | Path) -> Path:
    """x.ebb.csv -> x.ebb.truth.json."""
    p = Path(csv_path)
    name = p.name
    if name.endswith(LOG_SUFFIX):
        name = name[: -len(".csv")] + ".truth.json"
    else:
        name = name + ".truth.json"
    return p.with_name(name)


def _parse_query(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        t0, t1 = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected T0:T1 with integer seconds, got {text!r}"
        )
    if t0 >= t1:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return t0, t1


def _detector_config(args: argparse.Namespace) -> DetectorConfig:
    cfg = DetectorConfig(
        min_powerloss_run=args.min_powerloss_run,
        flat_eps_emg=args.flat_eps_emg,
        pos_activity_delta=args.pos_activity_delta,
        window=args.window,
        load_torque_min=args.load_torque_min,
    )
    cfg.check()
    return cfg


def _add_detector_args(p: argparse.ArgumentParser) -> None:
    d = DetectorConfig()
    p.add_argument("--min-powerloss-run", type=int,
                   default=d.min_powerloss_run, metavar="N",
                   help="shortest all-zero run reported (records)")
    p.add_argument("--flat-eps-emg", type=float, default=d.flat_eps_emg,
                   metavar="X", help="EMG counts treated as silence")
    p.add_argument("--pos-activity-delta", type=float,
                   default=d.pos_activity_delta, metavar="X",
                   help="position range that counts as movement (deg)")
    p.add_argument("--window", type=int, default=d.window, metavar="N",
                   help="sliding window length (records)")
    p.add_argument("--load-torque-min", type=float,
                   default=d.load_torque_min, metavar="X",
                   help="torque treated as under load (N·m)")


def cmd_simulate(args: argparse.Namespace) -> int:
    out = Path(args.out)
    if not out.name.endswith(LOG_SUFFIX):
        print(f"error: --out must end with {LOG_SUFFIX}", file=sys.stderr)
        return 2
    if args.scenario_file is not None:
        scenario = load_scenario_file(args.scenario_file)
    else:
        scenario = builtin_mock_accident(args.variant)
    scenario = with_overrides(scenario, seed=args.seed, noise=args.noise)
    log, truth = simulate_session(scenario)

    n = write_csv(log, out)
    truth_path = truth_sidecar_path(out)
    truth_path.write_text(
        json.dumps(truth.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {len(log.records)} records ({n} bytes) to {out}")
    print(f"wrote ground truth to {truth_path}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        log = read_csv(args.log)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except InvariantError as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 1

    violations = []
    for r in log.records:
        result = validate_record(r)
        violations.extend(f"t={r.t}: {v.message}" for v in result.violations)
    if violations:
        shown = violations[:20]
        for line in shown:
            print(line, file=sys.stderr)
        if len(violations) > len(shown):
            print(f"... {len(violations) - len(shown)} more", file=sys.stderr)
        print(f"invalid: {len(violations)} violation(s) in "
              f"{len(log.records)} records", file=sys.stderr)
        return 1
    print(f"ok: {len(log.records)} records, "
          f"t = [{log.t_start}, {log.t_end})")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        log = read_csv(args.log)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except InvariantError as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 1

    cfg = _detector_config(args)
    try:
        report = build_report(log, queries=args.query, cfg=cfg)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    for f in report.timeline.findings:
        print(f.summary())
    if not report.timeline.findings:
        print("no findings")

    if args.report_json is not None:
        Path(args.report_json).write_text(
            json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
    if args.report_md is not None:
        Path(args.report_md).write_text(report.to_markdown(), encoding="utf-8")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = _detector_config(args)
    try:
        serve(args.log, host=args.host, port=args.port, cfg=cfg)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except InvariantError as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebbkit",
        description="Flight-recorder toolkit for exoskeleton telemetry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a log from a scenario")
    p_sim.add_argument("--variant", choices=MOCK_ACCIDENT_VARIANTS,
                       default="baseline",
                       help="built-in mock accident variant")
    p_sim.add_argument("--scenario-file", metavar="PATH", default=None,
                       help="scenario JSON (overrides --variant)")
    p_sim.add_argument("--seed", type=int, default=None,
                       help="RNG seed override")
    p_sim.add_argument("--noise", type=int, default=None, metavar="N",
                       help="EMG noise ceiling override (ADC counts)")
    p_sim.add_argument("--out", required=True, metavar="PATH",
                       help=f"output log path (must end with {LOG_SUFFIX})")
    p_sim.set_defaults(func=cmd_simulate)

    p_val = sub.add_parser("validate", help="check a log against invariants")
    p_val.add_argument("log", metavar="LOG")
    p_val.set_defaults(func=cmd_validate)

    p_ana = sub.add_parser("analyze", help="run detectors and report")
    p_ana.add_argument("log", metavar="LOG")
    p_ana.add_argument("--query", metavar="T0:T1", type=_parse_query,
                       action="append", default=[],
                       help="actuation query interval, repeatable")
    p_ana.add_argument("--report-json", metavar="PATH", default=None)
    p_ana.add_argument("--report-md", metavar="PATH", default=None)
    _add_detector_args(p_ana)
    p_ana.set_defaults(func=cmd_analyze)

    p_srv = sub.add_parser("serve", help="serve a log over HTTP")
    p_srv.add_argument("log", metavar="LOG")
    p_srv.add_argument("--host", default=DEFAULT_HOST)
    p_srv.add_argument("--port", type=int, default=DEFAULT_PORT)
    _add_detector_args(p_srv)
    p_srv.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
