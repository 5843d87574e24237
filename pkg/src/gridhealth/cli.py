"""Command-line surface: validate scenarios, run episodes, compare policies,
sweep caps or V, and serve the HTTP API.

Exit codes: 0 success, 1 validation error, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import BUILTIN_SCENARIOS
from .grid_model import Scenario, ScenarioError
from .policy_engine import PolicyConfig
from .scenario_io import load_scenario, policy_config_to_dict
from .sim_harness import (
    compare_policies,
    default_policy_table,
    run_episode,
    sweep,
    trajectory_to_jsonl,
)

METRIC_COLUMNS = (
    "avg_hospitalizations", "avg_co2", "avg_hap",
    "cap_violation_co2", "cap_violation_hap",
    "total_shortfall", "terminal_q_co2", "terminal_q_hap",
)


def resolve_scenario(ref: str) -> Scenario:
    if ref in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[ref]()
    path = Path(ref)
    if not path.exists():
        from .grid_model import Violation

        raise ScenarioError([Violation(
            "UnknownScenario",
            f"{ref!r} is neither a built-in ({', '.join(sorted(BUILTIN_SCENARIOS))}) nor a file",
        )])
    return load_scenario(path)


def _policy_config(args) -> PolicyConfig:
    return PolicyConfig(kind=args.policy, V=args.V)


def _rows_to_table(rows: list[dict], columns: list[str]) -> str:
    widths = [max(len(c), max((len(_fmt(r[c])) for r in rows), default=0)) for c in columns]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(_fmt(r[c]).ljust(w) for c, w in zip(columns, widths)))
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _emit(rows: list[dict], columns: list[str], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns)
        writer.writeheader()
        for r in rows:
            writer.writerow({c: r[c] for c in columns})
        text = buf.getvalue()
    else:
        text = _rows_to_table(rows, columns)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _metrics_row(label_key: str, label: str, metrics) -> dict:
    row = {label_key: label, "horizon": metrics.horizon}
    for c in METRIC_COLUMNS:
        row[c] = getattr(metrics, c)
    return row


def _write_trajectory(metrics, path: str) -> None:
    Path(path).write_bytes(trajectory_to_jsonl(metrics.trajectory or ()))


def cmd_validate(args) -> int:
    resolve_scenario(args.scenario)
    print(f"scenario {args.scenario!r} is valid")
    return 0


def cmd_run(args) -> int:
    scenario = resolve_scenario(args.scenario)
    config = _policy_config(args)
    metrics = run_episode(scenario, config, args.T, seed=args.seed,
                          include_trajectory=args.trajectory_out is not None)
    if args.trajectory_out:
        _write_trajectory(metrics, args.trajectory_out)
    rows = [_metrics_row("policy", config.kind, metrics)]
    _emit(rows, ["policy", "horizon", *METRIC_COLUMNS], args.format, args.out)
    return 0


def cmd_compare(args) -> int:
    scenario = resolve_scenario(args.scenario)
    names = [p.strip() for p in args.policies.split(",")] if args.policies else None
    if names:
        try:
            configs = {name: PolicyConfig(kind=name, V=args.V) for name in names}
        except ValueError as exc:
            from .grid_model import Violation

            raise ScenarioError([Violation("BadPolicy", str(exc))]) from exc
    else:
        configs = default_policy_table(V=args.V)
    table = compare_policies(scenario, configs, args.T, seed=args.seed)
    rows = [_metrics_row("policy", name, m) for name, m in table.items()]
    _emit(rows, ["policy", "horizon", *METRIC_COLUMNS], args.format, args.out)
    return 0


def cmd_sweep(args) -> int:
    scenario = resolve_scenario(args.scenario)
    values = [float(v) for v in args.values.split(",")]
    config = _policy_config(args)
    results = sweep(scenario, args.axis, values, args.T, seed=args.seed, policy_config=config)
    rows = []
    for r in results:
        row = _metrics_row("axis", r["axis"], r["metrics"])
        row["value"] = r["value"]
        rows.append(row)
    _emit(rows, ["axis", "value", "horizon", *METRIC_COLUMNS], args.format, args.out)
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(port=args.port, ui_dir=args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridhealth",
        description="Health-aware fuel-mix dispatch: simulate, compare, and sweep policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, policy=True):
        p.add_argument("--scenario", required=True,
                       help="path to a scenario JSON file or a built-in name")
        p.add_argument("--T", type=int, default=1000, help="number of slots")
        p.add_argument("--seed", type=int, default=None, help="run seed (default: scenario seed)")
        if policy:
            p.add_argument("--policy", default="lyapunov",
                           choices=["lyapunov", "min_emission", "min_health", "proportional"])
            p.add_argument("--V", type=float, default=10.0, help="penalty weight")
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")
        p.add_argument("--format", default="table", choices=["table", "csv", "json"])

    p_run = sub.add_parser("run", help="run one policy and report metrics")
    common(p_run)
    p_run.add_argument("--trajectory-out", default=None,
                       help="write the per-slot trajectory as JSON lines to this path")
    p_run.set_defaults(fn=cmd_run)

    p_cmp = sub.add_parser("compare", help="run several policies on one randomness stream")
    common(p_cmp, policy=False)
    p_cmp.add_argument("--V", type=float, default=10.0)
    p_cmp.add_argument("--policies", default=None,
                       help="comma-separated policy kinds (default: min_emission,min_health,lyapunov)")
    p_cmp.set_defaults(fn=cmd_compare)

    p_swp = sub.add_parser("sweep", help="trace a frontier over caps or V")
    common(p_swp)
    p_swp.add_argument("--axis", required=True, choices=["cap_co2", "cap_hap", "V"])
    p_swp.add_argument("--values", required=True, help="comma-separated axis values")
    p_swp.set_defaults(fn=cmd_sweep)

    p_val = sub.add_parser("validate", help="check a scenario file, listing every violation")
    p_val.add_argument("--scenario", required=True)
    p_val.set_defaults(fn=cmd_validate)

    p_srv = sub.add_parser("serve", help="start the HTTP API")
    p_srv.add_argument("--port", type=int, default=8347)
    p_srv.add_argument("--ui", default=None,
                       help="also serve this directory's static files (the dashboard build)")
    p_srv.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        for violation in exc.violations:
            print(str(violation), file=sys.stderr)
        return 1
    except BrokenPipeError:
        raise
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
