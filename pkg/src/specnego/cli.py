"""Command-line front end: single runs and the two parameter sweeps.

Exit codes: 0 success, 1 the negotiation itself found no deal,
2 usage or input errors.  Human-readable output goes to stdout;
traces, tables and figures are written only to explicitly named paths.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import (
    InvalidScenario,
    NegotiationOutcome,
    Scenario,
    Success,
    TraceRecord,
    run_negotiation,
)
from .evaluation import sweep_num_pus, sweep_success_rate
from .scenario_io import ScenarioError, parse_scenario, write_csv, write_trace

EXIT_OK = 0
EXIT_NO_DEAL = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specnego",
        description="Simulate one-to-many channel-price negotiation "
        "between a secondary user and primary users.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one negotiation and print the outcome")
    run.add_argument("--scenario", required=True, help="scenario JSON file")
    run.add_argument("--trace", help="write the sniffer trace (JSON Lines) here")

    pus = sub.add_parser(
        "sweep-pus", help="response time for growing prefixes of the PU list"
    )
    pus.add_argument("--scenario", required=True, help="scenario JSON file")
    pus.add_argument("--csv", required=True, help="write the (n_pus, elapsed) table here")
    pus.add_argument("--n-max", type=int, help="largest PU count (default: all PUs)")
    pus.add_argument("--fig", help="also render the sweep as a PNG figure")

    cost = sub.add_parser(
        "sweep-cost", help="total price paid as a function of the success rate"
    )
    cost.add_argument("--csv", required=True, help="write the (rate, cost) table here")
    cost.add_argument("--p-success", type=int, default=100, help="price paid on success")
    cost.add_argument("--p-fail", type=int, default=500, help="price paid on failure")
    cost.add_argument("--runs", type=int, default=10, help="negotiations per batch")
    cost.add_argument("--fig", help="also render the sweep as a PNG figure")

    return parser


def _load_scenario(path: str) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def _print_outcome(outcome: NegotiationOutcome) -> None:
    if isinstance(outcome.status, Success):
        print("status: success")
        print(f"winner: {outcome.status.winner}")
        print(f"unit_price: {outcome.status.unit_price}")
        print(f"amount_paid: {outcome.status.amount_paid}")
    else:
        print("status: failure (no PU can satisfy the demand)")
    print(f"responses: {outcome.responses}")
    print(f"elapsed: {outcome.elapsed:.3f}")
    print(f"messages: {outcome.message_count}")


def _write_trace_file(records: list[TraceRecord], path: str) -> None:
    with open(path, "wb") as sink:
        write_trace(records, sink)


def _cmd_run(args: argparse.Namespace) -> int:
    outcome, trace = run_negotiation(_load_scenario(args.scenario))
    _print_outcome(outcome)
    if args.trace:
        _write_trace_file(trace, args.trace)
    return EXIT_OK if isinstance(outcome.status, Success) else EXIT_NO_DEAL


def _cmd_sweep_pus(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args.scenario)
    n_max = args.n_max if args.n_max is not None else len(scenario.pus)
    rows = sweep_num_pus(scenario, n_max)
    Path(args.csv).write_text(write_csv(["n_pus", "elapsed"], rows), encoding="utf-8")
    if args.fig:
        from .figures import render_response_time

        render_response_time(rows, args.fig)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return EXIT_OK


def _cmd_sweep_cost(args: argparse.Namespace) -> int:
    rows = sweep_success_rate(args.p_success, args.p_fail, args.runs)
    table = [(row.success_rate, row.total_cost) for row in rows]
    Path(args.csv).write_text(write_csv(["rate", "cost"], table), encoding="utf-8")
    if args.fig:
        from .figures import render_total_cost

        render_total_cost(rows, args.fig)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "sweep-pus": _cmd_sweep_pus,
    "sweep-cost": _cmd_sweep_cost,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ScenarioError, InvalidScenario, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
