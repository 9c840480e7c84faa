"""Batch command line: run scenarios and emit analysis reports as files.

    bridgemix run   --scenario s.yaml --out dir [--reports a,b] [--seed N]
                    [--epsilon-override E]
    bridgemix races --scenario s.yaml --out dir [--seed N] [--epsilon-override E]

Every report is UTF-8 text: a human-readable table followed by one
machine-readable JSON summary as the last line.  Outputs are byte-reproducible
given (scenario, seed).

Exit codes: 0 success; 1 a race interleaving double-paid (races mode);
2 unusable input (unreadable file, parse error, bad field, empty sweep range);
3 a protocol invariant broke mid-run (partial transcript is dumped).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import yaml

from . import incentives, metrics, simnet

REPORT_NAMES = ("transcript", "races", "anonymity", "liquidity", "storage")

EXIT_OK = 0
EXIT_DOUBLE_PAYOUT = 1
EXIT_BAD_INPUT = 2
EXIT_INVARIANT = 3


@dataclass(frozen=True)
class RunConfig:
    scenario_path: str
    out_dir: str
    reports: tuple = REPORT_NAMES
    seed_override: int | None = None
    epsilon_override: int | None = None


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def load_scenario(config: RunConfig) -> simnet.Scenario:
    """Parse the scenario file and apply overrides; raises ScenarioError or
    OSError with a message naming the problem."""
    path = Path(config.scenario_path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as err:
        mark = getattr(err, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise simnet.ScenarioError("<syntax>", f"unparseable scenario{where}: {err}")
    scenario = simnet.scenario_from_dict(raw, name=path.stem)
    if config.seed_override is not None:
        scenario = dataclasses.replace(scenario, seed=config.seed_override)
    if config.epsilon_override is not None:
        scenario = dataclasses.replace(scenario, epsilon=config.epsilon_override)
        simnet.validate_scenario(scenario, allow_negative_epsilon=True)
    return scenario


def _write_report(out_dir: Path, name: str, lines, summary: dict) -> Path:
    path = out_dir / f"{name}.txt"
    body = "\n".join(lines)
    path.write_text(body + "\n" + json.dumps(summary, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _payout_lines(transcript) -> tuple:
    rows = simnet.payout_table(transcript)
    lines = [f"{'nullifier':>16} {'payouts':>8} {'cancels':>8} {'rejected':>9}"]
    for sn, payouts, cancels, rejected in rows:
        lines.append(f"{sn:>16} {payouts:>8} {cancels:>8} {str(rejected).lower():>9}")
    summary = {
        "nullifiers": len(rows),
        "max_payouts": max((r[1] for r in rows), default=0),
        "double_payouts": sum(1 for r in rows if r[1] > 1),
    }
    return lines, summary


def cmd_run(config: RunConfig) -> int:
    for name in config.reports:
        if name not in REPORT_NAMES:
            _fail(f"unknown report {name!r}; choose from {', '.join(REPORT_NAMES)}")
            return EXIT_BAD_INPUT
    try:
        scenario = load_scenario(config)
    except (OSError, simnet.ScenarioError) as err:
        _fail(str(err))
        return EXIT_BAD_INPUT
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        transcript = simnet.run(scenario, allow_negative_epsilon=True)
    except simnet.SimInvariantError as err:
        # dump what happened up to the failing tick so it can be debugged
        dump = out_dir / "transcript-failure.txt"
        dump.write_text(err.transcript.render(), encoding="utf-8")
        _fail(f"invariant violation: {err} (partial transcript in {dump})")
        return EXIT_INVARIANT
    if "transcript" in config.reports:
        (out_dir / "transcript.txt").write_text(transcript.render(), encoding="utf-8")
    if "races" in config.reports:
        lines, summary = _payout_lines(transcript)
        _write_report(out_dir, "races", lines, summary)
    if "anonymity" in config.reports:
        report = metrics.anonymity_report(transcript)
        _write_report(out_dir, "anonymity", report.render_lines(), report.summary())
    if "liquidity" in config.reports:
        series = incentives.vampire_metrics(transcript)
        _write_report(out_dir, "liquidity", series.render_lines(), series.summary())
    if "storage" in config.reports:
        report = metrics.storage_report(transcript)
        _write_report(out_dir, "storage", report.render_lines(), report.summary())
    return EXIT_OK


def cmd_races(config: RunConfig) -> int:
    try:
        scenario = load_scenario(config)
        if scenario.adversary is None:
            raise simnet.ScenarioError("adversary", "races mode requires an adversary spec")
        t_max = 2 * (scenario.relay_delay + scenario.epsilon)
        if t_max < 0:
            raise simnet.ScenarioError(
                "t_prime_range", f"2*(relay_delay+epsilon) = {t_max} leaves nothing to sweep"
            )
        report = simnet.explore_races(scenario, range(0, t_max + 1))
    except (OSError, simnet.ScenarioError) as err:
        _fail(str(err))
        return EXIT_BAD_INPUT
    except simnet.SimInvariantError as err:
        _fail(f"invariant violation during sweep: {err}")
        return EXIT_INVARIANT
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_report(out_dir, "races", report.render_lines(), report.summary())
    if report.double_payout_rows:
        for row in report.double_payout_rows:
            _fail(
                f"double payout at t'={row.t_prime} order={row.order}"
                f" (payouts={row.payouts})"
            )
        return EXIT_DOUBLE_PAYOUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgemix",
        description="deterministic two-chain bridge/mixer simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "execute a scenario and write the requested reports"),
        ("races", "sweep double-withdrawal interleavings; fail on double payout"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, help="scenario file (YAML)")
        p.add_argument("--out", required=True, help="output directory for reports")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument(
            "--epsilon-override",
            type=int,
            default=None,
            help="override epsilon (negative values allowed: negative-control runs)",
        )
        if name == "run":
            p.add_argument(
                "--reports",
                default=",".join(REPORT_NAMES),
                help=f"comma-separated subset of: {', '.join(REPORT_NAMES)}",
            )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:  # argparse exits on bad flags; surface as a code
        return EXIT_BAD_INPUT if err.code else EXIT_OK
    reports = REPORT_NAMES
    if getattr(args, "reports", None) is not None:
        reports = tuple(name.strip() for name in args.reports.split(",") if name.strip())
    config = RunConfig(
        scenario_path=args.scenario,
        out_dir=args.out,
        reports=reports,
        seed_override=args.seed,
        epsilon_override=args.epsilon_override,
    )
    if args.command == "run":
        return cmd_run(config)
    return cmd_races(config)


if __name__ == "__main__":
    sys.exit(main())
