"""Command-line entry point.

Subcommands: run, mutate (--dry-run ledger only), sites (debug dump), triage
(cluster a violation ledger), replay (re-execute one violation's two sides).
Exit codes: 0 done, 2 done with violations, 1 harness error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import defaultdict
from pathlib import Path

from .adapters import AnalyzerConfigError, load_profile, run_analyzer_on_dir
from .campaign import load_campaign_config, run_campaign
from .metamorph import analysis_equivalent
from .model import parse_unit, unit_sites
from .mutagen import ConfigError
from .registry import ElementKind
from .textfmt import FormatError

EXIT_OK = 0
EXIT_HARNESS_ERROR = 1
EXIT_VIOLATIONS = 2


def _cmd_run(args) -> int:
    cfg = load_campaign_config(args.config)
    if args.workdir:
        cfg.work_dir = args.workdir
    if args.resume:
        cfg.resume = True
    result = run_campaign(cfg, dry_run=False)
    print(result.summary.table())
    print(f"ledgers under {cfg.work_dir}")
    return EXIT_VIOLATIONS if result.summary.total_violations else EXIT_OK


def _cmd_mutate(args) -> int:
    if not args.dry_run:
        print("mutate requires --dry-run (analyzer runs happen under `run`)",
              file=sys.stderr)
        return EXIT_HARNESS_ERROR
    cfg = load_campaign_config(args.config)
    if args.workdir:
        cfg.work_dir = args.workdir
    result = run_campaign(cfg, dry_run=True)
    print(result.summary.table())
    print(f"mutant ledger at {Path(cfg.work_dir) / 'mutants.jsonl'}")
    return EXIT_OK


def _cmd_sites(args) -> int:
    path = Path(args.file)
    unit = parse_unit(path.name, path.name, path.read_text(encoding="utf-8"))
    if not unit.parse_ok:
        print(f"parse failed: {unit.diagnostics}", file=sys.stderr)
        return EXIT_HARNESS_ERROR
    kinds = set(ElementKind)
    if args.kinds:
        try:
            kinds = {ElementKind(k) for k in args.kinds.split(",")}
        except ValueError as exc:
            print(f"unknown element kind: {exc}", file=sys.stderr)
            return EXIT_HARNESS_ERROR
    for site in unit_sites(unit, kinds):
        subkind = site.subkind or "-"
        print(f"{site.path}\t{site.anchor}\t{site.kind.value}\t{subkind}\t{site.node_path}")
    return EXIT_OK


def _cmd_triage(args) -> int:
    ledger = Path(args.ledger)
    if not ledger.is_file():
        print(f"no such ledger {ledger}", file=sys.stderr)
        return EXIT_HARNESS_ERROR
    records = [json.loads(line) for line in ledger.read_text(encoding="utf-8").splitlines()
               if line.strip()]
    clusters: dict[str, list[dict]] = defaultdict(list)
    for record in records:
        clusters[record["signature"]].append(record)
    counts: dict[tuple[str, str], int] = defaultdict(int)
    print(f"{'cluster signature':<70} {'size':>5}  representative")
    for signature in sorted(clusters):
        members = sorted(clusters[signature], key=lambda r: r["violation_id"])
        rep = members[0]
        counts[(rep["analyzer"], rep["checker"])] += 1
        print(f"{signature:<70} {len(members):>5}  {rep['violation_id']}")
    print()
    print(f"{'analyzer':<14} {'checker':<8} {'clusters':>8}")
    for (analyzer, checker) in sorted(counts):
        print(f"{analyzer:<14} {checker:<8} {counts[(analyzer, checker)]:>8}")
    print(f"\n{len(records)} violations in {len(clusters)} candidate-unique clusters")
    return EXIT_OK


def _cmd_replay(args) -> int:
    ledger = Path(args.ledger)
    records = [json.loads(line) for line in ledger.read_text(encoding="utf-8").splitlines()
               if line.strip()]
    record = next((r for r in records if r["violation_id"] == args.violation_id), None)
    if record is None:
        print(f"violation {args.violation_id} not in {ledger}", file=sys.stderr)
        return EXIT_HARNESS_ERROR
    profile = load_profile(args.profile)
    witness = record["witness"]
    replay_root = Path(args.workdir or (ledger.parent / "replay")) / args.violation_id
    left = run_analyzer_on_dir(profile, witness["left_program"], replay_root / "left")
    right = run_analyzer_on_dir(profile, witness["right_program"], replay_root / "right")
    verdict = analysis_equivalent(left, right, set(record.get("allowlist", [])),
                                  line_in_identity=profile.line_in_identity)
    print(f"violation {args.violation_id} [{record['checker']} on {record['analyzer']}]")
    print(f"  termination: {left.termination.cls} vs {right.termination.cls}")
    print(f"  only_in_left: {len(verdict.only_in_left)}  "
          f"only_in_right: {len(verdict.only_in_right)}  "
          f"allowlisted: {len(verdict.allowlisted)}")
    if verdict.equivalent:
        print("  verdict: equivalent (violation did not reproduce)")
        return EXIT_OK
    print("  verdict: NOT equivalent (violation reproduced)")
    return EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annaforge",
        description="metamorphic testing of Java static analyzers via annotation injection")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a full campaign from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--workdir", help="override the configured work dir")
    p_run.add_argument("--resume", action="store_true",
                       help="skip work already present in the ledgers")
    p_run.set_defaults(func=_cmd_run)

    p_mut = sub.add_parser("mutate", help="generate and ledger mutants only")
    p_mut.add_argument("config")
    p_mut.add_argument("--dry-run", action="store_true")
    p_mut.add_argument("--workdir")
    p_mut.set_defaults(func=_cmd_mutate)

    p_sites = sub.add_parser("sites", help="dump injection sites of one Java file")
    p_sites.add_argument("file")
    p_sites.add_argument("--kinds", help="comma list of element kinds to include")
    p_sites.set_defaults(func=_cmd_sites)

    p_triage = sub.add_parser("triage", help="cluster a violation ledger")
    p_triage.add_argument("ledger")
    p_triage.set_defaults(func=_cmd_triage)

    p_replay = sub.add_parser("replay", help="re-execute both sides of one violation")
    p_replay.add_argument("violation_id")
    p_replay.add_argument("--ledger", required=True)
    p_replay.add_argument("--profile", required=True)
    p_replay.add_argument("--workdir")
    p_replay.set_defaults(func=_cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FormatError, AnalyzerConfigError, FileNotFoundError) as exc:
        print(f"annaforge: {exc}", file=sys.stderr)
        return EXIT_HARNESS_ERROR


if __name__ == "__main__":
    sys.exit(main())
