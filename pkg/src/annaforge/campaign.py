"""End-to-end campaign orchestration: config, scheduling, ledgers, summary.

A campaign materializes mutants, schedules analyzer runs across a worker pool
(one run per task), then evaluates the checkers over the collected outcomes.
All persistent state is append-only JSON Lines keyed by stable ids, which is
what makes resume a matter of skipping already-ledgered work.
"""

from __future__ import annotations

import json
import os
import threading
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .adapters import AnalysisOutcome, AnalyzerProfile, load_profile, run_analyzer
from .metamorph import (Violation, ViolationCluster, check_asc, check_eac,
                        check_isc, dedup)
from .model import ProgramSet, load_program_set
from .mutagen import (ConfigError, Mutant, apply_validity, gen_dummy, gen_equiv,
                      gen_source_level, inject)
from .processor import (RULE_SETS, ProcessingError, ProcessorConfig, process)
from .registry import Registry, load_registry
from .model import unit_sites
from .textfmt import FormatError, check_header, parse_records

LEDGER_SCHEMA = 1


@dataclass
class AnalyzerEntry:
    profile_path: str
    checkers: frozenset[str]
    allowlist: frozenset[str]


@dataclass
class CampaignConfig:
    corpus_root: str
    registry_path: str
    work_dir: str
    analyzers: list[AnalyzerEntry]
    validity_mode: str = "parse_only"
    compile_hook: str | None = None
    parallelism: int = 4
    source_limit: int | None = 3
    tuple_selection: list[str] | None = None
    processor_mode: str = "builtin"
    processor_rules: str = "standard"
    external_processor: str | None = None
    resume: bool = False

    def validate(self) -> None:
        if not Path(self.corpus_root).is_dir():
            raise ConfigError(f"corpus root {self.corpus_root} does not exist")
        if not Path(self.registry_path).is_file():
            raise ConfigError(f"registry {self.registry_path} does not exist")
        if self.validity_mode not in ("parse_only", "compile"):
            raise ConfigError(f"unknown validity mode {self.validity_mode!r}")
        if self.validity_mode == "compile" and not self.compile_hook:
            raise ConfigError("compile validity mode needs compile_hook")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.processor_rules not in RULE_SETS:
            raise ConfigError(f"unknown processor rule set {self.processor_rules!r}")
        for entry in self.analyzers:
            if not Path(entry.profile_path).is_file():
                raise ConfigError(f"profile {entry.profile_path} does not exist")


_OPTION_KEYS = {"parallelism", "validity", "compile_hook", "resume"}
_PAYLOAD_KEYS = {"source_limit", "tuples"}
_ANALYZER_KEYS = {"profile", "checkers", "allowlist"}
_PROCESSOR_KEYS = {"mode", "rules", "external"}


def load_campaign_config(path: str | Path) -> CampaignConfig:
    path = Path(path)
    base = path.parent
    records = check_header(parse_records(path.read_text(encoding="utf-8"), str(path)),
                           "campaign", str(path))

    def resolve(p: str) -> str:
        candidate = Path(p)
        return str(candidate if candidate.is_absolute() else base / candidate)

    corpus = registry = work = None
    analyzers: list[AnalyzerEntry] = []
    options: dict[str, str] = {}
    payloads: dict[str, str] = {}
    processor: dict[str, str] = {}
    for rec in records:
        if rec.rtype == "corpus":
            corpus = resolve(rec.positional[0])
        elif rec.rtype == "registry":
            registry = resolve(rec.positional[0])
        elif rec.rtype == "workdir":
            work = resolve(rec.positional[0])
        elif rec.rtype == "options":
            unknown = set(rec.pairs) - _OPTION_KEYS
            if unknown:
                raise FormatError(f"unknown option keys {sorted(unknown)}",
                                  rec.source, rec.line)
            options.update(rec.pairs)
        elif rec.rtype == "payloads":
            unknown = set(rec.pairs) - _PAYLOAD_KEYS
            if unknown:
                raise FormatError(f"unknown payload keys {sorted(unknown)}",
                                  rec.source, rec.line)
            payloads.update(rec.pairs)
        elif rec.rtype == "processor":
            unknown = set(rec.pairs) - _PROCESSOR_KEYS
            if unknown:
                raise FormatError(f"unknown processor keys {sorted(unknown)}",
                                  rec.source, rec.line)
            processor.update(rec.pairs)
        elif rec.rtype == "analyzer":
            unknown = set(rec.pairs) - _ANALYZER_KEYS
            if unknown:
                raise FormatError(f"unknown analyzer keys {sorted(unknown)}",
                                  rec.source, rec.line)
            checkers = frozenset(filter(None, rec.pairs.get(
                "checkers", "ISC,ASC,EAC").split(",")))
            allowlist = frozenset(filter(None, rec.pairs.get("allowlist", "").split(",")))
            analyzers.append(AnalyzerEntry(resolve(rec.require("profile")),
                                           checkers, allowlist))
        else:
            raise FormatError(f"unknown record type {rec.rtype!r}", rec.source, rec.line)
    if corpus is None or registry is None or work is None:
        raise FormatError("config needs corpus, registry, and workdir records",
                          str(path), 0)
    if not analyzers:
        raise FormatError("config needs at least one analyzer record", str(path), 0)
    env_work = os.environ.get("ANNAFORGE_WORK_DIR")
    if env_work:
        work = env_work
    tuples_raw = payloads.get("tuples")
    cfg = CampaignConfig(
        corpus_root=corpus,
        registry_path=registry,
        work_dir=work,
        analyzers=analyzers,
        validity_mode=options.get("validity", "parse_only"),
        compile_hook=options.get("compile_hook"),
        parallelism=int(options.get("parallelism", "4")),
        source_limit=(None if payloads.get("source_limit") == "all"
                      else int(payloads.get("source_limit", "3"))),
        tuple_selection=(None if tuples_raw in (None, "all")
                         else list(filter(None, tuples_raw.split(",")))),
        processor_mode=processor.get("mode", "builtin"),
        processor_rules=processor.get("rules", "standard"),
        external_processor=processor.get("external"),
        resume=options.get("resume", "false") == "true",
    )
    return cfg


# ------------------------------------------------------------------ ledgers

class Ledger:
    """Append-only JSONL keyed by a record field; loads existing keys on open."""

    def __init__(self, path: Path, key_field: str):
        self.path = path
        self.key_field = key_field
        self._lock = threading.Lock()
        self.records: dict[str, dict] = {}
        if path.exists():
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        record = json.loads(line)
                        self.records[record[self.key_field]] = record

    def __contains__(self, key: str) -> bool:
        return key in self.records

    def get(self, key: str) -> dict | None:
        return self.records.get(key)

    def append(self, record: dict) -> None:
        key = record[self.key_field]
        with self._lock:
            if key in self.records:
                return
            self.records[key] = record
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")


@dataclass
class CellStats:
    generated: int = 0
    valid: int = 0
    analyzed: int = 0
    violations: int = 0
    clusters: int = 0
    wall_min: float | None = None
    wall_max: float | None = None

    def note_duration(self, seconds: float) -> None:
        self.wall_min = seconds if self.wall_min is None else min(self.wall_min, seconds)
        self.wall_max = seconds if self.wall_max is None else max(self.wall_max, seconds)

    def to_record(self) -> dict:
        return {
            "generated": self.generated, "valid": self.valid,
            "analyzed": self.analyzed, "violations": self.violations,
            "clusters": self.clusters, "wall_min": self.wall_min,
            "wall_max": self.wall_max,
        }


@dataclass
class CampaignSummary:
    cells: dict[tuple[str, str], CellStats] = field(default_factory=dict)
    discard_rate: float = 0.0
    total_violations: int = 0
    total_clusters: int = 0
    skipped_seeds: list[tuple[str, str]] = field(default_factory=list)
    processing_skips: list[str] = field(default_factory=list)

    def cell(self, analyzer: str, checker: str) -> CellStats:
        return self.cells.setdefault((analyzer, checker), CellStats())

    def validate(self) -> None:
        for stats in self.cells.values():
            assert stats.violations >= stats.clusters
            assert stats.analyzed <= stats.valid <= stats.generated

    def table(self) -> str:
        header = (f"{'analyzer':<12} {'checker':<7} {'gen':>5} {'valid':>5} "
                  f"{'run':>5} {'viol':>5} {'uniq':>5} {'t_min':>7} {'t_max':>7}")
        lines = [header, "-" * len(header)]
        for (analyzer, checker) in sorted(self.cells):
            s = self.cells[(analyzer, checker)]
            tmin = f"{s.wall_min:.2f}" if s.wall_min is not None else "-"
            tmax = f"{s.wall_max:.2f}" if s.wall_max is not None else "-"
            lines.append(f"{analyzer:<12} {checker:<7} {s.generated:>5} {s.valid:>5} "
                         f"{s.analyzed:>5} {s.violations:>5} {s.clusters:>5} "
                         f"{tmin:>7} {tmax:>7}")
        lines.append(f"discard rate: {self.discard_rate:.2%}   "
                     f"violations: {self.total_violations}   "
                     f"candidate-unique clusters: {self.total_clusters}")
        return "\n".join(lines)

    def to_record(self) -> dict:
        return {
            "schema": LEDGER_SCHEMA,
            "cells": {f"{a}/{c}": s.to_record() for (a, c), s in sorted(self.cells.items())},
            "discard_rate": self.discard_rate,
            "total_violations": self.total_violations,
            "total_clusters": self.total_clusters,
            "skipped_seeds": self.skipped_seeds,
            "processing_skips": self.processing_skips,
        }


# ------------------------------------------------------------------ campaign

@dataclass
class CampaignResult:
    summary: CampaignSummary
    violations: list[Violation]
    clusters: list[ViolationCluster]


def _needed_kinds(payloads) -> set:
    kinds = set()
    for payload in payloads:
        kinds |= payload.spec.targets
    return kinds


def _sites_for(baseline: ProgramSet, payload) -> list:
    sites = []
    for unit in baseline.units:
        sites.extend(s for s in unit_sites(unit, set(payload.spec.targets)))
    sites.sort(key=lambda s: s.sort_key())
    return sites


def run_campaign(cfg: CampaignConfig, *, dry_run: bool = False,
                 log=print) -> CampaignResult:
    cfg.validate()
    work = Path(cfg.work_dir)
    work.mkdir(parents=True, exist_ok=True)
    if not cfg.resume:
        for stale in ("mutants.jsonl", "outcomes.jsonl", "violations.jsonl"):
            (work / stale).unlink(missing_ok=True)

    registry = load_registry(cfg.registry_path)
    baseline, skipped = load_program_set(cfg.corpus_root)
    summary = CampaignSummary(skipped_seeds=skipped)
    for path, reason in skipped:
        log(f"[seed] skipping unparseable {path}: {reason}")

    profiles: list[tuple[AnalyzerProfile, AnalyzerEntry]] = []
    for entry in cfg.analyzers:
        profile = load_profile(entry.profile_path)
        excess = entry.checkers - profile.checker_policy
        if excess:
            raise ConfigError(
                f"config enables {sorted(excess)} but profile {profile.name} "
                f"permits only {sorted(profile.checker_policy)}")
        profiles.append((profile, entry))

    mutant_ledger = Ledger(work / "mutants.jsonl", "mutant_id")
    outcome_ledger = Ledger(work / "outcomes.jsonl", "outcome_key")
    violation_ledger = Ledger(work / "violations.jsonl", "violation_id")

    # ---------------- payload generation and injection
    any_asc = any("ASC" in e.checkers for _, e in profiles)
    any_isc = any("ISC" in e.checkers for _, e in profiles)
    any_eac = any("EAC" in e.checkers for _, e in profiles)

    processor_cfg = ProcessorConfig(
        mode=cfg.processor_mode,
        external_template=cfg.external_processor,
        builtin_rules=RULE_SETS[cfg.processor_rules],
    )

    asc_mutants: list[Mutant] = []
    isc_mutants: list[Mutant] = []
    eac_groups: list[tuple[str, dict[tuple[str, int], list[Mutant]]]] = []

    if baseline.units:
        if any_asc:
            dummy = gen_dummy()
            asc_mutants = inject(baseline, dummy, _sites_for(baseline, dummy))
        if any_isc:
            source_payloads = [
                payload for payload in gen_source_level(registry, None)
                if cfg.processor_mode == "external"
                or processor_cfg.covered(payload.spec.fq_name)
            ]
            if cfg.source_limit is not None:
                source_payloads = source_payloads[:cfg.source_limit]
            for payload in source_payloads:
                isc_mutants.extend(inject(baseline, payload, _sites_for(baseline, payload)))
        if any_eac:
            for tuple_id, members in gen_equiv(registry, cfg.tuple_selection):
                shared_sites = _sites_for(baseline, members[0])
                by_site: dict[tuple[str, int], list[Mutant]] = {}
                for payload in members:
                    for mutant in inject(baseline, payload, shared_sites):
                        by_site.setdefault((mutant.site.path, mutant.site.anchor),
                                           []).append(mutant)
                eac_groups.append((tuple_id, by_site))

    all_mutants = asc_mutants + isc_mutants + [
        m for _, by_site in eac_groups for group in by_site.values() for m in group]
    apply_validity(all_mutants, cfg.validity_mode, compile_hook=cfg.compile_hook,
                   work_dir=work)
    for mutant in all_mutants:
        mutant_ledger.append({"schema": LEDGER_SCHEMA, **mutant.ledger_record()})

    generated = len(all_mutants)
    valid_count = sum(1 for m in all_mutants if m.valid)
    summary.discard_rate = 0.0 if not generated else (generated - valid_count) / generated

    checker_of_mutant = {}
    for m in asc_mutants:
        checker_of_mutant[m.mutant_id] = "ASC"
    for m in isc_mutants:
        checker_of_mutant[m.mutant_id] = "ISC"
    for _, by_site in eac_groups:
        for group in by_site.values():
            for m in group:
                checker_of_mutant[m.mutant_id] = "EAC"

    for profile, entry in profiles:
        for checker in sorted(entry.checkers):
            cell = summary.cell(profile.name, checker)
            family = [m for m in all_mutants
                      if checker_of_mutant[m.mutant_id] == checker]
            cell.generated = len(family)
            cell.valid = sum(1 for m in family if m.valid)

    if dry_run:
        _write_summary(work, summary, [])
        return CampaignResult(summary, [], [])

    # ---------------- processing for ISC
    processed_sets: dict[str, ProgramSet] = {}
    for mutant in isc_mutants:
        if not mutant.valid:
            continue
        try:
            processed_sets[mutant.mutant_id] = process(
                mutant.materialized, processor_cfg,
                scratch_dir=work / "processing" / mutant.mutant_id)
        except ProcessingError as exc:
            summary.processing_skips.append(f"{mutant.mutant_id}: {exc}")
            log(f"[isc] skipping {mutant.mutant_id}: {exc}")

    # ---------------- analyzer runs (the scheduling unit)
    tasks: list[tuple[AnalyzerProfile, str, ProgramSet, str]] = []
    seen_keys = set()

    def add_task(profile: AnalyzerProfile, checker: str, ps: ProgramSet, run_key: str):
        outcome_key = f"{profile.name}:{run_key}"
        if outcome_key in seen_keys:
            return
        seen_keys.add(outcome_key)
        tasks.append((profile, checker, ps, run_key))

    for profile, entry in profiles:
        if "ASC" in entry.checkers:
            add_task(profile, "ASC", baseline, "baseline")
            for mutant in asc_mutants:
                if mutant.valid:
                    add_task(profile, "ASC", mutant.materialized, mutant.mutant_id)
        if "ISC" in entry.checkers:
            for mutant in isc_mutants:
                if mutant.valid and mutant.mutant_id in processed_sets:
                    add_task(profile, "ISC", mutant.materialized, mutant.mutant_id)
                    add_task(profile, "ISC", processed_sets[mutant.mutant_id],
                             f"{mutant.mutant_id}.processed")
        if "EAC" in entry.checkers:
            for _, by_site in eac_groups:
                for group in by_site.values():
                    if len(group) >= 2 and all(m.valid for m in group):
                        for mutant in group:
                            add_task(profile, "EAC", mutant.materialized,
                                     mutant.mutant_id)

    def execute(task) -> tuple[str, str, str, AnalysisOutcome]:
        profile, checker, ps, run_key = task
        outcome_key = f"{profile.name}:{run_key}"
        cached = outcome_ledger.get(outcome_key)
        if cached is not None:
            return profile.name, checker, run_key, AnalysisOutcome.from_record(
                cached["outcome"])
        outcome = run_analyzer(profile, ps, work, run_key)
        outcome_ledger.append({
            "schema": LEDGER_SCHEMA,
            "outcome_key": outcome_key,
            "outcome": outcome.to_record(),
        })
        return profile.name, checker, run_key, outcome

    outcomes: dict[str, AnalysisOutcome] = {}
    with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
        for name, checker, run_key, outcome in pool.map(execute, tasks):
            outcomes[f"{name}:{run_key}"] = outcome
            summary.cell(name, checker).note_duration(outcome.duration)

    # ---------------- checker evaluation over collected outcomes
    violations: list[Violation] = []
    for profile, entry in profiles:
        def lookup(ps: ProgramSet, run_key: str) -> AnalysisOutcome:
            return outcomes[f"{profile.name}:{run_key}"]

        if "ASC" in entry.checkers and asc_mutants:
            baseline_outcome = outcomes.get(f"{profile.name}:baseline")
            for mutant in asc_mutants:
                if not mutant.valid:
                    continue
                violation = check_asc(profile, baseline_outcome, mutant, lookup)
                summary.cell(profile.name, "ASC").analyzed += 1
                if violation is not None:
                    violations.append(violation)
        if "ISC" in entry.checkers:
            for mutant in isc_mutants:
                if not mutant.valid or mutant.mutant_id not in processed_sets:
                    continue
                violation = check_isc(profile, mutant, processed_sets[mutant.mutant_id],
                                      set(entry.allowlist), lookup)
                summary.cell(profile.name, "ISC").analyzed += 1
                if violation is not None:
                    violations.append(violation)
        if "EAC" in entry.checkers:
            for _, by_site in eac_groups:
                for group in sorted(by_site.values(),
                                    key=lambda g: g[0].site.sort_key()):
                    if len(group) < 2 or not all(m.valid for m in group):
                        continue
                    found = check_eac(profile, group, lookup)
                    summary.cell(profile.name, "EAC").analyzed += len(group)
                    violations.extend(found)

    for violation in violations:
        violation_record = {"schema": LEDGER_SCHEMA, **violation.to_record()}
        violation_ledger.append(violation_record)

    clusters = dedup(violations)
    by_cell_clusters: dict[tuple[str, str], int] = defaultdict(int)
    for cluster in clusters:
        rep = cluster.representative
        by_cell_clusters[(rep.analyzer, rep.checker)] += 1
    for violation in violations:
        summary.cell(violation.analyzer, violation.checker).violations += 1
    for (analyzer, checker), count in by_cell_clusters.items():
        summary.cell(analyzer, checker).clusters = count
    summary.total_violations = len(violations)
    summary.total_clusters = len(clusters)
    summary.validate()
    _write_summary(work, summary, clusters)
    return CampaignResult(summary, violations, clusters)


def _write_summary(work: Path, summary: CampaignSummary,
                   clusters: list[ViolationCluster]) -> None:
    (work / "summary.txt").write_text(summary.table() + "\n", encoding="utf-8")
    payload = summary.to_record()
    payload["clusters"] = [c.to_record() for c in clusters]
    (work / "summary.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")
