"""The three metamorphic checkers and the analysis-equivalence predicate.

Two analyzer outcomes are equivalent when they terminate in the same class
and report the same finding multiset after allowlist filtering. Checkers turn
non-equivalent outcome pairs into Violations carrying enough witness material
to re-run both sides standalone.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field

from .adapters import AnalysisOutcome, AnalyzerProfile
from .model import ProgramSet
from .mutagen import ContractError, Mutant


class PolicyError(Exception):
    """A checker was invoked against a profile that disables it."""


@dataclass
class EquivalenceVerdict:
    equivalent: bool
    termination_match: bool
    only_in_left: list[tuple]
    only_in_right: list[tuple]
    allowlisted: list[tuple]

    def to_record(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "termination_match": self.termination_match,
            "only_in_left": [list(t) for t in self.only_in_left],
            "only_in_right": [list(t) for t in self.only_in_right],
            "allowlisted": [list(t) for t in self.allowlisted],
        }


@dataclass
class Violation:
    checker: str
    analyzer: str
    left_id: str
    right_id: str
    verdict: EquivalenceVerdict
    termination_pair: tuple[str, str]
    witness: dict[str, str] = field(default_factory=dict)
    allowlist: tuple[str, ...] = ()

    @property
    def diff_rules(self) -> tuple[str, ...]:
        rules = {t[0] for t in self.verdict.only_in_left}
        rules |= {t[0] for t in self.verdict.only_in_right}
        return tuple(sorted(rules))

    @property
    def signature(self) -> str:
        parts = (self.analyzer, self.checker, ",".join(self.diff_rules),
                 "/".join(self.termination_pair))
        return "|".join(parts)

    @property
    def violation_id(self) -> str:
        h = hashlib.sha256()
        for part in (self.signature, self.left_id, self.right_id):
            h.update(part.encode())
            h.update(b"\0")
        return h.hexdigest()[:12]

    def to_record(self) -> dict:
        return {
            "violation_id": self.violation_id,
            "checker": self.checker,
            "analyzer": self.analyzer,
            "left": self.left_id,
            "right": self.right_id,
            "signature": self.signature,
            "verdict": self.verdict.to_record(),
            "termination_pair": list(self.termination_pair),
            "witness": self.witness,
            "allowlist": list(self.allowlist),
        }


def analysis_equivalent(left: AnalysisOutcome, right: AnalysisOutcome,
                        allowlist: set[str] | frozenset[str] = frozenset(), *,
                        line_in_identity: bool = True) -> EquivalenceVerdict:
    """Multiset symmetric difference of findings plus termination-class match."""
    termination_match = left.termination.cls == right.termination.cls
    lhs = left.finding_multiset(line_in_identity)
    rhs = right.finding_multiset(line_in_identity)
    only_left_all = lhs - rhs
    only_right_all = rhs - lhs

    def split(diff: Counter) -> tuple[list[tuple], list[tuple]]:
        kept, suppressed = [], []
        for identity, count in sorted(diff.items(), key=lambda kv: str(kv[0])):
            bucket = suppressed if identity[0] in allowlist else kept
            bucket.extend([identity] * count)
        return kept, suppressed

    only_left, allow_left = split(only_left_all)
    only_right, allow_right = split(only_right_all)
    equivalent = termination_match and not only_left and not only_right
    return EquivalenceVerdict(
        equivalent=equivalent,
        termination_match=termination_match,
        only_in_left=only_left,
        only_in_right=only_right,
        allowlisted=allow_left + allow_right,
    )


def _witness(left: AnalysisOutcome, right: AnalysisOutcome) -> dict[str, str]:
    return {
        "left_program": left.program_dir,
        "left_raw": left.raw_dir,
        "right_program": right.program_dir,
        "right_raw": right.raw_dir,
    }


def check_isc(profile: AnalyzerProfile, mutant: Mutant, processed: ProgramSet,
              allowlist: set[str], runner) -> Violation | None:
    """Incomplete-semantics check: annotated mutant vs its processed form.

    `runner(program_set, run_key) -> AnalysisOutcome` supplies analyzer runs.
    """
    if "ISC" not in profile.checker_policy:
        raise PolicyError(f"profile {profile.name} does not enable ISC")
    if mutant.payload.kind != "SOURCE_LEVEL":
        raise ContractError("ISC applies to source-retention payload mutants only")
    left = runner(mutant.materialized, mutant.mutant_id)
    right = runner(processed, f"{mutant.mutant_id}.processed")
    verdict = analysis_equivalent(left, right, allowlist,
                                  line_in_identity=profile.line_in_identity)
    if verdict.equivalent:
        return None
    return Violation("ISC", profile.name, mutant.mutant_id,
                     f"{mutant.mutant_id}.processed", verdict,
                     (left.termination.cls, right.termination.cls),
                     _witness(left, right), allowlist=tuple(sorted(allowlist)))


def check_asc(profile: AnalyzerProfile, baseline_outcome: AnalysisOutcome,
              mutant: Mutant, runner) -> Violation | None:
    """Dummy-annotation syntax check: baseline vs dummy-annotated mutant.

    Findings on payload support files are harness scaffolding and are dropped
    from the mutant side before comparison.
    """
    if "ASC" not in profile.checker_policy:
        raise PolicyError(f"profile {profile.name} does not enable ASC")
    if mutant.payload.kind != "DUMMY":
        raise ContractError("ASC applies to dummy payload mutants only")
    if not mutant.valid:
        raise ContractError("ASC requires a validity-filtered mutant")
    outcome = runner(mutant.materialized, mutant.mutant_id)
    support_paths = {path for path, _ in mutant.payload.support_files}
    trimmed = AnalysisOutcome(
        termination=outcome.termination,
        findings=[f for f in outcome.findings if f.path not in support_paths],
        raw_dir=outcome.raw_dir, program_dir=outcome.program_dir,
        duration=outcome.duration)
    verdict = analysis_equivalent(baseline_outcome, trimmed,
                                  line_in_identity=profile.line_in_identity)
    if verdict.equivalent:
        return None
    return Violation("ASC", profile.name, "baseline", mutant.mutant_id, verdict,
                     (baseline_outcome.termination.cls, trimmed.termination.cls),
                     _witness(baseline_outcome, trimmed))


def check_eac(profile: AnalyzerProfile, mutant_group: list[Mutant],
              runner) -> list[Violation]:
    """Equivalent-annotation check: pairwise over one tuple at one site."""
    if "EAC" not in profile.checker_policy:
        raise PolicyError(f"profile {profile.name} does not enable EAC")
    if len(mutant_group) < 2:
        raise ContractError("EAC needs at least two mutants per tuple/site group")
    tuple_ids = {m.payload.tuple_id for m in mutant_group}
    site_keys = {(m.site.path, m.site.anchor) for m in mutant_group}
    if len(tuple_ids) != 1 or None in tuple_ids or len(site_keys) != 1:
        raise ContractError("EAC group must share one equivalence tuple and one site")
    if not all(m.valid for m in mutant_group):
        raise ContractError("EAC requires validity-filtered mutants")
    ordered = sorted(mutant_group, key=lambda m: m.payload.insertion_text)
    outcomes = [(m, runner(m.materialized, m.mutant_id)) for m in ordered]
    violations = []
    for i in range(len(outcomes)):
        for j in range(i + 1, len(outcomes)):
            left_m, left_o = outcomes[i]
            right_m, right_o = outcomes[j]
            verdict = analysis_equivalent(left_o, right_o,
                                          line_in_identity=profile.line_in_identity)
            if not verdict.equivalent:
                violations.append(Violation(
                    "EAC", profile.name, left_m.mutant_id, right_m.mutant_id,
                    verdict, (left_o.termination.cls, right_o.termination.cls),
                    _witness(left_o, right_o)))
    return violations


@dataclass
class ViolationCluster:
    signature: str
    representative: Violation
    members: list[Violation]

    def to_record(self) -> dict:
        return {
            "signature": self.signature,
            "representative": self.representative.violation_id,
            "members": [v.violation_id for v in self.members],
            "size": len(self.members),
        }


def dedup(violations: list[Violation]) -> list[ViolationCluster]:
    """Cluster by (analyzer, checker, diff rule set, termination classes).

    Clusters are candidate-unique faults; final uniqueness stays a human call.
    """
    by_signature: dict[str, list[Violation]] = {}
    for violation in violations:
        by_signature.setdefault(violation.signature, []).append(violation)
    clusters = []
    for signature in sorted(by_signature):
        members = sorted(by_signature[signature], key=lambda v: v.violation_id)
        clusters.append(ViolationCluster(signature, members[0], members))
    return clusters
