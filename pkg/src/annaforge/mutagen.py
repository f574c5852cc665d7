"""Payload generation and mutant materialization.

Three payload families feed the three checkers: source-retention annotations
(processed away for the incomplete-semantics check), the all-target dummy
annotation (syntax check), and equivalence-tuple members (equivalent-annotation
check). Insertion text is always the fully-qualified name so a mutant differs
from its baseline at exactly one splice point, never in the import list.
"""

from __future__ import annotations

import hashlib
import shlex
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .model import ProgramSet, materialize, with_edits
from .registry import (ALL_KINDS, AnnotationSpec, ElementKind, Registry,
                       Retention, equivalence_tuples)
from .javasrc.sites import InjectionSite


class ContractError(Exception):
    """Caller violated an operation precondition."""


class ConfigError(Exception):
    pass


DUMMY_FQ = "io.annaforge.mock.MockAnnotation"

DUMMY_DEFINITION = """\
package io.annaforge.mock;

import java.lang.annotation.ElementType;
import java.lang.annotation.Retention;
import java.lang.annotation.RetentionPolicy;
import java.lang.annotation.Target;

@Target({ElementType.TYPE, ElementType.FIELD, ElementType.METHOD,
    ElementType.PARAMETER, ElementType.CONSTRUCTOR, ElementType.LOCAL_VARIABLE,
    ElementType.ANNOTATION_TYPE, ElementType.PACKAGE, ElementType.TYPE_PARAMETER,
    ElementType.TYPE_USE, ElementType.MODULE, ElementType.RECORD_COMPONENT})
@Retention(RetentionPolicy.RUNTIME)
public @interface MockAnnotation {}
"""

DUMMY_SPEC = AnnotationSpec(
    fq_name=DUMMY_FQ,
    library="io.annaforge:annaforge-fixtures:0",
    targets=frozenset(ALL_KINDS),
    retention=Retention.RUNTIME,
    properties=(),
    definition_source=DUMMY_DEFINITION,
)


def _definition_path(fq_name: str) -> str:
    return fq_name.replace(".", "/") + ".java"


@dataclass(frozen=True)
class Payload:
    kind: str                       # SOURCE_LEVEL | DUMMY | EQUIV_MEMBER
    spec: AnnotationSpec
    insertion_text: str
    tuple_id: str | None = None
    support_files: tuple[tuple[str, str], ...] = ()

    @property
    def key(self) -> str:
        tup = self.tuple_id or "-"
        return f"{self.kind}:{tup}:{self.insertion_text}"


def _payload_for(spec: AnnotationSpec, kind: str, tuple_id: str | None = None) -> Payload:
    support: tuple[tuple[str, str], ...] = ()
    if spec.definition_source is not None:
        support = ((_definition_path(spec.fq_name), spec.definition_source),)
    return Payload(kind=kind, spec=spec, insertion_text=f"@{spec.fq_name}",
                   tuple_id=tuple_id, support_files=support)


def gen_dummy() -> Payload:
    return _payload_for(DUMMY_SPEC, "DUMMY")


def gen_source_level(reg: Registry, limit: int | None = None) -> list[Payload]:
    """Source-retention annotations legal in no-argument form, sorted by name."""
    specs = [
        spec for spec in reg.annotations.values()
        if spec.retention == Retention.SOURCE and spec.no_arg_legal
    ]
    specs.sort(key=lambda s: s.fq_name)
    if limit is not None:
        specs = specs[:max(limit, 0)]
    return [_payload_for(spec, "SOURCE_LEVEL") for spec in specs]


def gen_equiv(reg: Registry, selection: list[str] | None = None
              ) -> list[tuple[str, list[Payload]]]:
    """One payload group per equivalence tuple; members share the target set."""
    groups = []
    for tup in equivalence_tuples(reg, selection):
        payloads = [_payload_for(reg.spec(fq), "EQUIV_MEMBER", tuple_id=tup.name)
                    for fq in tup.members]
        groups.append((tup.name, payloads))
    return groups


@dataclass
class Mutant:
    mutant_id: str
    corpus_id: str
    payload: Payload
    site: InjectionSite
    materialized: ProgramSet
    valid: bool = True
    invalidity_reason: str | None = None

    def ledger_record(self) -> dict:
        return {
            "mutant_id": self.mutant_id,
            "corpus_id": self.corpus_id,
            "payload_kind": self.payload.kind,
            "annotation": self.payload.spec.fq_name,
            "tuple_id": self.payload.tuple_id,
            "path": self.site.path,
            "anchor": self.site.anchor,
            "site_kind": self.site.kind.value,
            "site_subkind": self.site.subkind,
            "node_path": self.site.node_path,
            "valid": self.valid,
            "invalidity_reason": self.invalidity_reason,
        }


def mutant_id_for(corpus_id: str, payload: Payload, site: InjectionSite) -> str:
    h = hashlib.sha256()
    for part in (corpus_id, payload.key, site.path, str(site.anchor),
                 site.kind.value, site.subkind or "-"):
        h.update(part.encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def inject(baseline: ProgramSet, payload: Payload,
           sites: list[InjectionSite]) -> list[Mutant]:
    """One mutant per site. Validity is judged separately by validity_filter."""
    corpus_id = baseline.content_id()
    mutants = []
    for site in sites:
        if site.kind not in payload.spec.targets:
            raise ContractError(
                f"site kind {site.kind.value} not in targets of {payload.spec.fq_name}")
        edits = [(site.anchor, payload.insertion_text + " ")]
        materialized = with_edits(baseline, site.path, edits,
                                  extra_units=list(payload.support_files))
        mutants.append(Mutant(
            mutant_id=mutant_id_for(corpus_id, payload, site),
            corpus_id=corpus_id,
            payload=payload,
            site=site,
            materialized=materialized,
        ))
    return mutants


def validity_filter(mutant: Mutant, mode: str, *, compile_hook: str | None = None,
                    scratch_dir: str | Path | None = None) -> tuple[bool, str | None]:
    """parse_only re-parses the edited set; compile runs the configured hook."""
    if mode == "parse_only":
        for unit in mutant.materialized.units:
            if not unit.parse_ok:
                return False, f"parse failure in {unit.path}: {unit.diagnostics}"
        return True, None
    if mode == "compile":
        if not compile_hook:
            raise ConfigError("compile-mode validity filtering needs a compile hook")
        if scratch_dir is None:
            raise ConfigError("compile-mode validity filtering needs a scratch dir")
        scratch = Path(scratch_dir)
        src_dir = materialize(mutant.materialized, scratch / "src")
        out_dir = scratch / "out"
        out_dir.mkdir(parents=True, exist_ok=True)
        cmd = [
            part.format(src_dir=str(src_dir), out_dir=str(out_dir), classpath="",
                        python=sys.executable)
            for part in shlex.split(compile_hook)
        ]
        try:
            proc = subprocess.run(cmd, capture_output=True, timeout=300)
        except FileNotFoundError as exc:
            raise ConfigError(f"compile hook not executable: {exc}") from exc
        if proc.returncode == 0:
            return True, None
        detail = proc.stderr.decode("utf-8", "replace").strip().splitlines()
        return False, detail[-1] if detail else f"compile hook exit {proc.returncode}"
    raise ConfigError(f"unknown validity mode {mode!r}")


def apply_validity(mutants: list[Mutant], mode: str, *, compile_hook: str | None = None,
                   work_dir: str | Path | None = None) -> None:
    for mutant in mutants:
        scratch = None
        if mode == "compile":
            if work_dir is None:
                raise ConfigError("compile-mode filtering needs a work dir")
            scratch = Path(work_dir) / "validity" / mutant.mutant_id
        ok, reason = validity_filter(mutant, mode, compile_hook=compile_hook,
                                     scratch_dir=scratch)
        mutant.valid = ok
        mutant.invalidity_reason = reason
