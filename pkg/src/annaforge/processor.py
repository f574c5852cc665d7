"""Annotation processing: materialize source-retention annotation semantics.

Built-in desugarings cover the closed set of structural annotations this
framework ships (constructor generation, getter generation, cleanup-to-
try/finally, plus plain erasure for marker annotations). Every splice is
single-line so that finding line numbers stay comparable between a program
and its processed form. Arbitrary processors run through the external command
template instead.

The `covered_*` predicates at the bottom are the single source of truth for
what the desugarings do; the bundled toy analyzer imports them so that its
"understands annotation semantics" mode agrees exactly with processing.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from .javasrc import nodes as N
from .model import ProgramSet, load_program_set, materialize, parse_unit, splice_spans


class ProcessingError(Exception):
    pass


CTOR_GEN_ANNOTATIONS = ("io.annaforge.anno.GenerateNoArgsCtor", "lombok.NoArgsConstructor")
GETTER_GEN_ANNOTATIONS = ("io.annaforge.anno.GenerateGetter", "lombok.Getter")
CLEANUP_ANNOTATIONS = ("io.annaforge.anno.AutoCleanup", "lombok.Cleanup")
ERASE_ANNOTATIONS = ("java.lang.Override",)


@dataclass(frozen=True)
class ProcessingRule:
    annotation: str       # fully-qualified name the rule covers
    transform_id: str     # no_args_ctor | getter | cleanup | erase
    description: str = ""


STANDARD_RULES = tuple(
    [ProcessingRule(fq, "no_args_ctor", "insert a public no-argument constructor")
     for fq in CTOR_GEN_ANNOTATIONS]
    + [ProcessingRule(fq, "getter", "insert an accessor per annotated field")
       for fq in GETTER_GEN_ANNOTATIONS]
    + [ProcessingRule(fq, "cleanup", "wrap trailing statements in try/finally close")
       for fq in CLEANUP_ANNOTATIONS]
    + [ProcessingRule(fq, "erase", "compile-time marker, no structural effect")
       for fq in ERASE_ANNOTATIONS]
)

RULE_SETS = {"standard": STANDARD_RULES}


@dataclass
class ProcessorConfig:
    mode: str = "builtin"                  # builtin | external
    external_template: str | None = None
    builtin_rules: tuple[ProcessingRule, ...] = STANDARD_RULES

    def covered(self, annotation_name: str) -> ProcessingRule | None:
        for rule in self.builtin_rules:
            if _name_matches(annotation_name, rule.annotation):
                return rule
        return None


def _name_matches(written: str, fq: str) -> bool:
    return written == fq or written == fq.rsplit(".", 1)[-1]


def _ann_of(mods: list[N.ModLike], names: tuple[str, ...]) -> N.Annotation | None:
    for mod in mods:
        if isinstance(mod, N.Annotation):
            for fq in names:
                if _name_matches(mod.name, fq):
                    return mod
    return None


def process(program: ProgramSet, cfg: ProcessorConfig, *,
            scratch_dir: str | Path | None = None) -> ProgramSet:
    """Return the annotation-processed program set; idempotent by construction."""
    if cfg.mode == "external":
        return _process_external(program, cfg, scratch_dir)
    out = ProgramSet(root=program.root, aux_files=list(program.aux_files))
    for unit in program.units:
        out.units.append(_process_unit(unit, cfg))
    return out


def _process_external(program: ProgramSet, cfg: ProcessorConfig,
                      scratch_dir: str | Path | None) -> ProgramSet:
    if not cfg.external_template:
        raise ProcessingError("external processor mode needs a command template")
    if scratch_dir is None:
        raise ProcessingError("external processor mode needs a scratch dir")
    scratch = Path(scratch_dir)
    src = materialize(program, scratch / "src")
    out_dir = scratch / "out"
    out_dir.mkdir(parents=True, exist_ok=True)
    cmd = [part.format(src_dir=str(src), out_dir=str(out_dir))
           for part in shlex.split(cfg.external_template)]
    try:
        proc = subprocess.run(cmd, capture_output=True, timeout=600)
    except FileNotFoundError as exc:
        raise ProcessingError(f"external processor not executable: {exc}") from exc
    if proc.returncode != 0:
        tail = proc.stderr.decode("utf-8", "replace").strip().splitlines()
        raise ProcessingError(
            f"external processor failed: {tail[-1] if tail else proc.returncode}")
    processed, skipped = load_program_set(out_dir)
    if skipped:
        raise ProcessingError(f"external processor produced unparseable output: {skipped}")
    return processed


def _process_unit(unit, cfg: ProcessorConfig):
    text = unit.text
    current = unit
    for _ in range(200):
        if not current.parse_ok:
            raise ProcessingError(f"{unit.path}: cannot process unparseable unit")
        work = _next_transform(current, cfg)
        if work is None:
            return current
        text = splice_spans(current.text, work)
        current = parse_unit(unit.seed_id, unit.path, text)
    raise ProcessingError(f"{unit.path}: processing did not reach a fixpoint")


def _removal_span(text: str, ann: N.Annotation) -> tuple[int, int, str]:
    end = ann.end
    while end < len(text) and text[end] in " \t":
        end += 1
    return (ann.start, end, "")


def _next_transform(unit, cfg: ProcessorConfig) -> list[tuple[int, int, str]] | None:
    """Splices for the first (by position) covered annotation, or None."""
    best: tuple[int, list[tuple[int, int, str]]] | None = None

    def consider(ann: N.Annotation, splices: list[tuple[int, int, str]]):
        nonlocal best
        if best is None or ann.start < best[0]:
            best = (ann.start, splices)

    tree = unit.tree
    text = unit.text
    for node in N.walk(tree):
        if isinstance(node, N.TypeDecl):
            ann = _ann_of(node.modifiers, _rule_names(cfg, "no_args_ctor"))
            if ann is not None:
                splices = [_removal_span(text, ann)]
                if _would_gain_ctor(node):
                    body = f" public {node.name}() {{}}"
                    splices.append((node.body_open + 1, node.body_open + 1, body))
                consider(ann, splices)
            era = _ann_of(node.modifiers, _rule_names(cfg, "erase"))
            if era is not None:
                consider(era, [_removal_span(text, era)])
            for member in node.members:
                if isinstance(member, N.FieldDecl):
                    ann = _ann_of(member.modifiers, _rule_names(cfg, "getter"))
                    if ann is not None:
                        splices = [_removal_span(text, ann)]
                        if node.decl_kind == "class":
                            insert = _getter_insert(text, node, member)
                            if insert:
                                splices.append((member.end, member.end, insert))
                        consider(ann, splices)
                elif isinstance(member, N.MethodDecl):
                    era = _ann_of(member.modifiers, _rule_names(cfg, "erase"))
                    if era is not None:
                        consider(era, [_removal_span(text, era)])
        elif isinstance(node, N.Block):
            for stmt in node.statements:
                if not isinstance(stmt, N.LocalVarDecl):
                    continue
                ann = _ann_of(stmt.modifiers, _rule_names(cfg, "cleanup"))
                if ann is None:
                    continue
                splices = [_removal_span(text, ann)]
                if wrap_eligible(stmt):
                    var = stmt.declarators[0].name
                    splices.append((stmt.end, stmt.end, " try {"))
                    closer = f" }} finally {{ {var}.close(); }}"
                    splices.append((node.end - 1, node.end - 1, closer))
                consider(ann, splices)
        elif isinstance(node, N.LocalVarDecl) and node.context != "block":
            # cleanup annotations in for/foreach/resource headers: erase only
            ann = _ann_of(node.modifiers, _rule_names(cfg, "cleanup"))
            if ann is not None:
                consider(ann, [_removal_span(text, ann)])
    return best[1] if best else None


def _rule_names(cfg: ProcessorConfig, transform_id: str) -> tuple[str, ...]:
    return tuple(r.annotation for r in cfg.builtin_rules if r.transform_id == transform_id)


def _would_gain_ctor(decl: N.TypeDecl) -> bool:
    if decl.decl_kind != "class":
        return False
    return not _has_no_arg_ctor(decl)


def _has_no_arg_ctor(decl: N.TypeDecl) -> bool:
    for member in decl.members:
        if isinstance(member, N.MethodDecl) and member.is_ctor:
            real_params = [p for p in member.params if not p.is_receiver]
            if member.is_compact_ctor or not real_params:
                return True
    return False


def _getter_insert(text: str, decl: N.TypeDecl, fld: N.FieldDecl) -> str:
    type_text = text[fld.type.start:fld.type.end]
    parts = []
    for declarator in fld.declarators:
        name = declarator.name
        getter = "get" + name[0].upper() + name[1:]
        if _has_method(decl, getter):
            continue
        dims = "[]" * len(declarator.extra_dims)
        parts.append(f" public {type_text}{dims} {getter}() {{ return this.{name}; }}")
    return "".join(parts)


def _has_method(decl: N.TypeDecl, name: str) -> bool:
    return any(isinstance(m, N.MethodDecl) and not m.is_ctor and m.name == name
               for m in decl.members)


# ---------------------------------------------------------------------------
# Semantics predicates shared with the toy analyzer. An analyzer that "knows"
# these annotations must agree with what processing actually produces.

def wrap_eligible(decl: N.LocalVarDecl) -> bool:
    """Cleanup wraps only single-declarator locals declared directly in a block."""
    return decl.context == "block" and len(decl.declarators) == 1


def generates_ctor(decl: N.TypeDecl) -> bool:
    """True when a ctor-generating annotation will add a public no-arg ctor."""
    return (_ann_of(decl.modifiers, CTOR_GEN_ANNOTATIONS) is not None
            and _would_gain_ctor(decl))


def getter_generated_for(decl: N.TypeDecl, fld: N.FieldDecl) -> bool:
    """True when processing will add accessors that read this field."""
    return (_ann_of(fld.modifiers, GETTER_GEN_ANNOTATIONS) is not None
            and decl.decl_kind == "class")


def cleanup_closes(decl: N.LocalVarDecl) -> bool:
    """True when processing will generate a close() call for this local."""
    return (_ann_of(decl.modifiers, CLEANUP_ANNOTATIONS) is not None
            and wrap_eligible(decl))
