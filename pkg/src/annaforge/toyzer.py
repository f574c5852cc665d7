"""Bundled miniature Java analyzer with switchable seeded faults.

Invoked as `python -m annaforge.toyzer <src_dir> <report_path> [--faults=...]`.
Report format: RULE<TAB>path<TAB>line<TAB>message per line; exit 0 on success,
exit 3 on tool-level input errors, uncaught crash otherwise.

Rules (all deliberately simple):
  unused-field            private field never referenced in its unit
  unnecessary-constructor public no-arg constructor with an empty body
  uninstantiable-class    class whose declared constructors are all private
  nullable-primitive      Nullable-style annotation on a primitive declaration
  long-method             method/constructor spanning more than 12 source lines
  unclosed-resource       file stream local without a close() call in scope

Seeded faults (each independently switchable):
  is    forget structural-annotation semantics (ctor/getter/cleanup awareness)
  iag   crash while reading any annotated array dimension
  uea   recognize only javax.inject.Inject when suppressing constructor warnings
"""

from __future__ import annotations

import sys
from pathlib import Path

from .javasrc import nodes as N
from .model import CompilationUnit, parse_unit
from .processor import cleanup_closes, generates_ctor, getter_generated_for

LONG_METHOD_LINES = 12
NULLABLE_NAMES = {"Nullable", "CheckForNull"}
STREAM_TYPES = {"FileInputStream", "FileOutputStream"}
INJECT_SIMPLE = "Inject"
INJECT_EXACT = "javax.inject.Inject"


class Faults:
    def __init__(self, flags: set[str]):
        unknown = flags - {"is", "iag", "uea"}
        if unknown:
            raise SystemExit(f"toyzer: unknown fault flags {sorted(unknown)}")
        self.incomplete_semantics = "is" in flags
        self.crash_on_dim_annotation = "iag" in flags
        self.narrow_inject = "uea" in flags


def _annotations(mods: list[N.ModLike]) -> list[N.Annotation]:
    return [m for m in mods if isinstance(m, N.Annotation)]


def _is_private(mods: list[N.ModLike]) -> bool:
    return any(isinstance(m, N.Modifier) and m.text == "private" for m in mods)


def _is_public(mods: list[N.ModLike]) -> bool:
    return any(isinstance(m, N.Modifier) and m.text == "public" for m in mods)


def _used_names(tree: N.CompilationUnitNode) -> set[str]:
    """Identifier usages in expression position; annotation names excluded."""
    used: set[str] = set()
    for node in N.walk(tree):
        if isinstance(node, N.NameExpr):
            used.update(node.parts)
        elif isinstance(node, N.FieldAccess):
            used.add(node.name)
        elif isinstance(node, N.ThisExpr) and node.qualifier:
            used.update(node.qualifier.split("."))
    return used


def analyze_unit(unit: CompilationUnit, faults: Faults) -> list[tuple[str, str, int, str]]:
    assert unit.tree is not None
    findings: list[tuple[str, str, int, str]] = []
    aware = not faults.incomplete_semantics

    if faults.crash_on_dim_annotation:
        for node in N.walk(unit.tree):
            if isinstance(node, N.Dim) and node.annotations:
                raise RuntimeError(
                    f"array dimension annotation support missing near offset {node.start}")

    used = _used_names(unit.tree)

    def report(rule: str, offset: int, message: str):
        findings.append((rule, unit.path, unit.line_of(offset), message))

    for node in N.walk(unit.tree):
        if isinstance(node, N.TypeDecl):
            self_is_class = node.decl_kind == "class"
            ctors = [m for m in node.members
                     if isinstance(m, N.MethodDecl) and m.is_ctor]
            if self_is_class and ctors and all(_is_private(c.modifiers) for c in ctors):
                if not (aware and generates_ctor(node)):
                    report("uninstantiable-class", node.start,
                           f"class {node.name} cannot be instantiated from outside")
            for member in node.members:
                if isinstance(member, N.FieldDecl) and _is_private(member.modifiers):
                    covered = aware and getter_generated_for(node, member)
                    for decl in member.declarators:
                        if decl.name not in used and not covered:
                            report("unused-field", member.start,
                                   f"private field '{decl.name}' is never used")
        elif isinstance(node, N.MethodDecl):
            span = unit.line_of(node.end - 1) - unit.line_of(node.start) + 1
            if span > LONG_METHOD_LINES:
                what = "constructor" if node.is_ctor else f"method {node.name}"
                report("long-method", node.start,
                       f"{what} spans {span} lines (max {LONG_METHOD_LINES})")
            if node.is_ctor and node.body is not None \
                    and not node.body.statements \
                    and not [p for p in node.params if not p.is_receiver] \
                    and _is_public(node.modifiers):
                if not _inject_suppressed(node, faults):
                    report("unnecessary-constructor", node.start,
                           "empty public no-argument constructor")
            _check_nullable(node.modifiers, node.return_type, node.start, report)
            for param in node.params:
                _check_nullable(param.modifiers, param.type, param.start, report)
        elif isinstance(node, N.FieldDecl):
            _check_nullable(node.modifiers, node.type, node.start, report)
        elif isinstance(node, N.LocalVarDecl):
            _check_nullable(node.modifiers, node.type, node.start, report)
        elif isinstance(node, N.Block):
            for stmt in node.statements:
                if isinstance(stmt, N.LocalVarDecl):
                    _check_stream(stmt, node, unit, aware, report)
    findings.sort()
    return findings


def _inject_suppressed(ctor: N.MethodDecl, faults: Faults) -> bool:
    for ann in _annotations(ctor.modifiers):
        if faults.narrow_inject:
            if ann.name == INJECT_EXACT:
                return True
        elif ann.simple_name == INJECT_SIMPLE:
            return True
    return False


def _check_nullable(mods: list[N.ModLike], vtype: N.TypeNode | None, offset: int,
                    report) -> None:
    if not isinstance(vtype, N.PrimitiveType) or vtype.name == "void":
        return
    for ann in _annotations(mods):
        if ann.simple_name in NULLABLE_NAMES:
            report("nullable-primitive", offset,
                   f"@{ann.simple_name} on primitive type {vtype.name}")
            return


def _check_stream(decl: N.LocalVarDecl, block: N.Block, unit: CompilationUnit,
                  aware: bool, report) -> None:
    if len(decl.declarators) != 1 or decl.context != "block":
        return
    declarator = decl.declarators[0]
    init = declarator.init
    if not isinstance(init, N.NewObject):
        return
    if init.type.segments[-1].name not in STREAM_TYPES:
        return
    if aware and cleanup_closes(decl):
        return
    name = declarator.name
    for node in N.walk(block):
        if isinstance(node, N.Call) and node.name == "close" \
                and isinstance(node.target, N.NameExpr) and node.target.parts == [name]:
            return
    report("unclosed-resource", decl.start,
           f"stream '{name}' is never closed")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    flags: set[str] = set()
    positional = []
    for arg in argv:
        if arg.startswith("--faults="):
            flags = set(filter(None, arg[len("--faults="):].split(",")))
        elif arg.startswith("--"):
            print(f"toyzer: unknown option {arg}", file=sys.stderr)
            return 3
        else:
            positional.append(arg)
    if len(positional) != 2:
        print("usage: python -m annaforge.toyzer <src_dir> <report_path> [--faults=a,b]",
              file=sys.stderr)
        return 3
    src_dir, report_path = positional
    faults = Faults(flags)

    root = Path(src_dir)
    if not root.is_dir():
        print(f"toyzer: no such source directory {src_dir}", file=sys.stderr)
        return 3
    all_findings: list[tuple[str, str, int, str]] = []
    for file in sorted(root.rglob("*.java")):
        rel = file.relative_to(root).as_posix()
        unit = parse_unit(rel, rel, file.read_text(encoding="utf-8"))
        if not unit.parse_ok:
            print(f"toyzer: cannot parse {rel}: {unit.diagnostics}", file=sys.stderr)
            return 3
        all_findings.extend(analyze_unit(unit, faults))
    all_findings.sort()
    with open(report_path, "w", encoding="utf-8") as out:
        for rule, path, line, message in all_findings:
            out.write(f"{rule}\t{path}\t{line}\t{message}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
