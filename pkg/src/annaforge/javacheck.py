"""Shallow Java validity checker, usable as a compile hook.

`python -m annaforge.javacheck <src_dir>` parses every .java file under the
directory and rejects (exit 1) parse failures and duplicate annotations on a
single element (same simple name twice, the common way an injected annotation
collides with an existing one). It is not a compiler; campaigns that have a
real JDK should configure javac instead.
"""

from __future__ import annotations

import sys
from collections import Counter
from pathlib import Path

from .javasrc.nodes import Annotation, walk
from .model import CompilationUnit, parse_unit


def check_units(units: list[CompilationUnit]) -> list[str]:
    """The checker proper, over already-parsed units."""
    problems = []
    for unit in units:
        if not unit.parse_ok:
            problems.append(f"{unit.path}: {unit.diagnostics}")
            continue
        assert unit.tree is not None
        by_owner: dict[tuple[int, str], list[Annotation]] = {}
        for node in walk(unit.tree):
            if isinstance(node, Annotation) and node.attach_kind is not None:
                by_owner.setdefault((node.owner_start, node.attach_kind), []).append(node)
        for (owner, kind), anns in sorted(by_owner.items()):
            counts = Counter(a.simple_name for a in anns)
            for name, n in sorted(counts.items()):
                if n > 1:
                    line = unit.line_of(owner)
                    problems.append(
                        f"{unit.path}:{line}: duplicate annotation @{name} on one {kind}")
    return problems


def check_source_dir(src_dir: str | Path) -> list[str]:
    root = Path(src_dir)
    units = []
    for file in sorted(root.rglob("*.java")):
        rel = file.relative_to(root).as_posix()
        units.append(parse_unit(rel, rel, file.read_text(encoding="utf-8")))
    return check_units(units)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) < 1:
        print("usage: python -m annaforge.javacheck <src_dir> [out_dir]", file=sys.stderr)
        return 2
    problems = check_source_dir(argv[0])
    for problem in problems:
        print(problem, file=sys.stderr)
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
