"""Program model: compilation units, program sets, splice-based rendering.

Offsets everywhere are indices into the decoded source text; for the ASCII
corpora this framework ships they coincide with byte offsets, and rendering
re-encodes as UTF-8 so zero-edit round trips are byte-identical regardless.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .javasrc import LexError, ParseError, parse_compilation_unit
from .javasrc.attach import assign_attachments
from .javasrc.nodes import CompilationUnitNode
from .javasrc.sites import InjectionSite, enumerate_sites
from .registry import ElementKind


class RenderError(Exception):
    pass


@dataclass
class CompilationUnit:
    seed_id: str
    path: str
    text: str
    tree: CompilationUnitNode | None
    parse_ok: bool
    diagnostics: str = ""

    @property
    def is_package_info(self) -> bool:
        return Path(self.path).name == "package-info.java"

    @property
    def is_module_info(self) -> bool:
        return Path(self.path).name == "module-info.java"

    def line_of(self, offset: int) -> int:
        return self.text.count("\n", 0, offset) + 1


def parse_unit(seed_id: str, path: str, text: str) -> CompilationUnit:
    """Parse failure is data, not an exception; the original text is kept."""
    try:
        tree = parse_compilation_unit(text, path)
    except (ParseError, LexError) as exc:
        return CompilationUnit(seed_id, path, text, None, False, diagnostics=str(exc))
    unit = CompilationUnit(seed_id, path, text, tree, True)
    assign_attachments(tree, is_package_info=unit.is_package_info,
                       is_module_info=unit.is_module_info)
    return unit


def unit_sites(unit: CompilationUnit, kinds: set[ElementKind]) -> list[InjectionSite]:
    if not unit.parse_ok:
        raise ValueError(f"cannot enumerate sites of unparsed unit {unit.path}")
    assert unit.tree is not None
    return enumerate_sites(unit.tree, kinds, seed_id=unit.seed_id, path=unit.path,
                           is_package_info=unit.is_package_info,
                           is_module_info=unit.is_module_info)


def render_text(text: str, edits: list[tuple[int, str]]) -> str:
    """Apply pure insertions; rejects duplicate or out-of-range anchors."""
    if not edits:
        return text
    ordered = sorted(edits, key=lambda e: e[0])
    for (a, _), (b, _) in zip(ordered, ordered[1:]):
        if a == b:
            raise RenderError(f"overlapping edits at offset {a}")
    out = []
    prev = 0
    for anchor, inserted in ordered:
        if anchor < 0 or anchor > len(text):
            raise RenderError(f"edit anchor {anchor} out of range")
        out.append(text[prev:anchor])
        out.append(inserted)
        prev = anchor
    out.append(text[prev:])
    return "".join(out)


def splice_spans(text: str, spans: list[tuple[int, int, str]]) -> str:
    """Replace [start, end) spans; spans must be sorted and non-overlapping."""
    out = []
    prev = 0
    for start, end, replacement in sorted(spans, key=lambda s: (s[0], s[1])):
        if start < prev or end < start or end > len(text):
            raise RenderError(f"bad splice span ({start}, {end})")
        out.append(text[prev:start])
        out.append(replacement)
        prev = end
    out.append(text[prev:])
    return "".join(out)


@dataclass
class ProgramSet:
    root: str
    units: list[CompilationUnit] = field(default_factory=list)
    aux_files: list[tuple[str, bytes]] = field(default_factory=list)

    def unit(self, path: str) -> CompilationUnit:
        for u in self.units:
            if u.path == path:
                return u
        raise KeyError(f"no unit {path!r} in program set")

    def content_id(self) -> str:
        """Stable digest of all file contents, independent of root location."""
        h = hashlib.sha256()
        for u in sorted(self.units, key=lambda u: u.path):
            h.update(u.path.encode())
            h.update(b"\0")
            h.update(u.text.encode("utf-8"))
            h.update(b"\0")
        for path, data in sorted(self.aux_files):
            h.update(path.encode())
            h.update(b"\0")
            h.update(data)
            h.update(b"\0")
        return h.hexdigest()[:16]


def load_program_set(root: str | Path, seed_prefix: str = "") -> tuple[ProgramSet, list[tuple[str, str]]]:
    """Load a directory tree; returns (program set, skipped-units-with-reasons).

    Units that fail to parse are excluded from the set and reported.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root {root} is not a directory")
    ps = ProgramSet(root=str(root))
    skipped = []
    for file in sorted(root.rglob("*")):
        if not file.is_file():
            continue
        rel = file.relative_to(root).as_posix()
        if file.suffix == ".java":
            text = file.read_text(encoding="utf-8")
            seed_id = f"{seed_prefix}{rel}" if seed_prefix else rel
            unit = parse_unit(seed_id, rel, text)
            if unit.parse_ok:
                ps.units.append(unit)
            else:
                skipped.append((rel, unit.diagnostics))
        else:
            ps.aux_files.append((rel, file.read_bytes()))
    return ps, skipped


def materialize(ps: ProgramSet, dest: str | Path) -> Path:
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    for unit in ps.units:
        target = dest / unit.path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(unit.text.encode("utf-8"))
    for path, data in ps.aux_files:
        target = dest / path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
    return dest


def with_edits(ps: ProgramSet, path: str, edits: list[tuple[int, str]],
               extra_units: list[tuple[str, str]] | None = None) -> ProgramSet:
    """Derive a new ProgramSet with one unit edited and optional units appended.

    The baseline set is never mutated; edited/added units are re-parsed.
    """
    out = ProgramSet(root=ps.root, aux_files=list(ps.aux_files))
    for unit in ps.units:
        if unit.path == path:
            new_text = render_text(unit.text, edits)
            out.units.append(parse_unit(unit.seed_id, unit.path, new_text))
        else:
            out.units.append(unit)
    for extra_path, text in extra_units or []:
        if any(u.path == extra_path for u in out.units):
            raise RenderError(f"support file {extra_path} collides with a corpus unit")
        out.units.append(parse_unit(f"support:{extra_path}", extra_path, text))
    return out


def program_sets_equal(a: ProgramSet, b: ProgramSet) -> bool:
    return a.content_id() == b.content_id()
