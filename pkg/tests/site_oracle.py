"""Brute-force injection-site oracle.

Tries splicing a probe annotation at every token boundary of a source file,
reparses, and keeps the boundaries where the probe lands as the leading
annotation of a node of a supported, eligible kind. Deliberately knows nothing
about the enumerator's walk; agreement between the two is checked exactly.
"""

from __future__ import annotations

from annaforge.javasrc import lex, parse_compilation_unit
from annaforge.javasrc.attach import assign_attachments, find_annotation_at
from annaforge.javasrc.lexer import LexError
from annaforge.javasrc.parser import ParseError
from annaforge.registry import ElementKind, TYPE_USE_SUBKINDS

PROBE = "AfProbeMarker"


def boundaries(text: str) -> list[int]:
    return [tok.start for tok in lex(text) if tok.kind != "eof"]


def oracle_sites(text: str, *, is_package_info: bool = False,
                 is_module_info: bool = False) -> set[tuple[int, str, str]]:
    """All (anchor, kind, subkind) triples found by exhaustive insertion.

    subkind is "-" for non-TYPE_USE kinds.
    """
    found = set()
    for pos in boundaries(text):
        probed = text[:pos] + f"@{PROBE} " + text[pos:]
        try:
            tree = parse_compilation_unit(probed)
        except (ParseError, LexError):
            continue
        assign_attachments(tree, is_package_info=is_package_info,
                           is_module_info=is_module_info)
        ann = find_annotation_at(tree, pos, PROBE)
        if ann is None or not ann.eligible or ann.attach_kind is None:
            continue
        if ann.owner_start != pos:
            continue
        kind = ann.attach_kind
        subkind = ann.attach_subkind or "-"
        if kind == "TYPE_USE" and subkind not in TYPE_USE_SUBKINDS:
            continue
        found.add((pos, kind, subkind))
    return found


def enumerated_triples(sites) -> set[tuple[int, str, str]]:
    return {(s.anchor, s.kind.value, s.subkind or "-") for s in sites}


ALL_KINDS = set(ElementKind)
