#!/usr/bin/env python3
"""Regenerate the injection-site golden files for the bundled mini-corpus.

For every corpus file this runs both the structural enumerator and the
brute-force insertion oracle, refuses to write anything on disagreement, and
freezes the enumerator output (with node paths) into tests/goldens/sites/.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from annaforge.model import load_program_set, unit_sites
from site_oracle import ALL_KINDS, enumerated_triples, oracle_sites


def main() -> int:
    corpus = ROOT / "src" / "annaforge" / "data" / "mini_corpus"
    out_dir = ROOT / "tests" / "goldens" / "sites"
    out_dir.mkdir(parents=True, exist_ok=True)
    ps, skipped = load_program_set(corpus)
    if skipped:
        print(f"corpus has unparseable files: {skipped}", file=sys.stderr)
        return 1
    for unit in ps.units:
        sites = unit_sites(unit, ALL_KINDS)
        expected = oracle_sites(unit.text, is_package_info=unit.is_package_info,
                                is_module_info=unit.is_module_info)
        got = enumerated_triples(sites)
        if got != expected:
            print(f"{unit.path}: enumerator and oracle disagree; refusing to "
                  f"write goldens", file=sys.stderr)
            for triple in sorted(expected - got):
                print(f"  oracle only:     {triple}", file=sys.stderr)
            for triple in sorted(got - expected):
                print(f"  enumerator only: {triple}", file=sys.stderr)
            return 1
        name = unit.path.replace("/", "__") + ".tsv"
        lines = [
            f"{s.path}\t{s.anchor}\t{s.kind.value}\t{s.subkind or '-'}\t{s.node_path}"
            for s in sites
        ]
        (out_dir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"{unit.path}: {len(sites)} sites -> {name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
