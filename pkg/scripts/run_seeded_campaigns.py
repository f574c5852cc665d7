#!/usr/bin/env python3
"""Run the four bundled toy-analyzer campaigns and print their summaries.

Clean mode must come out empty; each seeded fault must surface in exactly its
matching checker. This is the same experiment the acceptance suite automates,
packaged for interactive use:

    python scripts/run_seeded_campaigns.py [work_root]
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from annaforge.campaign import load_campaign_config, run_campaign

CONFIGS = ["toy_clean.cfg", "toy_is.cfg", "toy_iag.cfg", "toy_uea.cfg"]


def main() -> int:
    work_root = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "work"
    config_dir = ROOT / "src" / "annaforge" / "data" / "configs"
    failures = 0
    for name in CONFIGS:
        cfg = load_campaign_config(config_dir / name)
        cfg.work_dir = str(work_root / name.removesuffix(".cfg"))
        started = time.monotonic()
        result = run_campaign(cfg, log=lambda msg: None)
        elapsed = time.monotonic() - started
        print(f"\n== {name} ({elapsed:.1f}s) ==")
        print(result.summary.table())
        by_checker = {}
        for cluster in result.clusters:
            checker = cluster.representative.checker
            by_checker[checker] = by_checker.get(checker, 0) + 1
        expected = {
            "toy_clean.cfg": None, "toy_is.cfg": "ISC",
            "toy_iag.cfg": "ASC", "toy_uea.cfg": "EAC",
        }[name]
        if expected is None:
            ok = not by_checker
        else:
            ok = set(by_checker) == {expected} and by_checker[expected] >= 1
        print(f"cluster distribution: {by_checker or '{}'} -> "
              f"{'as expected' if ok else 'UNEXPECTED'}")
        failures += 0 if ok else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
