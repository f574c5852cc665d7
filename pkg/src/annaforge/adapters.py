"""Analyzer adapters: run an analyzer on a program set, normalize its report.

A profile describes how to invoke one analyzer and how to read its output.
Termination is classified four ways (OK / ERROR / TIMEOUT / CRASH) as a pure
function of exit status, declared exit-code sets, and stderr; harness
misconfiguration raises instead of being recorded as an analyzer behavior.
"""

from __future__ import annotations

import hashlib
import os
import re
import shlex
import subprocess
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .model import ProgramSet, materialize
from .textfmt import FormatError, check_header, parse_records

CHECKER_IDS = ("ISC", "ASC", "EAC")


class AnalyzerConfigError(Exception):
    """Harness misconfiguration; never recorded as analyzer behavior."""


class ReportParseError(Exception):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Finding:
    rule_id: str
    path: str
    line: int | None          # None renders as UNKNOWN
    message_class: str

    def identity(self, line_in_identity: bool = True) -> tuple:
        line = self.line if line_in_identity else None
        return (self.rule_id, self.path, line, self.message_class)

    def render(self) -> str:
        line = "UNKNOWN" if self.line is None else str(self.line)
        return f"{self.rule_id}\t{self.path}\t{line}\t{self.message_class}"


@dataclass(frozen=True)
class Termination:
    cls: str                   # OK | CRASH | TIMEOUT | ERROR
    exit_code: int | None = None
    fingerprint: str = ""


@dataclass
class AnalysisOutcome:
    termination: Termination
    findings: list[Finding] = field(default_factory=list)
    raw_dir: str = ""
    program_dir: str = ""
    duration: float = 0.0

    def finding_multiset(self, line_in_identity: bool = True) -> Counter:
        return Counter(f.identity(line_in_identity) for f in self.findings)

    def to_record(self) -> dict:
        return {
            "termination": self.termination.cls,
            "exit_code": self.termination.exit_code,
            "fingerprint": self.termination.fingerprint,
            "findings": [
                [f.rule_id, f.path, f.line, f.message_class] for f in self.findings
            ],
            "raw_dir": self.raw_dir,
            "program_dir": self.program_dir,
            "duration": self.duration,
        }

    @staticmethod
    def from_record(record: dict) -> "AnalysisOutcome":
        return AnalysisOutcome(
            termination=Termination(record["termination"], record["exit_code"],
                                    record["fingerprint"]),
            findings=[Finding(r, p, l, m) for r, p, l, m in record["findings"]],
            raw_dir=record["raw_dir"],
            program_dir=record["program_dir"],
            duration=record["duration"],
        )


@dataclass
class AnalyzerProfile:
    name: str
    run_template: str
    report_format: str
    checker_policy: frozenset[str] = frozenset(CHECKER_IDS)
    config_file: str | None = None
    requires_compilation: bool = False
    timeout: float = 600.0
    env: dict[str, str] = field(default_factory=dict)
    ok_exits: frozenset[int] = frozenset({0})
    error_exits: frozenset[int] = frozenset()
    line_in_identity: bool = True

    def validate(self) -> None:
        for placeholder in ("{src_dir}", "{report_path}"):
            if placeholder not in self.run_template:
                raise AnalyzerConfigError(
                    f"profile {self.name}: run template must contain {placeholder}")
        unknown = self.checker_policy - set(CHECKER_IDS)
        if unknown:
            raise AnalyzerConfigError(f"profile {self.name}: unknown checkers {unknown}")
        if self.report_format not in REPORT_PARSERS:
            raise AnalyzerConfigError(
                f"profile {self.name}: unregistered report format {self.report_format!r}")

    def profile_hash(self) -> str:
        h = hashlib.sha256()
        for part in (self.name, self.run_template, self.report_format,
                     str(sorted(self.checker_policy)), str(self.config_file),
                     str(self.requires_compilation), str(self.timeout),
                     str(sorted(self.env.items())), str(sorted(self.ok_exits)),
                     str(sorted(self.error_exits)), str(self.line_in_identity)):
            h.update(part.encode())
            h.update(b"\0")
        return h.hexdigest()[:12]


_PROFILE_KEYS = {"run", "format", "checkers", "config", "requires_compilation",
                 "timeout", "ok_exits", "error_exits", "line_in_identity", "env"}


def load_profile_text(text: str, source: str = "<memory>") -> AnalyzerProfile:
    records = check_header(parse_records(text, source), "profile", source)
    analyzer = [r for r in records if r.rtype == "analyzer"]
    if len(analyzer) != 1:
        raise FormatError("profile file must contain exactly one analyzer record",
                          source, 0)
    rec = analyzer[0]
    unknown = set(rec.pairs) - _PROFILE_KEYS
    if unknown:
        raise FormatError(f"unknown keys {sorted(unknown)}", rec.source, rec.line)
    if len(rec.positional) != 1:
        raise FormatError("analyzer record wants exactly one name", rec.source, rec.line)

    def _exits(raw: str) -> frozenset[int]:
        try:
            return frozenset(int(x) for x in filter(None, raw.split(",")))
        except ValueError:
            raise FormatError(f"bad exit-code list {raw!r}", rec.source, rec.line) from None

    env = {}
    for pair in filter(None, rec.pairs.get("env", "").split(",")):
        key, sep, value = pair.partition("=")
        if not sep:
            raise FormatError(f"bad env entry {pair!r}", rec.source, rec.line)
        env[key] = value
    profile = AnalyzerProfile(
        name=rec.positional[0],
        run_template=rec.require("run"),
        report_format=rec.require("format"),
        checker_policy=frozenset(filter(None, rec.pairs.get(
            "checkers", "ISC,ASC,EAC").split(","))),
        config_file=rec.pairs.get("config"),
        requires_compilation=rec.pairs.get("requires_compilation", "false") == "true",
        timeout=float(rec.pairs.get("timeout", "600")),
        env=env,
        ok_exits=_exits(rec.pairs.get("ok_exits", "0")),
        error_exits=_exits(rec.pairs.get("error_exits", "")),
        line_in_identity=rec.pairs.get("line_in_identity", "true") == "true",
    )
    profile.validate()
    return profile


def load_profile(path: str | Path) -> AnalyzerProfile:
    path = Path(path)
    return load_profile_text(path.read_text(encoding="utf-8"), source=str(path))


# ------------------------------------------------------------------ masking

_HEX_ADDR = re.compile(r"0x[0-9a-fA-F]{4,}")
_TIMESTAMP = re.compile(r"\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}(?:\.\d+)?")


def mask_message(message: str, src_dir: str = "") -> str:
    """Mask volatile substrings so reports compare across scratch locations."""
    out = message
    if src_dir:
        for variant in {src_dir, str(Path(src_dir).resolve())}:
            if variant:
                out = out.replace(variant.rstrip("/") + "/", "<SRC>/")
                out = out.replace(variant.rstrip("/"), "<SRC>")
    out = _HEX_ADDR.sub("0x<ADDR>", out)
    out = _TIMESTAMP.sub("<TS>", out)
    return out


def _normalize_path(path: str, src_dir: str) -> str:
    p = Path(path)
    if p.is_absolute():
        try:
            return p.resolve().relative_to(Path(src_dir).resolve()).as_posix()
        except ValueError:
            return p.as_posix()
    return p.as_posix()


# ------------------------------------------------------------------ report parsers

def parse_toy_report(raw: bytes, src_dir: str = "") -> list[Finding]:
    """Native format: RULE<TAB>path<TAB>line<TAB>message, one finding per line."""
    findings = []
    offset = 0
    for line in raw.decode("utf-8").splitlines(keepends=True):
        stripped = line.rstrip("\n")
        if stripped:
            parts = stripped.split("\t")
            if len(parts) != 4:
                raise ReportParseError(
                    f"expected 4 tab-separated fields, got {len(parts)}", offset)
            rule, path, line_s, msg = parts
            lineno = None if line_s == "UNKNOWN" else int(line_s)
            findings.append(Finding(rule, _normalize_path(path, src_dir), lineno,
                                    mask_message(msg, src_dir)))
        offset += len(line.encode("utf-8"))
    return findings


_PMD_TEXT = re.compile(r"^(?P<path>.+?):(?P<line>\d+):\s*(?P<rule>[\w.\-]+):\s*(?P<msg>.*)$")


def parse_pmd_text_report(raw: bytes, src_dir: str = "") -> list[Finding]:
    """PMD `-f text` style lines: path:line: Rule: message."""
    findings = []
    offset = 0
    for line in raw.decode("utf-8", "replace").splitlines(keepends=True):
        stripped = line.rstrip("\n")
        if stripped:
            m = _PMD_TEXT.match(stripped)
            if m is None:
                raise ReportParseError("unrecognized PMD text line", offset)
            findings.append(Finding(
                m.group("rule"), _normalize_path(m.group("path"), src_dir),
                int(m.group("line")), mask_message(m.group("msg"), src_dir)))
        offset += len(line.encode("utf-8"))
    return findings


REPORT_PARSERS = {
    "toy": parse_toy_report,
    "pmd_text": parse_pmd_text_report,
}


def parse_report(report_format: str, raw: bytes, src_dir: str = "") -> list[Finding]:
    if report_format not in REPORT_PARSERS:
        raise AnalyzerConfigError(f"unregistered report format {report_format!r}")
    return REPORT_PARSERS[report_format](raw, src_dir)


# ------------------------------------------------------------------ running

def classify_termination(exit_code: int | None, timed_out: bool, stderr: bytes,
                         profile: AnalyzerProfile) -> Termination:
    if timed_out:
        return Termination("TIMEOUT")
    assert exit_code is not None
    if exit_code in profile.ok_exits:
        return Termination("OK", exit_code)
    if exit_code in profile.error_exits:
        return Termination("ERROR", exit_code, _stderr_fingerprint(stderr))
    return Termination("CRASH", exit_code, _stderr_fingerprint(stderr))


def _stderr_fingerprint(stderr: bytes) -> str:
    lines = [ln for ln in stderr.decode("utf-8", "replace").splitlines() if ln.strip()]
    tail = lines[-1][:120] if lines else ""
    digest = hashlib.sha256(mask_message(tail).encode()).hexdigest()[:8]
    return f"{digest}:{mask_message(tail)}"


def _build_command(profile: AnalyzerProfile, src_dir: str, report_path: str) -> list[str]:
    mapping = {
        "src_dir": src_dir,
        "report_path": report_path,
        "config": profile.config_file or "",
        "classpath": "",
        "python": sys.executable,
    }
    parts = []
    for token in shlex.split(profile.run_template):
        try:
            parts.append(token.format(**mapping))
        except (KeyError, IndexError) as exc:
            raise AnalyzerConfigError(
                f"profile {profile.name}: unknown placeholder in template: {exc}")
    return parts


def run_analyzer_on_dir(profile: AnalyzerProfile, src_dir: str | Path,
                        run_dir: str | Path) -> AnalysisOutcome:
    """Run one analyzer process in an isolated run directory."""
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    report_path = run_dir / "report.txt"
    cmd = _build_command(profile, str(src_dir), str(report_path))
    (run_dir / "cmd.txt").write_text(shlex.join(cmd) + "\n", encoding="utf-8")
    env = dict(os.environ)
    env.update(profile.env)
    started = time.monotonic()
    timed_out = False
    try:
        proc = subprocess.run(cmd, capture_output=True, timeout=profile.timeout,
                              cwd=run_dir, env=env)
        exit_code: int | None = proc.returncode
        stdout, stderr = proc.stdout, proc.stderr
    except subprocess.TimeoutExpired as exc:
        timed_out = True
        exit_code = None
        stdout = exc.stdout or b""
        stderr = exc.stderr or b""
    except FileNotFoundError as exc:
        raise AnalyzerConfigError(
            f"profile {profile.name}: command not executable: {exc}") from exc
    duration = time.monotonic() - started
    (run_dir / "stdout.txt").write_bytes(stdout)
    (run_dir / "stderr.txt").write_bytes(stderr)

    termination = classify_termination(exit_code, timed_out, stderr, profile)
    findings: list[Finding] = []
    if termination.cls in ("OK", "ERROR") and report_path.exists():
        try:
            findings = parse_report(profile.report_format, report_path.read_bytes(),
                                    str(src_dir))
        except ReportParseError as exc:
            if termination.cls == "OK":
                termination = Termination("ERROR", termination.exit_code,
                                          f"unparseable report: {exc}")
            findings = []
    elif termination.cls == "OK" and not report_path.exists():
        termination = Termination("ERROR", termination.exit_code, "missing report")
    return AnalysisOutcome(termination=termination, findings=findings,
                           raw_dir=str(run_dir), program_dir=str(src_dir),
                           duration=duration)


def run_analyzer(profile: AnalyzerProfile, program: ProgramSet,
                 work_dir: str | Path, run_key: str) -> AnalysisOutcome:
    """Materialize the program set into a fresh scratch dir and analyze it."""
    work = Path(work_dir)
    src_dir = materialize(program, work / "programs" / run_key / "src")
    run_dir = work / "runs" / f"{profile.name}-{run_key}"
    return run_analyzer_on_dir(profile, src_dir, run_dir)
