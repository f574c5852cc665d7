"""Line-oriented structured-text reader shared by registry, profile, and config files.

Format family: UTF-8 text, one record per line. `#` starts a comment (full
line or trailing, outside quotes). A record is whitespace-separated fields;
the first field is the record type. Fields are either bare words, `key=value`
pairs, or double-quoted strings with backslash escapes (\\" \\\\ \\n \\t).
"""

from __future__ import annotations

from dataclasses import dataclass


class FormatError(Exception):
    """Raised on malformed structured-text input; carries file/line context."""

    def __init__(self, msg: str, source: str = "<input>", line: int = 0):
        super().__init__(f"{source}:{line}: {msg}")
        self.source = source
        self.line = line


@dataclass
class Record:
    """One parsed line: the leading word plus positional and key=value fields."""

    rtype: str
    positional: list[str]
    pairs: dict[str, str]
    source: str
    line: int

    def require(self, key: str) -> str:
        if key not in self.pairs:
            raise FormatError(f"record '{self.rtype}' missing required key '{key}'",
                              self.source, self.line)
        return self.pairs[key]


def _split_fields(text: str, source: str, lineno: int) -> list[str]:
    fields: list[str] = []
    buf: list[str] = []
    i, n = 0, len(text)
    in_quotes = False
    started = False
    while i < n:
        ch = text[i]
        if in_quotes:
            if ch == "\\":
                if i + 1 >= n:
                    raise FormatError("dangling backslash in quoted field", source, lineno)
                esc = text[i + 1]
                buf.append({"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}.get(esc, esc))
                i += 2
                continue
            if ch == '"':
                in_quotes = False
                i += 1
                continue
            buf.append(ch)
            i += 1
            continue
        if ch == '"':
            in_quotes = True
            started = True
            i += 1
            continue
        if ch == "#":
            break
        if ch.isspace():
            if started:
                fields.append("".join(buf))
                buf.clear()
                started = False
            i += 1
            continue
        buf.append(ch)
        started = True
        i += 1
    if in_quotes:
        raise FormatError("unterminated quoted field", source, lineno)
    if started:
        fields.append("".join(buf))
    return fields


def parse_records(text: str, source: str = "<input>") -> list[Record]:
    """Parse a whole file into records, preserving line numbers for errors."""
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = _split_fields(raw, source, lineno)
        if not fields:
            continue
        rtype = fields[0]
        positional = []
        pairs: dict[str, str] = {}
        for field in fields[1:]:
            eq = field.find("=")
            if eq > 0:
                key, value = field[:eq], field[eq + 1:]
                if key in pairs:
                    raise FormatError(f"duplicate key '{key}'", source, lineno)
                pairs[key] = value
            else:
                if pairs:
                    raise FormatError(
                        f"positional field {field!r} after key=value fields", source, lineno)
                positional.append(field)
        records.append(Record(rtype, positional, pairs, source, lineno))
    return records


def check_header(records: list[Record], expected: str, source: str) -> list[Record]:
    """Validate the `<name> v1` header record and return the remaining records."""
    if not records:
        raise FormatError(f"missing '{expected} v1' header", source, 0)
    head = records[0]
    if head.rtype != expected or head.positional != ["v1"] or head.pairs:
        raise FormatError(f"first record must be '{expected} v1'", head.source, head.line)
    return records[1:]


def quote(value: str) -> str:
    """Quote a field for writing if it contains whitespace or special chars."""
    if value and not any(ch.isspace() or ch in '"#\\' for ch in value):
        return value
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    escaped = escaped.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    return f'"{escaped}"'
