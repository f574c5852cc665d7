"""Java tokenizer. Tokens carry exact character offsets into the source text.

Offsets are indices into the decoded string; for ASCII sources these equal
byte offsets. One deliberate quirk: `>` is always emitted as a single token,
never munched into >>, >>=, etc. The parser reconstructs shift operators from
adjacent `>` tokens so that nested generic closers like `List<List<String>>`
need no lexer hack.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset("""
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null
""".split())

PRIMITIVES = frozenset("boolean byte char double float int long short".split())

# Maximal-munch operator list, longest first. No multi-char token starts with
# '>' (see module docstring).
_OPERATORS = [
    "<<=", "...", "->", "::",
    "==", "!=", "<=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "&=", "|=", "^=", "%=", "<<",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "=", ">", "<", "!", "~",
    "?", ":", "+", "-", "*", "/", "&", "|", "^", "%", "@",
]
# candidates grouped by first character, longest first, for fast dispatch
_OPS_BY_FIRST: dict[str, list[str]] = {}
for _op in _OPERATORS:
    _OPS_BY_FIRST.setdefault(_op[0], []).append(_op)
for _lst in _OPS_BY_FIRST.values():
    _lst.sort(key=len, reverse=True)


class LexError(Exception):
    def __init__(self, msg: str, offset: int, line: int):
        super().__init__(f"line {line}: {msg}")
        self.offset = offset
        self.line = line


@dataclass(frozen=True)
class Token:
    kind: str        # ident | keyword | int | float | char | string | textblock | op | eof
    text: str
    start: int
    end: int
    line: int

    def is_op(self, text: str) -> bool:
        return self.kind == "op" and self.text == text

    def is_kw(self, text: str) -> bool:
        return self.kind == "keyword" and self.text == text


def _ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def lex(text: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    line = 1

    def err(msg: str, at: int) -> LexError:
        return LexError(msg, at, line)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in " \t\r\f":
            i += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            j = text.find("*/", i + 2)
            if j < 0:
                raise err("unterminated block comment", i)
            line += text.count("\n", i, j)
            i = j + 2
            continue
        if _ident_start(ch):
            j = i + 1
            while j < n and _ident_part(text[j]):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "ident"
            toks.append(Token(kind, word, i, j, line))
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j, kind = _scan_number(text, i)
            toks.append(Token(kind, text[i:j], i, j, line))
            i = j
            continue
        if ch == '"':
            if text.startswith('"""', i):
                j, nl = _scan_text_block(text, i)
                toks.append(Token("textblock", text[i:j], i, j, line))
                line += nl
                i = j
                continue
            j = _scan_quoted(text, i, '"')
            if j < 0:
                raise err("unterminated string literal", i)
            toks.append(Token("string", text[i:j], i, j, line))
            i = j
            continue
        if ch == "'":
            j = _scan_quoted(text, i, "'")
            if j < 0:
                raise err("unterminated char literal", i)
            toks.append(Token("char", text[i:j], i, j, line))
            i = j
            continue
        for op in _OPS_BY_FIRST.get(ch, ()):
            if text.startswith(op, i):
                toks.append(Token("op", op, i, i + len(op), line))
                i += len(op)
                break
        else:
            raise err(f"unexpected character {ch!r}", i)
    toks.append(Token("eof", "", n, n, line))
    return toks


def _scan_number(text: str, i: int) -> tuple[int, str]:
    n = len(text)
    j = i
    kind = "int"
    if text.startswith(("0x", "0X"), i):
        j = i + 2
        while j < n and (text[j] in "0123456789abcdefABCDEF_"):
            j += 1
        if j < n and text[j] in ".pP":  # hex float
            kind = "float"
            while j < n and (text[j].isalnum() or text[j] in "._+-") and not _breaks_float(text, j):
                j += 1
    elif text.startswith(("0b", "0B"), i):
        j = i + 2
        while j < n and text[j] in "01_":
            j += 1
    else:
        while j < n and (text[j].isdigit() or text[j] == "_"):
            j += 1
        if j < n and text[j] == "." and not text.startswith("..", j):
            if j + 1 < n and (text[j + 1].isdigit() or _is_float_tail(text, j + 1)):
                kind = "float"
                j += 1
                while j < n and (text[j].isdigit() or text[j] == "_"):
                    j += 1
            elif text[i] != "." :
                # e.g. `1.` then method call is not a thing in Java; treat as float `1.`
                kind = "float"
                j += 1
        if j < n and text[j] in "eE":
            k = j + 1
            if k < n and text[k] in "+-":
                k += 1
            if k < n and text[k].isdigit():
                kind = "float"
                j = k
                while j < n and (text[j].isdigit() or text[j] == "_"):
                    j += 1
    if j < n and text[j] in "lL":
        j += 1
    elif j < n and text[j] in "fFdD":
        kind = "float"
        j += 1
    return j, kind


def _is_float_tail(text: str, j: int) -> bool:
    return j < len(text) and text[j] in "fFdDeE"


def _breaks_float(text: str, j: int) -> bool:
    # stop hex-float scan at anything that cannot continue it
    ch = text[j]
    if ch in "+-":
        return text[j - 1] not in "pP"
    return not (ch.isalnum() or ch in "._")


def _scan_quoted(text: str, i: int, quote: str) -> int:
    j = i + 1
    n = len(text)
    while j < n:
        ch = text[j]
        if ch == "\\":
            j += 2
            continue
        if ch == quote:
            return j + 1
        if ch == "\n":
            return -1
        j += 1
    return -1


def _scan_text_block(text: str, i: int) -> tuple[int, int]:
    # opening delimiter is """ followed by (whitespace +) newline
    j = i + 3
    n = len(text)
    while j < n:
        if text[j] == "\\":
            j += 2
            continue
        if text.startswith('"""', j):
            end = j + 3
            return end, text.count("\n", i, end)
        j += 1
    raise LexError("unterminated text block", i, 0)
