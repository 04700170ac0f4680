"""N-Triples reader and canonical writer.

The reader is strict per line but recovers per line: a malformed line yields
an error :class:`ParseDiagnostic` and no triple, and parsing continues with the
next line.  The writer emits one triple per line, sorted by the serialized
subject, predicate and object so output is byte-stable.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from typing import IO, List, Optional, Union

from .errors import SprdfError
from .store import Origin, Triple, TripleStore
from .terms import BNode, IRI, Literal, Term, TermKind

_EOL = re.compile(r"\r\n|\r|\n")
_BNODE_CHARS = re.compile(r"[A-Za-z0-9_\-.\u00B7\u00C0-\uFFFF]*")
_LANG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_IRI_FORBIDDEN = set('<>"{}|^`\\')


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


@dataclass
class ParseResult:
    triples_added: int = 0
    diagnostics: List[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


class _LineError(Exception):
    def __init__(self, message: str, pos: int):
        super().__init__(message)
        self.pos = pos


class _LineParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: Optional[int] = None):
        raise _LineError(message, self.pos if pos is None else pos)

    def skip_ws(self) -> None:
        text, n = self.text, len(self.text)
        while self.pos < n and text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def hex_escape(self, width: int) -> str:
        start = self.pos
        digits = self.text[self.pos:self.pos + width]
        if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
            self.error(f"bad \\{'u' if width == 4 else 'U'} escape", start)
        self.pos += width
        cp = int(digits, 16)
        if cp > 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
            self.error(f"escape denotes invalid code point U+{cp:X}", start)
        return chr(cp)

    def iri(self) -> str:
        start = self.pos
        if self.peek() != "<":
            self.error("expected '<'")
        self.pos += 1
        out = []
        text, n = self.text, len(self.text)
        while True:
            if self.pos >= n:
                self.error("unterminated IRI", start)
            c = text[self.pos]
            if c == ">":
                self.pos += 1
                break
            if c == "\\":
                kind = text[self.pos + 1:self.pos + 2]
                self.pos += 2
                if kind == "u":
                    out.append(self.hex_escape(4))
                elif kind == "U":
                    out.append(self.hex_escape(8))
                else:
                    self.error("only \\u and \\U escapes are allowed in IRIs", self.pos - 2)
                continue
            if c in _IRI_FORBIDDEN or ord(c) <= 0x20:
                self.error(f"character {c!r} not allowed in IRI")
            out.append(c)
            self.pos += 1
        value = "".join(out)
        if not value:
            self.error("empty IRI", start)
        return value

    def bnode(self) -> str:
        if not self.text.startswith("_:", self.pos):
            self.error("expected '_:'")
        self.pos += 2
        m = _BNODE_CHARS.match(self.text, self.pos)
        label = m.group(0).rstrip(".")
        if not label:
            self.error("empty blank node label")
        self.pos += len(label)
        return label

    def literal(self) -> Term:
        start = self.pos
        self.pos += 1
        out = []
        text, n = self.text, len(self.text)
        while True:
            if self.pos >= n:
                self.error("unterminated literal", start)
            c = text[self.pos]
            if c == '"':
                self.pos += 1
                break
            if c == "\\":
                kind = text[self.pos + 1:self.pos + 2]
                self.pos += 2
                if kind == "u":
                    out.append(self.hex_escape(4))
                elif kind == "U":
                    out.append(self.hex_escape(8))
                elif kind in _ECHAR:
                    out.append(_ECHAR[kind])
                else:
                    self.error(f"unknown escape \\{kind}", self.pos - 2)
                continue
            out.append(c)
            self.pos += 1
        value = "".join(out)
        if text.startswith("^^", self.pos):
            self.pos += 2
            return Literal(value, datatype=self.iri())
        if self.peek() == "@":
            self.pos += 1
            m = _LANG.match(text, self.pos)
            if not m:
                self.error("bad language tag")
            self.pos = m.end()
            return Literal(value, language=m.group(0))
        return Literal(value)

    def subject(self) -> Term:
        c = self.peek()
        if c == "<":
            return IRI(self.iri())
        if c == "_":
            return BNode(self.bnode())
        self.error("expected IRI or blank node as subject")

    def predicate(self) -> Term:
        if self.peek() != "<":
            self.error("expected IRI as predicate")
        return IRI(self.iri())

    def object(self) -> Term:
        c = self.peek()
        if c == "<":
            return IRI(self.iri())
        if c == "_":
            return BNode(self.bnode())
        if c == '"':
            return self.literal()
        self.error("expected IRI, blank node or literal as object")

    def statement(self):
        """Parse one line; None for blank or comment-only lines."""
        self.skip_ws()
        if self.at_end() or self.peek() == "#":
            return None
        s = self.subject()
        self.skip_ws()
        p = self.predicate()
        self.skip_ws()
        o = self.object()
        self.skip_ws()
        if self.peek() != ".":
            self.error("expected '.'")
        self.pos += 1
        self.skip_ws()
        if not self.at_end() and self.peek() != "#":
            self.error("unexpected content after '.'")
        return s, p, o


def parse_line(line: str):
    """Parse a single N-Triples line into a ``(s, p, o)`` Term tuple or None.

    Raises ValueError with the 0-based column attached as ``.column``.
    """
    parser = _LineParser(line)
    try:
        return parser.statement()
    except _LineError as exc:
        err = ValueError(str(exc))
        err.column = exc.pos
        raise err from None


def unescape_string(body: str) -> str:
    """Decode the escapes of a quoted-string body (without the quotes)."""
    parser = _LineParser('"' + body + '"')
    try:
        return parser.literal().lexical
    except _LineError as exc:
        raise ValueError(str(exc)) from None


def parse_ntriples(source: Union[str, IO[str]], store: TripleStore,
                   origin: Origin = Origin.BASE) -> ParseResult:
    """Parse N-Triples text (or a text stream) into ``store``."""
    text = source if isinstance(source, str) else source.read()
    result = ParseResult()
    if text.startswith("\ufeff"):
        text = text[1:]
    for lineno, line in enumerate(_EOL.split(text), start=1):
        parser = _LineParser(line)
        try:
            parsed = parser.statement()
        except _LineError as exc:
            result.diagnostics.append(ParseDiagnostic(lineno, exc.pos + 1, str(exc)))
            continue
        if parsed is None:
            continue
        try:
            ids = Triple(*(store.intern(t) for t in parsed))
            if store.insert(ids, origin):
                result.triples_added += 1
        except SprdfError as exc:
            result.diagnostics.append(ParseDiagnostic(lineno, 1, str(exc)))
    return result


def parse_file(path, store: TripleStore, origin: Origin = Origin.BASE) -> ParseResult:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_ntriples(fh, store, origin)


# -- writing ---------------------------------------------------------------


def _escape_iri(value: str) -> str:
    out = []
    for c in value:
        if c in _IRI_FORBIDDEN or ord(c) <= 0x20:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return "".join(out)


_LITERAL_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r",
                    "\t": "\\t", "\b": "\\b", "\f": "\\f"}


def _escape_literal(value: str) -> str:
    out = []
    for c in value:
        esc = _LITERAL_ESCAPES.get(c)
        if esc is not None:
            out.append(esc)
        elif ord(c) < 0x20 or ord(c) == 0x7F:
            out.append(f"\\u{ord(c):04X}")
        else:
            out.append(c)
    return "".join(out)


def format_term(term: Term) -> str:
    if term.kind is TermKind.IRI:
        return f"<{_escape_iri(term.lexical)}>"
    if term.kind is TermKind.BLANK:
        return f"_:{term.lexical}"
    text = f'"{_escape_literal(term.lexical)}"'
    if term.language is not None:
        return f"{text}@{term.language}"
    if term.datatype is not None:
        return f"{text}^^<{_escape_iri(term.datatype)}>"
    return text


def format_triple(store: TripleStore, triple) -> str:
    s, p, o = store.terms_of(triple)
    return f"{format_term(s)} {format_term(p)} {format_term(o)} ."


def canonical_lines(store: TripleStore, origin_filter: str = "all") -> List[str]:
    if origin_filter not in ("all", "base", "inferred"):
        raise ValueError(f"origin_filter must be all, base or inferred, not {origin_filter!r}")
    cache = {}

    def fmt(tid):
        text = cache.get(tid)
        if text is None:
            text = cache[tid] = format_term(store.term(tid))
        return text

    rows = []
    for t in store.match():
        if origin_filter != "all":
            inferred = store.is_inferred(t)
            if inferred != (origin_filter == "inferred"):
                continue
        rows.append((fmt(t.s), fmt(t.p), fmt(t.o)))
    rows.sort()
    return [f"{s} {p} {o} .\n" for s, p, o in rows]


def write_ntriples(store: TripleStore, origin_filter: str = "all") -> str:
    """Serialize the store in canonical order; ``origin_filter`` is all, base or inferred."""
    return "".join(canonical_lines(store, origin_filter))


def dump(store: TripleStore, fp: IO[str], origin_filter: str = "all") -> None:
    fp.writelines(canonical_lines(store, origin_filter))


def write_file(store: TripleStore, path, origin_filter: str = "all") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump(store, fh, origin_filter)


def loads(text: str) -> TripleStore:
    """Convenience: parse text into a fresh store, raising on any diagnostic."""
    store = TripleStore()
    result = parse_ntriples(io.StringIO(text), store)
    if not result.ok:
        raise ValueError("; ".join(str(d) for d in result.diagnostics))
    return store
