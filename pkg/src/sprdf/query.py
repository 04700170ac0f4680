"""A SPARQL subset: ``SELECT [DISTINCT] ... WHERE { basic graph pattern }``.

Supported syntax is PREFIX declarations, IRIs in angle brackets, prefixed
names, ``a`` for ``rdf:type``, ``?var``/``$var`` variables, blank nodes (which
act as non-projectable variables) and string literals with an optional
language tag or datatype.  Evaluation performs no inference; run it against a
materialized store.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import QuerySyntaxError, QueryTimeout, UnknownPrefix
from .ntriples import format_term, unescape_string
from .store import TripleStore
from .terms import IRI, Literal, RDF_TYPE, Term

Slot = Union[str, Term]

# Each variable already bound when a pattern runs is assumed to cut its
# cardinality by this factor.
BOUND_VAR_SELECTIVITY = 100.0


class TriplePattern(NamedTuple):
    s: Slot
    p: Slot
    o: Slot

    def variables(self) -> List[str]:
        return [x for x in self if isinstance(x, str)]

    def __str__(self) -> str:
        return " ".join(x if isinstance(x, str) else format_term(x) for x in self)


@dataclass
class Query:
    projection: Optional[List[str]]  # None means SELECT *
    bgp: List[TriplePattern]
    distinct: bool = False
    prefixes: Dict[str, str] = field(default_factory=dict)

    @property
    def variables(self) -> List[str]:
        """Variables of the BGP in order of first appearance (blank nodes excluded)."""
        seen: List[str] = []
        for pat in self.bgp:
            for v in pat.variables():
                if v.startswith("?") and v not in seen:
                    seen.append(v)
        return seen

    @property
    def result_variables(self) -> List[str]:
        return self.variables if self.projection is None else list(self.projection)

    def mentions(self, term: Term) -> bool:
        return any(x == term for pat in self.bgp for x in pat)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<var>[?$][A-Za-z0-9_]+)
  | (?P<bnode>_:[A-Za-z0-9_]+)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtype>\^\^)
  | (?P<pname>(?:[A-Za-z][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_%\-](?:[A-Za-z0-9_%\-.:]*[A-Za-z0-9_%\-:])?)?)
  | (?P<word>[A-Za-z]+)
  | (?P<punct>[{}.*])
""", re.VERBOSE)


class _Tok(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes: Dict[str, str] = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise QuerySyntaxError(message, tok.line, tok.col)

    def keyword(self, tok: _Tok, word: str) -> bool:
        return tok.kind == "word" and tok.text.upper() == word

    def expect_keyword(self, word: str) -> _Tok:
        tok = self.next()
        if not self.keyword(tok, word):
            self.fail(f"expected {word}", tok)
        return tok

    def expect_punct(self, ch: str) -> _Tok:
        tok = self.next()
        if tok.kind != "punct" or tok.text != ch:
            self.fail(f"expected {ch!r}", tok)
        return tok

    def query(self) -> Query:
        while self.keyword(self.peek(), "PREFIX"):
            self.next()
            name = self.next()
            if name.kind != "pname" or not name.text.endswith(":") or name.text.count(":") != 1:
                self.fail("expected prefix name ending in ':'", name)
            iri = self.next()
            if iri.kind != "iri":
                self.fail("expected IRI after prefix name", iri)
            self.prefixes[name.text[:-1]] = iri.text[1:-1]
        self.expect_keyword("SELECT")
        distinct = False
        if self.keyword(self.peek(), "DISTINCT"):
            self.next()
            distinct = True
        projection: Optional[List[str]] = []
        proj_toks: List[_Tok] = []
        if self.peek().kind == "punct" and self.peek().text == "*":
            self.next()
            projection = None
        else:
            while self.peek().kind == "var":
                tok = self.next()
                projection.append("?" + tok.text[1:])
                proj_toks.append(tok)
            if not projection:
                self.fail("expected projection variables or '*'")
        if self.keyword(self.peek(), "WHERE"):
            self.next()
        open_tok = self.expect_punct("{")
        bgp = self.patterns()
        self.expect_punct("}")
        if self.peek().kind != "eof":
            self.fail("unexpected content after query")
        if not bgp:
            self.fail("empty basic graph pattern", open_tok)
        q = Query(projection, bgp, distinct, dict(self.prefixes))
        if projection is not None:
            bound = set(q.variables)
            for name, tok in zip(projection, proj_toks):
                if name not in bound:
                    self.fail(f"projected variable {name} does not occur in the pattern", tok)
        return q

    def patterns(self) -> List[TriplePattern]:
        out = []
        while not (self.peek().kind == "punct" and self.peek().text == "}"):
            if self.peek().kind == "eof":
                self.fail("unterminated group pattern")
            s_tok = self.peek()
            s = self.term()
            if isinstance(s, Term) and s.is_literal:
                self.fail("literal not allowed as subject", s_tok)
            p_tok = self.peek()
            p = self.term(predicate=True)
            if isinstance(p, Term) and not p.is_iri:
                self.fail("predicate must be an IRI or variable", p_tok)
            o = self.term()
            out.append(TriplePattern(s, p, o))
            tok = self.peek()
            if tok.kind == "punct" and tok.text == ".":
                self.next()
            elif not (tok.kind == "punct" and tok.text == "}"):
                self.fail("expected '.' or '}'", tok)
        return out

    def resolve_pname(self, tok: _Tok) -> Term:
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            raise UnknownPrefix(f"unknown prefix {prefix!r}", tok.line, tok.col)
        return IRI(self.prefixes[prefix] + local)

    def term(self, predicate: bool = False) -> Slot:
        tok = self.next()
        if tok.kind == "var":
            return "?" + tok.text[1:]
        if tok.kind == "bnode":
            return tok.text
        if tok.kind == "iri":
            iri = tok.text[1:-1]
            if not iri:
                self.fail("empty IRI", tok)
            return IRI(iri)
        if tok.kind == "pname":
            return self.resolve_pname(tok)
        if tok.kind == "word" and tok.text == "a" and predicate:
            return IRI(RDF_TYPE)
        if tok.kind == "string":
            try:
                value = unescape_string(tok.text[1:-1])
            except ValueError as exc:
                self.fail(str(exc), tok)
            nxt = self.peek()
            if nxt.kind == "lang":
                self.next()
                return Literal(value, language=nxt.text[1:])
            if nxt.kind == "dtype":
                self.next()
                dt = self.next()
                if dt.kind == "iri":
                    return Literal(value, datatype=dt.text[1:-1])
                if dt.kind == "pname":
                    return Literal(value, datatype=self.resolve_pname(dt).lexical)
                self.fail("expected datatype IRI", dt)
            return Literal(value)
        self.fail(f"unexpected token {tok.text!r}" if tok.text else "unexpected end of query", tok)


def parse_query(text: str) -> Query:
    """Parse query text; raises QuerySyntaxError (or UnknownPrefix) with a position."""
    return _Parser(text).query()


# -- planning ----------------------------------------------------------------

@dataclass
class PlanStep:
    pattern: TriplePattern
    index: str
    estimate: float

    def __str__(self) -> str:
        return f"{self.pattern}  [{self.index}, est {self.estimate:g}]"


def _index_for(bound: Tuple[bool, bool, bool]) -> str:
    s, p, o = bound
    if s and o and not p:
        return "osp"
    if s:
        return "spo"
    if p:
        return "pos"
    if o:
        return "osp"
    return "scan"


def _const_id(store: TripleStore, slot: Slot):
    """Id for a constant slot; -1 when the term is unknown to the store."""
    if isinstance(slot, str):
        return None
    tid = store.lookup(slot)
    return -1 if tid is None else tid


def plan(query: Query, store: TripleStore) -> List[PlanStep]:
    """Greedy join order.

    Candidates at each step are the patterns sharing a variable with those
    already placed, plus any pattern matching at most one triple (its cross
    product is harmless); when there are none, every remaining pattern.  Each
    candidate's estimate is its index count divided by
    :data:`BOUND_VAR_SELECTIVITY` per already-bound variable, and a pattern
    that still introduces a variable is estimated at no less than one row.
    Ties go to the smaller index count, then to textual order.
    """
    remaining = list(enumerate(query.bgp))
    bound: set = set()
    steps: List[PlanStep] = []
    while remaining:
        scored = []
        for i, pat in remaining:
            ids = [_const_id(store, x) for x in pat]
            base = 0 if -1 in ids else store.count(*ids)
            variables = pat.variables()
            k = sum(1 for x in pat if isinstance(x, str) and x in bound)
            est = base / (BOUND_VAR_SELECTIVITY ** k)
            rank = max(est, 1.0) if any(v not in bound for v in variables) else est
            connected = bool(bound) and any(v in bound for v in variables)
            scored.append(((rank, base, i), est, connected or base <= 1, i, pat))
        pool = [x for x in scored if x[2]] or scored
        _, est, _, i, pat = min(pool, key=lambda x: x[0])
        flags = tuple((not isinstance(x, str)) or x in bound for x in pat)
        steps.append(PlanStep(pat, _index_for(flags), est))
        bound.update(pat.variables())
        remaining = [(j, q) for j, q in remaining if j != i]
    return steps


# -- evaluation --------------------------------------------------------------

class ResultSet:
    """Solutions of a query: one row of term ids per solution."""

    def __init__(self, variables: Sequence[str], rows: List[Tuple[int, ...]]):
        self.variables = list(variables)
        self.rows = rows

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Dict[str, int]]:
        for row in self.rows:
            yield dict(zip(self.variables, row))

    def __getitem__(self, i) -> Dict[str, int]:
        return dict(zip(self.variables, self.rows[i]))

    def term_rows(self, store: TripleStore) -> List[Tuple[Term, ...]]:
        return [tuple(store.term(t) for t in row) for row in self.rows]

    def to_tsv(self, store: TripleStore) -> str:
        lines = ["\t".join(v[1:] for v in self.variables)]
        for row in self.rows:
            lines.append("\t".join(format_term(store.term(t)) for t in row))
        return "\n".join(lines) + "\n"

    def to_json(self, store: TripleStore) -> str:
        out = [{v[1:]: format_term(store.term(t)) for v, t in zip(self.variables, row)}
               for row in self.rows]
        return json.dumps(out, ensure_ascii=False, indent=1)


def evaluate(query: Union[Query, str], store: TripleStore,
             timeout: Optional[float] = None) -> ResultSet:
    """All solutions of ``query`` over ``store`` (bag semantics unless DISTINCT).

    Rows are sorted by their term-id tuples.  ``timeout`` is a wall-clock budget
    in seconds; exceeding it raises :class:`QueryTimeout`.
    """
    if isinstance(query, str):
        query = parse_query(query)
    deadline = None if timeout is None else time.perf_counter() + timeout
    variables = query.result_variables
    steps = plan(query, store)
    compiled = []
    for step in steps:
        ids = [_const_id(store, x) for x in step.pattern]
        if -1 in ids:
            return ResultSet(variables, [])
        compiled.append(tuple(x if isinstance(x, str) else i for x, i in zip(step.pattern, ids)))

    rows: List[Tuple[int, ...]] = []
    ticks = 0

    def solve(depth: int, binding: Dict[str, int]):
        nonlocal ticks
        if depth == len(compiled):
            rows.append(tuple(binding[v] for v in variables))
            return
        pat = compiled[depth]
        lookup = [binding.get(x) if isinstance(x, str) else x for x in pat]
        for t in store.match(*lookup):
            ticks += 1
            if deadline is not None and ticks & 0x3FF == 0 and time.perf_counter() > deadline:
                raise QueryTimeout(f"query exceeded {timeout}s")
            ext = binding
            ok = True
            for slot, val in zip(pat, t):
                if isinstance(slot, str):
                    cur = ext.get(slot)
                    if cur is None:
                        if ext is binding:
                            ext = dict(binding)
                        ext[slot] = val
                    elif cur != val:
                        ok = False
                        break
            if ok:
                solve(depth + 1, ext)

    solve(0, {})
    if query.distinct:
        rows = list(set(rows))
    rows.sort()
    return ResultSet(variables, rows)


def load_query(path) -> Query:
    with open(path, encoding="utf-8") as fh:
        return parse_query(fh.read())
