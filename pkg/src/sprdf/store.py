"""Dictionary-encoded triple store with SPO, POS and OSP indexes.

Terms are interned to dense integer ids (first interned, first numbered) and
triples are kept as ``(s, p, o)`` id tuples in three nested-dict indexes.  The
store follows a single-writer, multi-reader contract: callers serialize
mutations, and any number of readers may call :meth:`TripleStore.match` or
:meth:`TripleStore.stats` between mutations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Set

from .errors import LiteralSubject, NonIriPredicate, UnknownTermId
from .terms import Term, TermKind

# Leaves are insertion-ordered dicts used as ordered sets.
Index = Dict[int, Dict[int, Dict[int, None]]]


class Triple(NamedTuple):
    s: int
    p: int
    o: int


class Origin(enum.Enum):
    BASE = "base"
    INFERRED = "inferred"


@dataclass(frozen=True)
class StoreStats:
    term_count: int
    triple_count: int
    base_count: int
    inferred_count: int


def _index_add(index: Index, a: int, b: int, c: int) -> None:
    inner = index.get(a)
    if inner is None:
        index[a] = {b: {c: None}}
        return
    leaf = inner.get(b)
    if leaf is None:
        inner[b] = {c: None}
    else:
        leaf[c] = None


class TripleStore:
    """A deduplicating set of triples over interned terms."""

    def __init__(self) -> None:
        self._terms: List[Term] = []
        self._kinds: List[TermKind] = []
        self._ids: Dict[Term, int] = {}
        self._spo: Index = {}
        self._pos: Index = {}
        self._osp: Index = {}
        self._s_count: Dict[int, int] = {}
        self._p_count: Dict[int, int] = {}
        self._o_count: Dict[int, int] = {}
        self._inferred: Set[Triple] = set()
        # Insertion sequence number per triple; lets callers recover assertion order.
        self._seq: Dict[Triple, int] = {}
        self._size = 0

    # -- dictionary -------------------------------------------------------

    def intern(self, term: Term) -> int:
        """Return the id of ``term``, assigning the next free id if it is new."""
        tid = self._ids.get(term)
        if tid is not None:
            return tid
        term.validate()
        tid = len(self._terms)
        self._terms.append(term)
        self._kinds.append(term.kind)
        self._ids[term] = tid
        return tid

    def lookup(self, term: Term) -> Optional[int]:
        """Id of an already interned term, or None."""
        return self._ids.get(term)

    def term(self, tid: int) -> Term:
        if not 0 <= tid < len(self._terms):
            raise UnknownTermId(tid)
        return self._terms[tid]

    def kind(self, tid: int) -> TermKind:
        return self._kinds[tid]

    @property
    def term_count(self) -> int:
        return len(self._terms)

    # -- mutation ---------------------------------------------------------

    def check(self, triple: Triple) -> None:
        """Raise if ``triple`` violates the triple invariants for this store."""
        n = len(self._terms)
        for tid in triple:
            if not (isinstance(tid, int) and 0 <= tid < n):
                raise UnknownTermId(tid)
        if self._kinds[triple[0]] is TermKind.LITERAL:
            raise LiteralSubject(f"literal subject {self._terms[triple[0]]}")
        if self._kinds[triple[1]] is not TermKind.IRI:
            raise NonIriPredicate(f"predicate {self._terms[triple[1]]} is not an IRI")

    def well_formed(self, s: int, p: int) -> bool:
        """Cheap check used by the reasoner to drop ill-formed conclusions."""
        return self._kinds[s] is not TermKind.LITERAL and self._kinds[p] is TermKind.IRI

    def insert(self, triple: Triple, origin: Origin = Origin.BASE) -> bool:
        """Add ``triple``; return True iff it was not already present.

        Re-asserting an inferred triple as base input flips its flag to base.
        """
        triple = Triple(*triple)
        self.check(triple)
        return self._insert(triple, origin)

    def _insert(self, triple: Triple, origin: Origin) -> bool:
        s, p, o = triple
        inner = self._spo.get(s)
        if inner is not None:
            leaf = inner.get(p)
            if leaf is not None and o in leaf:
                if origin is Origin.BASE:
                    self._inferred.discard(triple)
                return False
        _index_add(self._spo, s, p, o)
        _index_add(self._pos, p, o, s)
        _index_add(self._osp, o, s, p)
        self._s_count[s] = self._s_count.get(s, 0) + 1
        self._p_count[p] = self._p_count.get(p, 0) + 1
        self._o_count[o] = self._o_count.get(o, 0) + 1
        if origin is Origin.INFERRED:
            self._inferred.add(triple)
        self._seq[triple] = self._size
        self._size += 1
        return True

    def add(self, s: Term, p: Term, o: Term, origin: Origin = Origin.BASE) -> bool:
        """Intern the three terms and insert the resulting triple."""
        return self.insert(Triple(self.intern(s), self.intern(p), self.intern(o)), origin)

    def update(self, triples: Iterable[Triple], origin: Origin = Origin.BASE) -> int:
        added = 0
        for t in triples:
            if self.insert(t, origin):
                added += 1
        return added

    # -- reads ------------------------------------------------------------

    def __len__(self) -> int:
        return self._size

    def __contains__(self, triple) -> bool:
        s, p, o = triple
        inner = self._spo.get(s)
        if inner is None:
            return False
        leaf = inner.get(p)
        return leaf is not None and o in leaf

    def __iter__(self) -> Iterator[Triple]:
        return self.match()

    def origin(self, triple) -> Optional[Origin]:
        if triple not in self:
            return None
        return Origin.INFERRED if Triple(*triple) in self._inferred else Origin.BASE

    def is_inferred(self, triple) -> bool:
        return triple in self._inferred

    def position(self, triple) -> int:
        """0-based insertion rank of a stored triple (KeyError if absent)."""
        return self._seq[Triple(*triple)]

    def match(self, s: Optional[int] = None, p: Optional[int] = None,
              o: Optional[int] = None) -> Iterator[Triple]:
        """Yield every triple matching the bound positions (None is a wildcard).

        Bound subject uses SPO (OSP when the object is bound too), bound
        predicate uses POS, bound object alone uses OSP.  Order is the index's
        insertion order and therefore deterministic.
        """
        if s is not None:
            if o is not None:
                if p is not None:
                    if (s, p, o) in self:
                        yield Triple(s, p, o)
                    return
                for pp in self._osp.get(o, {}).get(s, ()):
                    yield Triple(s, pp, o)
                return
            inner = self._spo.get(s)
            if inner is None:
                return
            if p is not None:
                for oo in inner.get(p, ()):
                    yield Triple(s, p, oo)
                return
            for pp, objs in inner.items():
                for oo in objs:
                    yield Triple(s, pp, oo)
            return
        if p is not None:
            inner = self._pos.get(p)
            if inner is None:
                return
            if o is not None:
                for ss in inner.get(o, ()):
                    yield Triple(ss, p, o)
                return
            for oo, subjects in inner.items():
                for ss in subjects:
                    yield Triple(ss, p, oo)
            return
        if o is not None:
            for ss, preds in self._osp.get(o, {}).items():
                for pp in preds:
                    yield Triple(ss, pp, o)
            return
        for ss, inner in self._spo.items():
            for pp, objs in inner.items():
                for oo in objs:
                    yield Triple(ss, pp, oo)

    def count(self, s: Optional[int] = None, p: Optional[int] = None,
              o: Optional[int] = None) -> int:
        """Exact number of triples matching a pattern, without enumerating them."""
        if s is not None and p is not None and o is not None:
            return 1 if (s, p, o) in self else 0
        if s is not None and p is not None:
            return len(self._spo.get(s, {}).get(p, ()))
        if p is not None and o is not None:
            return len(self._pos.get(p, {}).get(o, ()))
        if s is not None and o is not None:
            return len(self._osp.get(o, {}).get(s, ()))
        if s is not None:
            return self._s_count.get(s, 0)
        if p is not None:
            return self._p_count.get(p, 0)
        if o is not None:
            return self._o_count.get(o, 0)
        return self._size

    def scan(self, index: str, s: Optional[int] = None, p: Optional[int] = None,
             o: Optional[int] = None) -> Iterator[Triple]:
        """Match by walking one named index ("spo", "pos" or "osp") exhaustively.

        Slow; exists so index consistency can be checked independently of
        :meth:`match`'s index selection.
        """
        if index == "spo":
            table, key = self._spo, lambda a, b, c: Triple(a, b, c)
        elif index == "pos":
            table, key = self._pos, lambda a, b, c: Triple(c, a, b)
        elif index == "osp":
            table, key = self._osp, lambda a, b, c: Triple(b, c, a)
        else:
            raise ValueError(f"unknown index {index!r}")
        for a, inner in table.items():
            for b, leaf in inner.items():
                for c in leaf:
                    t = key(a, b, c)
                    if ((s is None or t.s == s) and (p is None or t.p == p)
                            and (o is None or t.o == o)):
                        yield t

    def stats(self) -> StoreStats:
        inferred = len(self._inferred)
        return StoreStats(
            term_count=len(self._terms),
            triple_count=self._size,
            base_count=self._size - inferred,
            inferred_count=inferred,
        )

    def terms_of(self, triple) -> tuple:
        """Resolve an id triple back to its three Terms."""
        return tuple(self._terms[t] for t in triple)

    def copy(self) -> "TripleStore":
        """Independent copy with identical ids and origin flags."""
        other = TripleStore()
        other._terms = list(self._terms)
        other._kinds = list(self._kinds)
        other._ids = dict(self._ids)
        for t in self._seq:
            other._insert(t, Origin.INFERRED if t in self._inferred else Origin.BASE)
        return other
