"""Cross-check a generated plain/sp pair from the files alone."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Set

from ..ntriples import parse_file
from ..singleton import DEFAULT_VOCABULARY, enumerate_singletons
from ..store import TripleStore
from .generator import YEAR_MAX, YEAR_MIN
from .schema import FROM, TO, UB, schema_triples


@dataclass
class AuditResult:
    plain_triple_count: int
    sp_triple_count: int
    sp_count: int
    ratio: float
    relation_counts: Dict[str, int]
    data_triples_present: int
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def _term_triples(store: TripleStore) -> Set[tuple]:
    return {store.terms_of(t) for t in store.match()}


def _temporal_problem(store: TripleStore, meta) -> str:
    years: Dict = {FROM: [], TO: []}
    for m, v in meta:
        key = store.term(m)
        if key in years:
            try:
                years[key].append(int(store.term(v).lexical))
            except ValueError:
                return f"non-integer year {store.term(v).lexical!r}"
    if len(years[FROM]) != 1 or len(years[TO]) > 1:
        return f"expected one from and at most one to, got {len(years[FROM])} and {len(years[TO])}"
    start = years[FROM][0]
    if not YEAR_MIN <= start <= YEAR_MAX:
        return f"from year {start} out of range"
    if years[TO] and years[TO][0] < start + 1:
        return f"to year {years[TO][0]} not after from year {start}"
    return ""


def audit_pair(plain_path, sp_path) -> AuditResult:
    """Check that both files encode the same instance data and that the size
    arithmetic holds.

    The sp file's singletons are mapped back to data triples; together with
    its remaining non-schema triples they must equal the plain instance
    triples exactly.  Each singleton must also carry one ``from`` year in
    range and at most one ``to`` year at least a year later.
    """
    plain, sp = TripleStore(), TripleStore()
    problems = []
    for path, store in ((plain_path, plain), (sp_path, sp)):
        result = parse_file(path, store)
        for diag in result.diagnostics:
            problems.append(f"{path}:{diag}")

    fixed = set(schema_triples()) | set(DEFAULT_VOCABULARY.axioms())
    plain_instance = _term_triples(plain) - fixed

    errors: list = []
    descriptors = list(enumerate_singletons(sp, errors=errors))
    for sp_id, exc in errors:
        problems.append(f"malformed singleton {sp.term(sp_id)}: {exc}")

    spo = sp.lookup(DEFAULT_VOCABULARY.singleton_property_of)
    graph_ids = set()
    data = set()
    counts: Dict[str, int] = {}
    extra = 0
    for d in descriptors:
        graph_ids.add((d.subject, d.sp, d.object))
        graph_ids.add((d.sp, spo, d.generic))
        for m, v in d.meta:
            graph_ids.add((d.sp, m, v))
        data.add(sp.terms_of(d.data_triple))
        name = sp.term(d.generic).lexical
        name = name[len(UB):] if name.startswith(UB) else name
        counts[name] = counts.get(name, 0) + 1
        extra += 1 + len(d.meta)
        problem = _temporal_problem(sp, d.meta)
        if problem:
            problems.append(f"singleton {sp.term(d.sp)}: {problem}")
    remainder = {sp.terms_of(t) for t in sp.match() if tuple(t) not in graph_ids} - fixed
    present = len(data & remainder)

    if data | remainder != plain_instance:
        missing = len(plain_instance - (data | remainder))
        surplus = len((data | remainder) - plain_instance)
        problems.append(f"pair mismatch: {missing} plain triples missing from sp, {surplus} extra")
    expected = len(plain) + extra + present
    if expected != len(sp):
        problems.append(f"size arithmetic: expected {expected} sp triples, found {len(sp)}")
    return AuditResult(len(plain), len(sp), len(descriptors), len(sp) / max(len(plain), 1),
                       counts, present, problems)
