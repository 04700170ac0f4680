"""Benchmark harness: load, materialize, then run each query R times.

Every measurement is one CSV row ``phase,dataset,mode,query,run,wall_ms,
result_count,status``.  Query rows are per repetition; a ``query`` summary row
with ``run=avg`` follows each query.  Mixed queries (those mentioning
``singletonPropertyOf``) are reported ``n/a`` in plain mode, and timed-out or
n/a queries are excluded from the total.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import time
import warnings
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import QueryTimeout, SprdfError
from ..ntriples import parse_file
from ..query import Query, evaluate, load_query, parse_query
from ..reasoner import default_ruleset, materialize
from ..singleton import DEFAULT_VOCABULARY
from ..store import TripleStore

log = logging.getLogger(__name__)

CSV_FIELDS = ("phase", "dataset", "mode", "query", "run", "wall_ms", "result_count", "status")
DEFAULT_REPETITIONS = 3
DEFAULT_SLOWDOWN_FACTOR = 1.5

OK, TIMEOUT, NA, ERROR, SKIPPED = "ok", "timeout", "n/a", "error", "skipped"


@dataclass
class BenchRow:
    phase: str
    dataset: str
    mode: str
    query: str = ""
    run: str = ""
    wall_ms: Optional[float] = None
    result_count: Optional[int] = None
    status: str = OK

    def as_list(self) -> list:
        ms = "" if self.wall_ms is None else f"{self.wall_ms:.3f}"
        count = "" if self.result_count is None else str(self.result_count)
        return [self.phase, self.dataset, self.mode, self.query, self.run, ms, count, self.status]


@dataclass
class BenchReport:
    mode: str
    dataset: str
    rows: List[BenchRow] = field(default_factory=list)
    inferred_count: Optional[int] = None
    result_sizes: Dict[str, Optional[int]] = field(default_factory=dict)
    query_status: Dict[str, str] = field(default_factory=dict)
    query_ms: Dict[str, float] = field(default_factory=dict)

    def phase_ms(self, phase: str) -> Optional[float]:
        for row in self.rows:
            if row.phase == phase:
                return row.wall_ms
        return None

    @property
    def total_query_ms(self) -> float:
        """Sum of average query times, excluding n/a, timed-out and failed queries."""
        return sum(ms for name, ms in self.query_ms.items() if self.query_status.get(name) == OK)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in self.rows:
            writer.writerow(row.as_list())
        return buf.getvalue()

    def to_table(self) -> str:
        lines = [f"dataset {self.dataset}  mode {self.mode}"]
        for phase in ("load", "materialize"):
            for row in self.rows:
                if row.phase == phase:
                    ms = "-" if row.wall_ms is None else f"{row.wall_ms:10.1f} ms"
                    extra = f"  {row.result_count} triples" if row.result_count is not None else ""
                    lines.append(f"  {phase:<12} {ms}{extra}  [{row.status}]")
        lines.append(f"  {'query':<12} {'avg ms':>10}  {'results':>8}  status")
        for name, status in self.query_status.items():
            ms = self.query_ms.get(name)
            ms_text = "-" if ms is None or status != OK else f"{ms:.2f}"
            size = self.result_sizes.get(name)
            lines.append(f"  {name:<12} {ms_text:>10}  {'-' if size is None else size:>8}  {status}")
        lines.append(f"  total (ok queries only): {self.total_query_ms:.2f} ms")
        return "\n".join(lines)


def default_queries() -> List[Tuple[str, Query]]:
    """The packaged query set as (name, Query) pairs, sorted by name."""
    root = resources.files("sprdf") / "queries"
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".rq"):
            out.append((entry.name[:-3], parse_query(entry.read_text(encoding="utf-8"))))
    return out


def load_query_dir(path) -> List[Tuple[str, Query]]:
    out = []
    for name in sorted(os.listdir(path)):
        if name.endswith(".rq"):
            out.append((name[:-3], load_query(os.path.join(path, name))))
    return out


def is_mixed(query: Query) -> bool:
    return query.mentions(DEFAULT_VOCABULARY.singleton_property_of)


def run_bench(mode: str, datasets: Sequence[str],
              queries: Optional[Sequence[Tuple[str, Query]]] = None,
              budget: Optional[float] = None, repetitions: int = DEFAULT_REPETITIONS,
              include_meta_axiom: bool = True, dataset_label: Optional[str] = None) -> BenchReport:
    """Run the load / materialize / query protocol for one store mode.

    ``budget`` is the per-query wall-clock limit in seconds.  Errors in a phase
    are recorded as rows and skip the phases that depend on it.
    """
    if mode not in ("plain", "sp"):
        raise ValueError(f"mode must be plain or sp, not {mode!r}")
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    queries = default_queries() if queries is None else list(queries)
    label = dataset_label or "+".join(os.path.basename(d) for d in datasets)
    report = BenchReport(mode, label)

    store = TripleStore()
    t0 = time.perf_counter()
    load_ok = True
    try:
        for path in datasets:
            result = parse_file(path, store)
            for diag in result.diagnostics:
                log.warning("%s:%s", path, diag)
    except OSError as exc:
        load_ok = False
        log.error("load failed: %s", exc)
    report.rows.append(BenchRow("load", label, mode, wall_ms=(time.perf_counter() - t0) * 1000,
                                result_count=len(store), status=OK if load_ok else ERROR))

    mat_ok = load_ok
    if load_ok:
        t0 = time.perf_counter()
        try:
            res = materialize(store, default_ruleset(include_meta_axiom))
            report.inferred_count = res.inferred_count
            status = OK
        except SprdfError as exc:
            log.error("materialize failed: %s", exc)
            mat_ok, status = False, ERROR
        report.rows.append(BenchRow("materialize", label, mode,
                                    wall_ms=(time.perf_counter() - t0) * 1000,
                                    result_count=report.inferred_count, status=status))
    else:
        report.rows.append(BenchRow("materialize", label, mode, status=SKIPPED))

    for name, query in queries:
        if not mat_ok:
            report.query_status[name] = SKIPPED
            report.result_sizes[name] = None
            report.rows.append(BenchRow("query", label, mode, name, "avg", status=SKIPPED))
            continue
        if mode == "plain" and is_mixed(query):
            report.query_status[name] = NA
            report.result_sizes[name] = None
            report.rows.append(BenchRow("query", label, mode, name, "avg", status=NA))
            continue
        times, size, status = [], None, OK
        for run in range(1, repetitions + 1):
            t0 = time.perf_counter()
            try:
                size = len(evaluate(query, store, timeout=budget))
            except QueryTimeout:
                status = TIMEOUT
            ms = (time.perf_counter() - t0) * 1000
            report.rows.append(BenchRow("query", label, mode, name, str(run), ms,
                                        size if status == OK else None, status))
            if status != OK:
                break
            times.append(ms)
        avg = sum(times) / len(times) if times and status == OK else None
        report.query_status[name] = status
        report.result_sizes[name] = size if status == OK else None
        if avg is not None:
            report.query_ms[name] = avg
        report.rows.append(BenchRow("query", label, mode, name, "avg", avg,
                                    report.result_sizes[name], status))
    return report


@dataclass
class PairComparison:
    plain: BenchReport
    sp: BenchReport
    slowdown: Optional[float]
    factor: float
    mismatched: List[str]

    @property
    def within_factor(self) -> bool:
        return self.slowdown is not None and self.slowdown <= self.factor


def compare_pair(plain: BenchReport, sp: BenchReport,
                 factor: float = DEFAULT_SLOWDOWN_FACTOR) -> PairComparison:
    """Soft performance check over queries that succeeded in both modes.

    Emits a warning (never raises) when the sp/plain total time exceeds ``factor``.
    """
    shared = [q for q, st in plain.query_status.items()
              if st == OK and sp.query_status.get(q) == OK]
    p_total = sum(plain.query_ms[q] for q in shared)
    s_total = sum(sp.query_ms[q] for q in shared)
    slowdown = s_total / p_total if p_total > 0 else None
    mismatched = [q for q in shared if plain.result_sizes[q] != sp.result_sizes[q]]
    cmp = PairComparison(plain, sp, slowdown, factor, mismatched)
    if slowdown is not None and slowdown > factor:
        warnings.warn(f"sp-mode queries took {slowdown:.2f}x plain mode (soft limit {factor}x)",
                      RuntimeWarning, stacklevel=2)
    return cmp
