"""Command line entry point: ``sprdf <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from typing import List, Optional

from ..errors import ConfigError, SprdfError
from ..ntriples import dump, parse_file, parse_line
from ..query import evaluate, load_query, parse_query, plan
from ..reasoner import DEFAULT_RULE_NAMES, RULES, default_ruleset, explain, materialize, render_derivation
from ..store import Triple, TripleStore
from .audit import audit_pair
from .bench import DEFAULT_REPETITIONS, DEFAULT_SLOWDOWN_FACTOR, compare_pair, load_query_dir, run_bench
from .generator import GenConfig, generate, parse_relations

log = logging.getLogger("sprdf")


class CliError(Exception):
    """Runtime failure reported on stderr with exit status 1."""


def _load(paths: List[str]) -> TripleStore:
    store = TripleStore()
    for path in paths:
        try:
            result = parse_file(path, store)
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
        for diag in result.diagnostics:
            print(f"{path}:{diag}", file=sys.stderr)
    return store


def _ruleset(args):
    names = DEFAULT_RULE_NAMES if not args.rules else [r.strip() for r in args.rules.split(",") if r.strip()]
    try:
        return default_ruleset(include_meta_axiom=not args.no_meta_axiom, names=names)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _add_reasoning_flags(p):
    p.add_argument("--rules", metavar="LIST",
                   help=f"comma-separated rule names (default: {','.join(DEFAULT_RULE_NAMES)}; "
                        f"known: {','.join(RULES)})")
    p.add_argument("--no-meta-axiom", action="store_true",
                   help="do not inject singletonPropertyOf subPropertyOf subPropertyOf")
    p.add_argument("--strategy", choices=("naive", "seminaive"), default="seminaive",
                   help="fixpoint strategy (default: seminaive)")


def cmd_generate(args) -> int:
    overrides = dict(universities=args.universities, seed=args.seed, out_dir=args.out,
                     emit_data_triples=True if args.emit_data_triples else None)
    if args.sp_relations:
        overrides["sp_relations"] = parse_relations(args.sp_relations)
    if args.config:
        config = GenConfig.from_file(args.config, **overrides)
    else:
        config = GenConfig(**{k: v for k, v in overrides.items() if v is not None}).validate()
    if not config.out_dir:
        raise ConfigError("--out is required")
    report = generate(config)
    print(report.to_json())
    return 0


def cmd_load_check(args) -> int:
    store = TripleStore()
    errors = 0
    for path in args.files:
        try:
            result = parse_file(path, store)
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
        for diag in result.diagnostics:
            print(f"{path}:{diag}", file=sys.stderr)
        errors += sum(1 for d in result.diagnostics if d.severity == "error")
        print(f"{path}: {result.triples_added} triples added, {len(result.diagnostics)} diagnostics")
    st = store.stats()
    print(f"terms {st.term_count}  triples {st.triple_count}  base {st.base_count}  "
          f"inferred {st.inferred_count}")
    return 1 if errors else 0


def cmd_materialize(args) -> int:
    store = _load(args.files)
    res = materialize(store, _ruleset(args), args.strategy, trace=bool(args.trace),
                      max_triples=args.max_triples)
    print(f"inferred {res.inferred_count} triples in {res.rounds} rounds", file=sys.stderr)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            dump(store, fh, args.origin)
    else:
        dump(store, sys.stdout, args.origin)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
            fh.writelines(line + "\n" for line in res.trace.lines(store))
    return 0


def cmd_query(args) -> int:
    store = _load(args.files)
    try:
        query = load_query(args.query) if args.query else parse_query(args.text)
    except OSError as exc:
        raise CliError(f"cannot read {args.query}: {exc.strerror or exc}") from None
    if args.materialize:
        materialize(store, _ruleset(args), args.strategy)
    if args.plan:
        for step in plan(query, store):
            print(step, file=sys.stderr)
    result = evaluate(query, store, timeout=args.timeout)
    sys.stdout.write(result.to_json(store) + "\n" if args.format == "json" else result.to_tsv(store))
    return 0


def cmd_explain(args) -> int:
    store = _load(args.files)
    text = args.triple.strip()
    if not text.endswith("."):
        text += " ."
    try:
        parsed = parse_line(text)
    except ValueError as exc:
        raise CliError(f"cannot parse --triple: {exc}") from None
    if parsed is None:
        raise CliError("--triple is empty")
    res = materialize(store, _ruleset(args), args.strategy, trace=True)
    ids = [store.lookup(t) for t in parsed]
    if None in ids:
        raise CliError("triple is not entailed (unknown term)")
    for d in explain(res.trace, Triple(*ids)):
        print(render_derivation(store, d))
    return 0


def cmd_bench(args) -> int:
    queries = load_query_dir(args.queries) if args.queries else None
    if args.pair:
        plain = run_bench("plain", [os.path.join(args.pair, "plain.nt")], queries, args.timeout,
                          args.repetitions, dataset_label="plain.nt")
        sp = run_bench("sp", [os.path.join(args.pair, "sp.nt")], queries, args.timeout,
                       args.repetitions, dataset_label="sp.nt")
        reports = [plain, sp]
    else:
        if not args.data:
            raise ConfigError("bench needs --data FILE... or --pair DIR")
        reports = [run_bench(args.mode, args.data, queries, args.timeout, args.repetitions,
                             include_meta_axiom=not args.no_meta_axiom)]
    csv_text = reports[0].to_csv()
    for extra in reports[1:]:
        csv_text += extra.to_csv().split("\n", 1)[1]
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    for r in reports:
        print(r.to_table(), file=sys.stderr)
    if args.pair:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            cmp = compare_pair(reports[0], reports[1], args.factor)
        ratio = "n/a" if cmp.slowdown is None else f"{cmp.slowdown:.3f}"
        print(f"sp/plain query time ratio: {ratio} (soft limit {args.factor}; "
              f"reference 1.10-1.12)", file=sys.stderr)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        if cmp.mismatched:
            print(f"result size mismatch in: {', '.join(cmp.mismatched)}", file=sys.stderr)
            return 1
    return 0


def cmd_audit(args) -> int:
    result = audit_pair(args.plain, args.sp)
    print(json.dumps({
        "plain_triple_count": result.plain_triple_count,
        "sp_triple_count": result.sp_triple_count,
        "sp_count": result.sp_count,
        "ratio": result.ratio,
        "relation_counts": result.relation_counts,
        "data_triples_present": result.data_triples_present,
        "problems": result.problems,
    }, indent=2, sort_keys=True))
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sprdf",
        description="Triple store, RDFS reasoner and benchmark for singleton-property RDF.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a paired plain/sp dataset")
    p.add_argument("--universities", type=int, help="number of universities (default 1)")
    p.add_argument("--seed", type=int, help="PRNG seed (default 0)")
    p.add_argument("--out", help="output directory for plain.nt and sp.nt")
    p.add_argument("--emit-data-triples", action="store_true",
                   help="also assert the data triple next to each singleton graph")
    p.add_argument("--sp-relations", metavar="LIST",
                   help="override temporal relations, e.g. 'worksFor:2,takesCourse:1'")
    p.add_argument("--config", help="key = value config file; flags override it")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("load-check", help="parse files and print store statistics")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_load_check)

    p = sub.add_parser("materialize", help="compute the closure and dump it as N-Triples")
    p.add_argument("files", nargs="+")
    _add_reasoning_flags(p)
    p.add_argument("--origin", choices=("all", "base", "inferred"), default="all",
                   help="which triples to write (default: all)")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--trace", metavar="FILE", help="write one derivation line per inferred triple")
    p.add_argument("--max-triples", type=int, help="triple ceiling (0 disables; default 10x input)")
    p.set_defaults(func=cmd_materialize)

    p = sub.add_parser("query", help="run one query; prints TSV or JSON rows")
    p.add_argument("files", nargs="+")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--query", "-q", metavar="FILE", help=".rq file")
    g.add_argument("--text", help="query text")
    p.add_argument("--materialize", action="store_true",
                   help="materialize first (without it, entailed triples are invisible)")
    _add_reasoning_flags(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--timeout", type=float, help="wall-clock budget in seconds")
    p.add_argument("--plan", action="store_true", help="print the join plan to stderr")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="load, materialize and time the query set")
    p.add_argument("--data", nargs="+", metavar="FILE", help="dataset files for one run")
    p.add_argument("--mode", choices=("plain", "sp"), default="sp",
                   help="store mode; mixed queries are n/a in plain mode")
    p.add_argument("--pair", metavar="DIR", help="run plain.nt and sp.nt from DIR and compare")
    p.add_argument("--queries", metavar="DIR", help=".rq directory (default: packaged set)")
    p.add_argument("--repetitions", type=int, default=DEFAULT_REPETITIONS,
                   help=f"runs per query, averaged (default {DEFAULT_REPETITIONS})")
    p.add_argument("--timeout", type=float, help="per-query budget in seconds")
    p.add_argument("--factor", type=float, default=DEFAULT_SLOWDOWN_FACTOR,
                   help=f"soft sp/plain slowdown limit (default {DEFAULT_SLOWDOWN_FACTOR})")
    p.add_argument("--no-meta-axiom", action="store_true", help="materialize without the meta axiom")
    p.add_argument("--csv", metavar="FILE", help="write CSV rows here instead of stdout")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("explain", help="print the derivation chain of an inferred triple")
    p.add_argument("files", nargs="+")
    p.add_argument("--triple", required=True, help='N-Triples triple, e.g. "<ex:a> <ex:p> <ex:b>"')
    _add_reasoning_flags(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("audit", help="cross-check a generated pair and its size arithmetic")
    p.add_argument("plain")
    p.add_argument("sp")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"sprdf {args.command}: {exc}", file=sys.stderr)
        return 2
    except (CliError, SprdfError, OSError) as exc:
        print(f"sprdf {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
