"""Forward-chaining RDFS materialization.

Rules are triple templates over variables (strings starting with ``?``) and
constant :class:`~sprdf.terms.Term` values.  :func:`materialize` computes the
least fixpoint of a :class:`Ruleset` over the store's triples plus the
ruleset's axioms, either naively (re-join everything every round) or
semi-naively (join only the previous round's delta against the store).

With the singleton meta axiom installed, the data triple behind a singleton
property falls out of two rdfs7 steps::

    (p_i singletonPropertyOf p) + (singletonPropertyOf subPropertyOf subPropertyOf)
        => (p_i subPropertyOf p)
    (s p_i o) + (p_i subPropertyOf p)
        => (s p o)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .errors import NotInferred, ResourceLimit
from .singleton import DEFAULT_VOCABULARY, SpVocabulary, TermTriple
from .store import Origin, Triple, TripleStore
from .terms import (
    IRI,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    Term,
)

log = logging.getLogger(__name__)

Slot = Union[str, Term]
Template = Tuple[Slot, Slot, Slot]

DEFAULT_MAX_ROUNDS = 10_000
DEFAULT_TRIPLE_FACTOR = 10
# Floor for the default triple ceiling so tiny or empty inputs are not capped.
MIN_TRIPLE_CEILING = 1_000


def is_var(slot) -> bool:
    return isinstance(slot, str) and slot.startswith("?")


@dataclass(frozen=True)
class Rule:
    name: str
    premises: Tuple[Template, ...]
    conclusion: Template

    def __post_init__(self):
        if not self.premises:
            raise ValueError(f"rule {self.name} has no premises")
        bound = {x for pat in self.premises for x in pat if is_var(x)}
        free = [x for x in self.conclusion if is_var(x) and x not in bound]
        if free:
            raise ValueError(f"rule {self.name}: conclusion variables {free} not bound by premises")
        for pat in self.premises + (self.conclusion,):
            for slot in pat:
                if not is_var(slot) and not isinstance(slot, Term):
                    raise ValueError(f"rule {self.name}: bad template slot {slot!r}")

    def __str__(self) -> str:
        def fmt(pat):
            return "(" + " ".join(x if is_var(x) else x.n3() for x in pat) + ")"
        return f"{self.name}: {', '.join(map(fmt, self.premises))} => {fmt(self.conclusion)}"


_TYPE = IRI(RDF_TYPE)
_DOMAIN = IRI(RDFS_DOMAIN)
_RANGE = IRI(RDFS_RANGE)
_SPO = IRI(RDFS_SUBPROPERTYOF)
_SCO = IRI(RDFS_SUBCLASSOF)

RULES: Dict[str, Rule] = {
    r.name: r
    for r in (
        Rule("rdfs2", (("?p", _DOMAIN, "?c"), ("?x", "?p", "?y")), ("?x", _TYPE, "?c")),
        Rule("rdfs3", (("?p", _RANGE, "?c"), ("?x", "?p", "?y")), ("?y", _TYPE, "?c")),
        Rule("rdfs5", (("?p", _SPO, "?q"), ("?q", _SPO, "?r")), ("?p", _SPO, "?r")),
        # Data premise first so traces read rdfs7(usage, schema).
        Rule("rdfs7", (("?x", "?p", "?y"), ("?p", _SPO, "?q")), ("?x", "?q", "?y")),
        Rule("rdfs9", (("?c", _SCO, "?d"), ("?x", _TYPE, "?c")), ("?x", _TYPE, "?d")),
        Rule("rdfs11", (("?c", _SCO, "?d"), ("?d", _SCO, "?e")), ("?c", _SCO, "?e")),
    )
}
DEFAULT_RULE_NAMES = ("rdfs2", "rdfs3", "rdfs5", "rdfs7", "rdfs9", "rdfs11")


@dataclass(frozen=True)
class Ruleset:
    rules: Tuple[Rule, ...]
    axioms: Tuple[TermTriple, ...] = ()

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate rule names in {names}")

    @property
    def names(self) -> List[str]:
        return [r.name for r in self.rules]


def rules_by_name(names: Iterable[str]) -> Tuple[Rule, ...]:
    out = []
    for name in names:
        try:
            out.append(RULES[name])
        except KeyError:
            raise ValueError(f"unknown rule {name!r}; known: {', '.join(RULES)}") from None
    return tuple(out)


def default_ruleset(include_meta_axiom: bool = True,
                    vocab: SpVocabulary = DEFAULT_VOCABULARY,
                    names: Sequence[str] = DEFAULT_RULE_NAMES) -> Ruleset:
    """The six RDFS rules plus the singleton axioms (meta axiom optional)."""
    return Ruleset(rules_by_name(names), vocab.axioms(include_meta_axiom))


@dataclass(frozen=True)
class Derivation:
    conclusion: Triple
    rule: str
    premises: Tuple[Triple, ...]


class Trace:
    """First derivation recorded for every triple the reasoner added."""

    def __init__(self):
        self.derivations: Dict[Triple, Derivation] = {}

    def __contains__(self, triple) -> bool:
        return tuple(triple) in self.derivations

    def __len__(self) -> int:
        return len(self.derivations)

    def get(self, triple) -> Optional[Derivation]:
        return self.derivations.get(tuple(triple))

    def lines(self, store: TripleStore) -> List[str]:
        return [render_derivation(store, d) for d in self.derivations.values()]


def render_derivation(store: TripleStore, d: Derivation) -> str:
    from .ntriples import format_triple

    premises = ", ".join(format_triple(store, p).rstrip(" .") for p in d.premises)
    return f"{format_triple(store, d.conclusion).rstrip(' .')} ⇐ {d.rule}({premises})"


@dataclass
class MaterializeResult:
    inferred_count: int
    rounds: int
    trace: Optional[Trace] = None


# -- rule compilation and firing --------------------------------------------

class _CompiledRule:
    """A rule with constants resolved to term ids and cached join plans."""

    def __init__(self, rule: Rule, store: TripleStore):
        self.name = rule.name
        self.premises = [tuple(x if is_var(x) else store.intern(x) for x in pat)
                         for pat in rule.premises]
        self.conclusion = tuple(x if is_var(x) else store.intern(x) for x in rule.conclusion)
        self._plans: Dict[int, tuple] = {}

    def plan(self, first: int) -> tuple:
        """Join plan when premise ``first`` drives the join.

        Returns ``(steps, inverse)``.  Each step is ``(key, new, same)``: ``key``
        holds per slot a constant id, an already-bound variable name or None;
        ``new`` lists ``(slot, variable)`` pairs the step binds; ``same`` lists
        slot pairs that must agree because a new variable repeats.  ``inverse``
        maps premise index to step index.
        """
        cached = self._plans.get(first)
        if cached is not None:
            return cached
        order = [first] + [i for i in range(len(self.premises)) if i != first]
        bound: Set[str] = set()
        steps = []
        for i in order:
            key, new, same, seen = [], [], [], {}
            for slot, x in enumerate(self.premises[i]):
                if not is_var(x) or x in bound:
                    key.append(x)
                elif x in seen:
                    key.append(None)
                    same.append((slot, seen[x]))
                else:
                    key.append(None)
                    seen[x] = slot
                    new.append((slot, x))
            bound.update(seen)
            steps.append((tuple(key), tuple(new), tuple(same)))
        cached = (steps, tuple(order.index(i) for i in range(len(order))))
        self._plans[first] = cached
        return cached


def _bind(pattern, triple, binding) -> Optional[dict]:
    """Extend ``binding`` so ``pattern`` matches ``triple``; None on conflict."""
    out = dict(binding)
    for slot, value in zip(pattern, triple):
        if isinstance(slot, str):
            prev = out.get(slot)
            if prev is None:
                out[slot] = value
            elif prev != value:
                return None
        elif slot != value:
            return None
    return out


def _resolve(pattern, binding):
    return tuple(binding.get(x) if isinstance(x, str) else x for x in pattern)


def _fire(rule: _CompiledRule, store: TripleStore, first: int,
          candidates: Iterable[Triple]) -> Iterator[Tuple[Triple, Tuple[Triple, ...]]]:
    """Yield (conclusion, premises) for instantiations whose ``first`` premise
    comes from ``candidates``; the remaining premises are matched in ``store``.
    """
    steps, inverse = rule.plan(first)
    (head_key, head_new, head_same), rest = steps[0], steps[1:]
    head_consts = [(slot, k) for slot, k in enumerate(head_key) if k is not None]
    conclusion = rule.conclusion
    match = store.match
    for t in candidates:
        if any(t[slot] != k for slot, k in head_consts) or any(t[a] != t[b] for a, b in head_same):
            continue
        partial = [({v: t[slot] for slot, v in head_new}, (t,))]
        for key, new, same in rest:
            nxt = []
            for binding, used in partial:
                args = [binding[k] if k.__class__ is str else k for k in key]
                for u in match(*args):
                    if same and any(u[a] != u[b] for a, b in same):
                        continue
                    if new:
                        b2 = dict(binding)
                        for slot, v in new:
                            b2[v] = u[slot]
                    else:
                        b2 = binding
                    nxt.append((b2, used + (u,)))
            partial = nxt
        for binding, used in partial:
            c = Triple(*[binding[k] if k.__class__ is str else k for k in conclusion])
            yield c, tuple(used[j] for j in inverse)


def _by_constants(pattern, store: TripleStore) -> Iterator[Triple]:
    s, p, o = (None if isinstance(x, str) else x for x in pattern)
    return store.match(s, p, o)


def _collect(store: TripleStore, found: Dict[Triple, Derivation], rule: _CompiledRule,
             hits) -> None:
    for c, used in hits:
        if c in found or c in store or not store.well_formed(c.s, c.p):
            continue
        found[c] = Derivation(c, rule.name, used)


def apply_rule_once(store: TripleStore, rule: Rule) -> Set[Triple]:
    """All new, well-formed conclusions of one rule over the current store.

    Rule constants are interned (the dictionary may grow) but no triple is
    added.
    """
    compiled = _CompiledRule(rule, store)
    found: Dict[Triple, Derivation] = {}
    _collect(store, found, compiled,
             _fire(compiled, store, 0, list(_by_constants(compiled.premises[0], store))))
    return set(found)


class _Delta:
    """Triples new in the last round, bucketed by predicate."""

    def __init__(self, triples: Iterable[Triple]):
        self.by_p: Dict[int, List[Triple]] = {}
        self.all: List[Triple] = []
        for t in triples:
            self.by_p.setdefault(t.p, []).append(t)
            self.all.append(t)

    def __len__(self):
        return len(self.all)

    def matching(self, pattern) -> Iterable[Triple]:
        s, p, o = (None if isinstance(x, str) else x for x in pattern)
        pool = self.all if p is None else self.by_p.get(p, ())
        if s is None and o is None:
            return pool
        return [t for t in pool if (s is None or t.s == s) and (o is None or t.o == o)]


def _round_naive(store: TripleStore, rules: List[_CompiledRule]) -> Dict[Triple, Derivation]:
    found: Dict[Triple, Derivation] = {}
    for rule in rules:
        # Drive the join from the premise with the fewest candidates.
        counts = [store.count(*(None if isinstance(x, str) else x for x in pat))
                  for pat in rule.premises]
        first = counts.index(min(counts))
        cands = list(_by_constants(rule.premises[first], store))
        _collect(store, found, rule, _fire(rule, store, first, cands))
    return found


def _round_seminaive(store: TripleStore, rules: List[_CompiledRule],
                     delta: _Delta) -> Dict[Triple, Derivation]:
    found: Dict[Triple, Derivation] = {}
    for rule in rules:
        for i, pat in enumerate(rule.premises):
            cands = delta.matching(pat)
            if cands:
                _collect(store, found, rule, _fire(rule, store, i, cands))
    return found


def materialize(store: TripleStore, ruleset: Optional[Ruleset] = None,
                strategy: str = "seminaive", trace: bool = False,
                max_rounds: int = DEFAULT_MAX_ROUNDS,
                max_triples: Optional[int] = None) -> MaterializeResult:
    """Extend ``store`` to the least fixpoint of ``ruleset`` (default ruleset if None).

    Axioms absent from the store are added first; every triple added here is
    flagged inferred.  ``max_triples`` defaults to ten times the input size
    (base triples plus axioms, at least :data:`MIN_TRIPLE_CEILING`); pass 0 to
    disable.  Exceeding either ceiling raises :class:`ResourceLimit` with the
    store left at the last completed round.
    """
    if strategy not in ("naive", "seminaive"):
        raise ValueError(f"unknown strategy {strategy!r}")
    ruleset = default_ruleset() if ruleset is None else ruleset
    tr = Trace() if trace else None
    if max_triples is None:
        max_triples = max(DEFAULT_TRIPLE_FACTOR * (len(store) + len(ruleset.axioms)),
                          MIN_TRIPLE_CEILING)

    start = len(store)
    axiom_ids = []
    for s, p, o in ruleset.axioms:
        t = Triple(store.intern(s), store.intern(p), store.intern(o))
        if store.insert(t, Origin.INFERRED):
            axiom_ids.append(t)
    rules = [_CompiledRule(r, store) for r in ruleset.rules]

    delta = _Delta(store.match()) if strategy == "seminaive" else None
    rounds = 0
    while True:
        if strategy == "naive":
            found = _round_naive(store, rules)
        else:
            found = _round_seminaive(store, rules, delta)
        if not found:
            break
        if rounds >= max_rounds:
            raise ResourceLimit(f"round ceiling {max_rounds} reached", rounds, len(store))
        if max_triples and len(store) + len(found) > max_triples:
            raise ResourceLimit(
                f"triple ceiling {max_triples} exceeded ({len(store) + len(found)} triples)",
                rounds, len(store))
        rounds += 1
        for c in found:
            store._insert(c, Origin.INFERRED)
        if tr is not None:
            tr.derivations.update(found)
        if delta is not None:
            delta = _Delta(found)
        log.debug("round %d: %d new triples", rounds, len(found))
    return MaterializeResult(len(store) - start, rounds, tr)


# -- explanation -------------------------------------------------------------

def explain(trace: Trace, triple) -> List[Derivation]:
    """One proof of ``triple``: derivations in dependency order, ending with it.

    Premises without a recorded derivation (base triples and axioms) are leaves.
    """
    triple = Triple(*triple)
    if triple not in trace:
        raise NotInferred(f"{triple} was not derived by the reasoner")
    out: List[Derivation] = []
    done: Set[Triple] = set()
    stack = [(triple, False)]
    while stack:
        t, expanded = stack.pop()
        if t in done:
            continue
        d = trace.get(t)
        if expanded:
            done.add(t)
            out.append(d)
            continue
        stack.append((t, True))
        for p in reversed(d.premises):
            if p in trace and p not in done:
                stack.append((p, False))
    return out


def replay(store: TripleStore, d: Derivation) -> bool:
    """Check a derivation by re-applying its rule to its premises."""
    rule = _CompiledRule(RULES[d.rule], store)
    if len(d.premises) != len(rule.premises):
        return False
    binding = {}
    for pat, t in zip(rule.premises, d.premises):
        binding = _bind(pat, t, binding)
        if binding is None:
            return False
    return Triple(*_resolve(rule.conclusion, binding)) == d.conclusion


def closure(store: TripleStore, ruleset: Optional[Ruleset] = None,
            strategy: str = "seminaive", **kwargs) -> TripleStore:
    """Materialize a copy of ``store`` and return it, leaving the input untouched."""
    other = store.copy()
    materialize(other, ruleset, strategy, **kwargs)
    return other
