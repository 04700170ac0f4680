"""Singleton-property vocabulary and the reify/extract transformation.

A data triple ``(s, p, o)`` annotated with meta pairs ``(m_j, v_j)`` is stored
as a freshly minted property ``p_i`` plus::

    p_i  singletonPropertyOf  p
    s    p_i                  o
    p_i  m_j                  v_j      (one per meta pair)

The data triple itself is not asserted; with :attr:`SpVocabulary.meta_axiom`
installed an RDFS reasoner derives it (see :mod:`sprdf.reasoner`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import AmbiguousSingleton, MintCollision, NonIriPredicate, NotASingleton
from .store import Origin, Triple, TripleStore
from .terms import (
    IRI,
    RDF,
    RDF_PROPERTY,
    RDF_RESOURCE,
    RDF_TYPE,
    RDFS_CLASS,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    Term,
    TermKind,
)

log = logging.getLogger(__name__)

TermTriple = Tuple[Term, Term, Term]
MetaPairs = Sequence[Tuple[int, int]]


@dataclass(frozen=True)
class SpVocabulary:
    """Vocabulary terms for singleton properties.

    ``namespace`` only relocates ``singletonPropertyOf`` and
    ``SingletonProperty``; the rdf/rdfs terms they are described with stay put.
    """

    namespace: str = RDF

    @property
    def singleton_property_of(self) -> Term:
        return IRI(self.namespace + "singletonPropertyOf")

    @property
    def singleton_property(self) -> Term:
        return IRI(self.namespace + "SingletonProperty")

    @property
    def primitive_triples(self) -> Tuple[TermTriple, ...]:
        spo, sp_class = self.singleton_property_of, self.singleton_property
        return (
            (spo, IRI(RDF_TYPE), IRI(RDF_PROPERTY)),
            (spo, IRI(RDF_TYPE), IRI(RDF_RESOURCE)),
            (spo, IRI(RDFS_DOMAIN), sp_class),
            (spo, IRI(RDFS_RANGE), IRI(RDF_PROPERTY)),
            (sp_class, IRI(RDF_TYPE), IRI(RDFS_CLASS)),
            (sp_class, IRI(RDFS_SUBCLASSOF), IRI(RDF_PROPERTY)),
        )

    @property
    def meta_axiom(self) -> TermTriple:
        sub = IRI(RDFS_SUBPROPERTYOF)
        return (self.singleton_property_of, sub, sub)

    def axioms(self, include_meta_axiom: bool = True) -> Tuple[TermTriple, ...]:
        if include_meta_axiom:
            return self.primitive_triples + (self.meta_axiom,)
        return self.primitive_triples


DEFAULT_VOCABULARY = SpVocabulary()


@dataclass
class SingletonDescriptor:
    sp: int
    generic: int
    subject: int
    object: int
    meta: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def data_triple(self) -> Triple:
        return Triple(self.subject, self.generic, self.object)


def default_scheme(generic: str, n: int) -> str:
    sep = "." if "#" in generic else "#"
    return f"{generic}{sep}{n}"


class SingletonMinter:
    """Mints singleton property IRIs from one store-global counter.

    The default scheme appends ``#<n>`` to the generic IRI (``.<n>`` when the
    generic already has a fragment), so numbering runs across properties:
    ``worksFor#1``, ``worksFor#2``, ``hasAdvisor#3``.  ``scheme`` may be a
    callable ``(generic_iri, n) -> iri`` or a format string with ``{generic}``
    and ``{n}`` fields.
    """

    def __init__(self, start: int = 1,
                 scheme: Union[None, str, Callable[[str, int], str]] = None):
        if start < 0:
            raise ValueError("counter must be non-negative")
        self.counter = start
        if scheme is None:
            self._scheme = default_scheme
        elif isinstance(scheme, str):
            self._scheme = lambda generic, n: scheme.format(generic=generic, n=n)
        else:
            self._scheme = scheme
        self._issued = set()

    def peek(self, generic: str) -> str:
        return self._scheme(generic, self.counter)

    def mint(self, store: TripleStore, generic: Term) -> Term:
        iri = self._scheme(generic.lexical, self.counter)
        candidate = IRI(iri)
        existing = store.lookup(candidate)
        if iri in self._issued or (existing is not None and store.count(p=existing) > 0):
            raise MintCollision(f"minted IRI {iri} is already in use as a predicate")
        self.counter += 1
        self._issued.add(iri)
        return candidate


def reify(store: TripleStore, data: Triple, meta: MetaPairs, minter: SingletonMinter,
          vocab: SpVocabulary = DEFAULT_VOCABULARY,
          origin: Origin = Origin.BASE) -> SingletonDescriptor:
    """Write the singleton graph for ``data`` with ``meta`` pairs into ``store``.

    Exactly ``2 + len(meta)`` triples are emitted (usage triple first, then the
    ``singletonPropertyOf`` link, then the meta pairs).  ``data`` itself is not
    inserted.
    """
    s, p, o = data
    generic = store.term(p)
    if generic.kind is not TermKind.IRI:
        raise NonIriPredicate(f"predicate {generic} is not an IRI")
    store.check(Triple(s, p, o))
    for m, v in meta:
        store.check(Triple(s, m, v))
    sp = store.intern(minter.mint(store, generic))
    spo = store.intern(vocab.singleton_property_of)
    store.insert(Triple(s, sp, o), origin)
    store.insert(Triple(sp, spo, p), origin)
    for m, v in meta:
        store.insert(Triple(sp, m, v), origin)
    return SingletonDescriptor(sp, p, s, o, [(m, v) for m, v in meta])


def reify_terms(store: TripleStore, data: TermTriple, meta: Sequence[Tuple[Term, Term]],
                minter: SingletonMinter, vocab: SpVocabulary = DEFAULT_VOCABULARY,
                origin: Origin = Origin.BASE) -> SingletonDescriptor:
    ids = Triple(*(store.intern(t) for t in data))
    pairs = [(store.intern(m), store.intern(v)) for m, v in meta]
    return reify(store, ids, pairs, minter, vocab, origin)


def extract(store: TripleStore, sp: int,
            vocab: SpVocabulary = DEFAULT_VOCABULARY) -> SingletonDescriptor:
    """Recover the data triple and meta pairs a singleton property describes.

    Meta pairs are the asserted ``(sp, m, v)`` triples other than the
    ``singletonPropertyOf`` link and ``rdf:type``, in assertion order; triples
    the reasoner added about ``sp`` are ignored so extraction is stable under
    materialization.
    """
    spo = store.lookup(vocab.singleton_property_of)
    if spo is None:
        raise NotASingleton(f"{store.term(sp)} has no singletonPropertyOf assertion")
    generics = [t.o for t in store.match(sp, spo, None)]
    if not generics:
        raise NotASingleton(f"{store.term(sp)} has no singletonPropertyOf assertion")
    if len(generics) > 1:
        raise AmbiguousSingleton(f"{store.term(sp)} declares {len(generics)} generic properties")
    uses = list(store.match(None, sp, None))
    if not uses:
        raise NotASingleton(f"{store.term(sp)} is never used as a predicate")
    if len(uses) > 1:
        raise AmbiguousSingleton(f"{store.term(sp)} is used for {len(uses)} subject-object pairs")
    rdf_type = store.lookup(IRI(RDF_TYPE))
    about = [t for t in store.match(sp, None, None)
             if t.p != spo and t.p != rdf_type and not store.is_inferred(t)]
    about.sort(key=store.position)
    meta = [(t.p, t.o) for t in about]
    return SingletonDescriptor(sp, generics[0], uses[0].s, uses[0].o, meta)


def install_vocabulary(store: TripleStore, include_meta_axiom: bool = True,
                       vocab: SpVocabulary = DEFAULT_VOCABULARY) -> int:
    added = 0
    for s, p, o in vocab.axioms(include_meta_axiom):
        if store.add(s, p, o):
            added += 1
    return added


def enumerate_singletons(store: TripleStore, vocab: SpVocabulary = DEFAULT_VOCABULARY,
                         errors: Optional[list] = None) -> Iterator[SingletonDescriptor]:
    """Yield a descriptor for every subject of a ``singletonPropertyOf`` triple.

    Malformed singletons are skipped; each is logged and, when ``errors`` is
    given, appended to it as ``(sp, exception)``.
    """
    spo = store.lookup(vocab.singleton_property_of)
    if spo is None:
        return
    seen = set()
    for t in list(store.match(None, spo, None)):
        if t.s in seen:
            continue
        seen.add(t.s)
        try:
            yield extract(store, t.s, vocab)
        except (NotASingleton, AmbiguousSingleton) as exc:
            log.warning("skipping malformed singleton %s: %s", store.term(t.s), exc)
            if errors is not None:
                errors.append((t.s, exc))
