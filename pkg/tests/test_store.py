import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sprdf.errors import LiteralSubject, MalformedTerm, NonIriPredicate, UnknownTermId
from sprdf.store import Origin, Triple, TripleStore
from sprdf.terms import RDF, BNode, IRI, Literal, RDF_LANGSTRING, Term, TermKind

SP_OF = IRI(RDF + "singletonPropertyOf")

terms = st.one_of(
    st.builds(IRI, st.text(min_size=1, max_size=12)),
    st.builds(BNode, st.from_regex(r"[A-Za-z0-9_]{1,6}", fullmatch=True)),
    st.builds(Literal, st.text(max_size=8)),
    st.builds(lambda v: Literal(v, language="en"), st.text(max_size=4)),
    st.builds(lambda v: Literal(v, datatype="http://www.w3.org/2001/XMLSchema#int"),
              st.from_regex(r"[0-9]{1,3}", fullmatch=True)),
)


def small_store(seed, n_terms=8, n_triples=40):
    rng = random.Random(seed)
    store = TripleStore()
    nodes = [store.intern(IRI(f"ex:n{i}")) for i in range(n_terms)]
    preds = [store.intern(IRI(f"ex:p{i}")) for i in range(3)]
    lits = [store.intern(Literal(str(i))) for i in range(3)]
    for _ in range(n_triples):
        store.insert(Triple(rng.choice(nodes), rng.choice(preds), rng.choice(nodes + lits)))
    return store


class TestTerms:
    def test_iri_must_be_non_empty(self):
        with pytest.raises(MalformedTerm):
            TripleStore().intern(IRI(""))

    @pytest.mark.parametrize("label", ["", "a b", "-x", ".x", "x.", "a:b"])
    def test_blank_label_shape(self, label):
        with pytest.raises(MalformedTerm):
            TripleStore().intern(BNode(label))

    @pytest.mark.parametrize("label", ["b0", "x-y", "a.b", "é", "0_a·b"])
    def test_blank_label_accepted(self, label):
        TripleStore().intern(BNode(label))

    def test_literal_cannot_have_both_tag_and_datatype(self):
        bad = Term(TermKind.LITERAL, "x", datatype="ex:dt", language="en")
        with pytest.raises(MalformedTerm):
            TripleStore().intern(bad)

    def test_language_implies_langstring(self):
        assert Literal("chat", language="fr").effective_datatype == RDF_LANGSTRING

    def test_no_iri_normalization(self):
        store = TripleStore()
        assert store.intern(IRI("http://a.example/x")) != store.intern(IRI("HTTP://a.example/x"))

    def test_literal_fields_all_count(self):
        store = TripleStore()
        ids = {store.intern(t) for t in (Literal("1"), Literal("1", language="en"),
                                         Literal("1", datatype="ex:int"))}
        assert len(ids) == 3


class TestIntern:
    def test_idempotent(self):
        store = TripleStore()
        a = store.intern(IRI("ex:a"))
        assert store.intern(IRI("ex:a")) == a
        assert store.term_count == 1

    def test_first_interned_first_numbered(self):
        store = TripleStore()
        assert [store.intern(IRI(f"ex:{i}")) for i in range(5)] == [0, 1, 2, 3, 4]

    def test_unknown_id(self):
        with pytest.raises(UnknownTermId):
            TripleStore().term(0)

    @given(st.lists(terms, max_size=40))
    def test_injective_and_idempotent(self, seq):
        store = TripleStore()
        ids = [store.intern(t) for t in seq]
        assert [store.intern(t) for t in seq] == ids
        assert len(set(ids)) == len(set(seq))
        for t, i in zip(seq, ids):
            assert store.term(i) == t


class TestInsert:
    def test_dedup(self):
        store = TripleStore()
        assert store.add(IRI("ex:A"), IRI("ex:p"), IRI("ex:B")) is True
        assert store.add(IRI("ex:A"), IRI("ex:p"), IRI("ex:B")) is False
        assert len(store) == 1

    def test_literal_subject(self):
        with pytest.raises(LiteralSubject):
            TripleStore().add(Literal("x"), IRI("ex:p"), IRI("ex:B"))

    def test_non_iri_predicate(self):
        with pytest.raises(NonIriPredicate):
            TripleStore().add(IRI("ex:A"), BNode("b"), IRI("ex:B"))

    def test_unknown_ids(self):
        store = TripleStore()
        store.intern(IRI("ex:A"))
        with pytest.raises(UnknownTermId):
            store.insert(Triple(0, 0, 7))

    def test_base_assertion_wins_over_inferred(self):
        store = TripleStore()
        t = Triple(store.intern(IRI("ex:a")), store.intern(IRI("ex:p")), store.intern(IRI("ex:b")))
        store.insert(t, Origin.INFERRED)
        assert store.origin(t) is Origin.INFERRED
        assert store.insert(t) is False
        assert store.origin(t) is Origin.BASE
        store.insert(t, Origin.INFERRED)
        assert store.origin(t) is Origin.BASE

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 2), st.integers(0, 5)),
                    max_size=30, unique=True),
           st.integers(1, 4), st.randoms(use_true_random=False))
    def test_shuffled_multiset_dedups(self, triples, k, rng):
        store = TripleStore()
        for i in range(6):
            store.intern(IRI(f"ex:{i}"))
        bag = [Triple(*t) for t in triples] * k
        rng.shuffle(bag)
        store.update(bag)
        assert len(store) == len(triples)
        for t in triples:
            assert t in store


class TestExampleStore:
    def test_size(self, example):
        # Ten singleton-graph triples plus one sub-property link.
        assert len(example) == 11
        st_ = example.stats()
        assert (st_.triple_count, st_.base_count, st_.inferred_count) == (11, 11, 0)

    def test_singleton_links(self, example):
        spo = example.lookup(SP_OF)
        subjects = sorted(example.term(t.s).lexical for t in example.match(p=spo))
        assert subjects == ["ex:hasAdvisor#3", "ex:worksFor#1", "ex:worksFor#2"]

    def test_data_triple_absent_before_reasoning(self, example):
        a, p = example.lookup(IRI("ex:ProfessorA")), example.lookup(IRI("ex:worksFor"))
        assert list(example.match(a, p, None)) == []

    def test_universal_wildcard(self, example):
        assert len(list(example.match())) == 11


class TestMatch:
    def test_empty_store_stats(self):
        st_ = TripleStore().stats()
        assert (st_.term_count, st_.triple_count, st_.base_count, st_.inferred_count) == (0, 0, 0, 0)

    def test_no_match_is_empty(self, example):
        assert list(example.match(p=example.lookup(IRI("ex:from")), o=example.lookup(IRI("ex:to")))) == []

    def test_insertion_order_within_leaf(self):
        store = TripleStore()
        s, p = store.intern(IRI("ex:s")), store.intern(IRI("ex:p"))
        objs = [store.intern(Literal(str(v))) for v in (9, 3, 7, 1)]
        for o in objs:
            store.insert(Triple(s, p, o))
        assert [t.o for t in store.match(s, p)] == objs

    @pytest.mark.parametrize("seed", range(5))
    def test_every_pattern_shape_agrees_with_every_index(self, seed):
        store = small_store(seed)
        everything = set(store.match())
        for t in list(everything)[:10]:
            for mask in range(8):
                pat = [x if mask & (1 << i) else None for i, x in enumerate(t)]
                expected = {u for u in everything
                            if all(b is None or b == v for b, v in zip(pat, u))}
                got = list(store.match(*pat))
                assert len(got) == len(set(got))
                assert set(got) == expected
                assert store.count(*pat) == len(expected)
                for index in ("spo", "pos", "osp"):
                    assert set(store.scan(index, *pat)) == expected

    def test_scan_rejects_unknown_index(self):
        with pytest.raises(ValueError):
            list(TripleStore().scan("pso"))

    @given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 2), st.integers(0, 4)), max_size=25))
    def test_insert_then_fully_bound_match(self, triples):
        store = TripleStore()
        for i in range(5):
            store.intern(IRI(f"ex:{i}"))
        for t in triples:
            store.insert(Triple(*t))
        for t in triples:
            assert list(store.match(*t)) == [Triple(*t)]


class TestStats:
    @settings(max_examples=50)
    @given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 2), st.integers(0, 4), st.booleans()),
                    max_size=30))
    def test_base_plus_inferred_is_total(self, rows):
        store = TripleStore()
        for i in range(5):
            store.intern(IRI(f"ex:{i}"))
        for s, p, o, inferred in rows:
            store.insert(Triple(s, p, o), Origin.INFERRED if inferred else Origin.BASE)
        st_ = store.stats()
        assert st_.base_count + st_.inferred_count == st_.triple_count == len(store)

    def test_copy_is_independent(self, example):
        other = example.copy()
        other.add(IRI("ex:x"), IRI("ex:y"), IRI("ex:z"))
        assert len(other) == len(example) + 1
        assert set(example.match()) <= set(other.match())
