import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sprdf.ntriples import (
    canonical_lines,
    format_term,
    loads,
    parse_file,
    parse_line,
    parse_ntriples,
    write_file,
    write_ntriples,
)
from sprdf.reasoner import materialize
from sprdf.store import Origin, TripleStore
from sprdf.terms import BNode, IRI, Literal

from conftest import EXAMPLE

XSD_GYEAR = "http://www.w3.org/2001/XMLSchema#gYear"

# Any code point except surrogates, which cannot be encoded as UTF-8.
chars = st.characters(blacklist_categories=("Cs",))
iris = st.text(chars, min_size=1, max_size=15).map(IRI)
bnodes = st.from_regex(r"[A-Za-z0-9_]{1,8}", fullmatch=True).map(BNode)
langs = st.from_regex(r"[a-z]{1,8}(-[A-Za-z0-9]{1,8}){0,2}", fullmatch=True)
literals = st.one_of(
    st.text(chars, max_size=20).map(Literal),
    st.builds(lambda v, l: Literal(v, language=l), st.text(chars, max_size=10), langs),
    st.builds(lambda v, d: Literal(v, datatype=d), st.text(chars, max_size=10),
              st.text(chars, min_size=1, max_size=10)),
)
triples = st.tuples(st.one_of(iris, bnodes), iris, st.one_of(iris, bnodes, literals))


def store_of(rows):
    store = TripleStore()
    for s, p, o in rows:
        store.add(s, p, o)
    return store


def term_set(store):
    return {store.terms_of(t) for t in store.match()}


class TestParse:
    def test_single_line(self):
        store = TripleStore()
        res = parse_ntriples("<ex:ProfessorA> <ex:worksFor#1> <ex:University1> .\n", store)
        assert (res.triples_added, res.diagnostics) == (1, [])
        assert term_set(store) == {(IRI("ex:ProfessorA"), IRI("ex:worksFor#1"), IRI("ex:University1"))}

    def test_empty_input(self):
        res = parse_ntriples("", TripleStore())
        assert (res.triples_added, res.diagnostics) == (0, [])

    def test_example_fixture(self):
        store = TripleStore()
        res = parse_file(EXAMPLE, store)
        assert res.ok and res.triples_added == 11

    def test_comments_blank_lines_and_crlf(self):
        text = "# header\r\n\r\n<ex:a> <ex:p> <ex:b> . # trailing\r\n   \n<ex:a> <ex:p> _:x .\r"
        store = TripleStore()
        res = parse_ntriples(text, store)
        assert res.ok and res.triples_added == 2

    def test_stream_source_and_bom(self):
        store = TripleStore()
        res = parse_ntriples(io.StringIO("\ufeff<ex:a> <ex:p> <ex:b> ."), store)
        assert res.triples_added == 1

    @pytest.mark.parametrize("line, value", [
        (r'<ex:a> <ex:p> "tab\there" .', "tab\there"),
        (r'<ex:a> <ex:p> "q\"uote\\" .', 'q"uote\\'),
        (r'<ex:a> <ex:p> "é\U0001F600" .', "é\U0001F600"),
        ('<ex:a> <ex:p> "raw ünïcödé" .', "raw ünïcödé"),
    ])
    def test_literal_escapes(self, line, value):
        assert parse_line(line)[2] == Literal(value)

    def test_iri_escape(self):
        assert parse_line(r"<ex:a\u0020b> <ex:p> <ex:c> .")[0] == IRI("ex:a b")

    def test_language_and_datatype(self):
        _, _, o = parse_line('<ex:a> <ex:p> "chat"@fr-CA .')
        assert o == Literal("chat", language="fr-CA")
        _, _, o = parse_line(f'<ex:a> <ex:p> "1994"^^<{XSD_GYEAR}> .')
        assert o == Literal("1994", datatype=XSD_GYEAR)

    def test_no_datatype_inference(self):
        assert parse_line('<ex:a> <ex:p> "1994" .')[2] == Literal("1994")

    @pytest.mark.parametrize("line", [
        "<ex:a> <ex:p> <ex:b>",
        "<ex:a> <ex:p> .",
        '"lit" <ex:p> <ex:b> .',
        "<ex:a> _:b <ex:c> .",
        "<ex:a> <ex:p> <ex:b> . extra",
        '<ex:a> <ex:p> "unterminated .',
        r'<ex:a> <ex:p> "bad \q escape" .',
        "<ex:a b> <ex:p> <ex:c> .",
        "<> <ex:p> <ex:c> .",
        '<ex:a> <ex:p> "x"@ .',
    ])
    def test_malformed_lines_give_one_diagnostic(self, line):
        store = TripleStore()
        res = parse_ntriples(line, store)
        assert res.triples_added == 0 and len(store) == 0
        assert [d.line for d in res.diagnostics] == [1]
        assert res.diagnostics[0].severity == "error"
        assert res.diagnostics[0].column >= 1

    def test_diagnostic_column_points_at_fault(self):
        res = parse_ntriples("<ex:a> <ex:p> <ex:b> ?", TripleStore())
        assert res.diagnostics[0].column == 22

    def test_parse_line_raises_with_column(self):
        with pytest.raises(ValueError) as info:
            parse_line("<ex:a> oops")
        assert info.value.column == 7

    def test_loads_raises_on_any_error(self):
        with pytest.raises(ValueError):
            loads("<ex:a> <ex:p> <ex:b> .\nbroken\n")

    def test_corrupt_line_isolated(self, tmp_path):
        with open(EXAMPLE, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        for k in range(1, len(lines)):
            bad = list(lines)
            bad[k] = bad[k].replace(" .", "")
            store = TripleStore()
            res = parse_ntriples("\n".join(bad), store)
            assert res.triples_added == 10
            assert [d.line for d in res.diagnostics] == [k + 1]


class TestWrite:
    def test_empty_store(self):
        assert write_ntriples(TripleStore()) == ""

    def test_example_lines(self, example):
        out = write_ntriples(example)
        assert out.count("\n") == 11
        assert out.splitlines() == sorted(out.splitlines())

    def test_gyear_line_is_byte_identical(self):
        line = f'<ex:a> <ex:p> "1994"^^<{XSD_GYEAR}> .\n'
        assert write_ntriples(loads(line)) == line

    def test_escaping(self):
        assert format_term(Literal('a"b\\c\nd\x01')) == r'"a\"b\\c\nd\u0001"'
        assert format_term(IRI("ex:a b>")) == r"<ex:a\u0020b\u003E>"

    def test_origin_filter(self, example):
        materialize(example)
        base = write_ntriples(example, "base")
        inferred = write_ntriples(example, "inferred")
        assert base.count("\n") == 11
        assert inferred.count("\n") == len(example) - 11
        assert sorted((base + inferred).splitlines()) == write_ntriples(example).splitlines()
        with pytest.raises(ValueError):
            canonical_lines(example, "derived")

    def test_file_round_trip(self, tmp_path, example):
        path = tmp_path / "out.nt"
        write_file(example, path)
        again = TripleStore()
        assert parse_file(path, again).ok
        assert term_set(again) == term_set(example)
        assert path.read_bytes() == write_ntriples(example).encode("utf-8")

    def test_origin_can_be_set_on_parse(self):
        store = TripleStore()
        parse_ntriples("<ex:a> <ex:p> <ex:b> .", store, Origin.INFERRED)
        assert store.stats().inferred_count == 1


@settings(max_examples=200)
@given(st.lists(triples, max_size=25))
def test_round_trip_property(rows):
    store = store_of(rows)
    text = write_ntriples(store)
    again = TripleStore()
    res = parse_ntriples(text, again)
    assert res.ok, res.diagnostics
    assert term_set(again) == term_set(store)
    assert write_ntriples(again) == text


@given(st.lists(triples, max_size=15), st.randoms(use_true_random=False))
def test_write_ignores_insertion_order(rows, rng):
    shuffled = list(rows)
    rng.shuffle(shuffled)
    assert write_ntriples(store_of(rows)) == write_ntriples(store_of(shuffled))
