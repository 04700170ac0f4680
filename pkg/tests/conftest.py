import os

import pytest

from sprdf.ntriples import parse_file
from sprdf.store import TripleStore
from sprdf.terms import BNode, IRI, Literal, TermKind

DATA = os.path.join(os.path.dirname(__file__), "data")
EXAMPLE = os.path.join(DATA, "worked_example.nt")
EXAMPLE_CLOSURE = os.path.join(DATA, "worked_example_closure.nt")


def term_string(term):
    """Oracle-side spelling of a term (no escaping; test data avoids it)."""
    if term.kind is TermKind.IRI:
        return f"<{term.lexical}>"
    if term.kind is TermKind.BLANK:
        return f"_:{term.lexical}"
    text = f'"{term.lexical}"'
    if term.language:
        return f"{text}@{term.language}"
    if term.datatype:
        return f"{text}^^<{term.datatype}>"
    return text


def store_strings(store, triples=None):
    """Set of oracle-form triples for ``triples`` (default: the whole store)."""
    triples = store.match() if triples is None else triples
    return {tuple(term_string(x) for x in store.terms_of(t)) for t in triples}


def term_from_string(text):
    """Inverse of :func:`term_string` for plain literals, IRIs and blank nodes."""
    if text.startswith("<"):
        return IRI(text[1:-1])
    if text.startswith("_:"):
        return BNode(text[2:])
    return Literal(text[1:-1])


def store_from_strings(rows):
    store = TripleStore()
    for row in rows:
        store.add(*(term_from_string(x) for x in row))
    return store


def load_example():
    store = TripleStore()
    result = parse_file(EXAMPLE, store)
    assert result.ok, result.diagnostics
    return store


@pytest.fixture
def example():
    return load_example()


# One verdict line per acceptance criterion, filled in by test_acceptance.py.
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
