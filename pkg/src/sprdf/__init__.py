"""Embeddable RDF triple store with RDFS materialization and singleton-property support."""

from .errors import (
    AmbiguousSingleton,
    MalformedTerm,
    MintCollision,
    NotASingleton,
    NotInferred,
    QuerySyntaxError,
    QueryTimeout,
    ResourceLimit,
    SprdfError,
)
from .ntriples import parse_ntriples, write_ntriples
from .query import evaluate, parse_query, plan
from .reasoner import Ruleset, default_ruleset, explain, materialize
from .singleton import (
    SingletonMinter,
    SpVocabulary,
    enumerate_singletons,
    extract,
    install_vocabulary,
    reify,
)
from .store import Origin, Triple, TripleStore
from .terms import BNode, IRI, Literal, Term, TermKind

__version__ = "0.1.0"

__all__ = [
    "AmbiguousSingleton",
    "MalformedTerm",
    "MintCollision",
    "NotASingleton",
    "NotInferred",
    "QuerySyntaxError",
    "QueryTimeout",
    "ResourceLimit",
    "SprdfError",
    "parse_ntriples",
    "write_ntriples",
    "evaluate",
    "parse_query",
    "plan",
    "Ruleset",
    "default_ruleset",
    "explain",
    "materialize",
    "SingletonMinter",
    "SpVocabulary",
    "enumerate_singletons",
    "extract",
    "install_vocabulary",
    "reify",
    "Origin",
    "Triple",
    "TripleStore",
    "BNode",
    "IRI",
    "Literal",
    "Term",
    "TermKind",
]
