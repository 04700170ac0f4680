"""RDF terms and the well-known vocabulary IRIs used throughout the package."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional

from .errors import MalformedTerm

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF + "type"
RDF_PROPERTY = RDF + "Property"
RDF_RESOURCE = RDF + "Resource"
RDF_LANGSTRING = RDF + "langString"
RDFS_CLASS = RDFS + "Class"
RDFS_DOMAIN = RDFS + "domain"
RDFS_RANGE = RDFS + "range"
RDFS_SUBCLASSOF = RDFS + "subClassOf"
RDFS_SUBPROPERTYOF = RDFS + "subPropertyOf"

# Blank node labels: letters, digits and '_' first; '-', '.' and U+00B7 may
# follow, but a label never ends with '.'.
_LABEL_START = "A-Za-z0-9_\u00C0-\uFFFF\U00010000-\U000EFFFF"
_LABEL_INNER = _LABEL_START + "\\-\u00B7"
_BNODE_LABEL = re.compile(f"[{_LABEL_START}](?:[{_LABEL_INNER}.]*[{_LABEL_INNER}])?\\Z")
_LANG_TAG = re.compile(r"[A-Za-z]+(-[A-Za-z0-9]+)*\Z")


class TermKind(enum.IntEnum):
    IRI = 0
    BLANK = 1
    LITERAL = 2


@dataclass(frozen=True, slots=True)
class Term:
    """An RDF term.

    Equality is plain field equality: IRIs are opaque strings and are never
    normalized, and a literal's datatype and language tag both take part in
    comparisons.
    """

    kind: TermKind
    lexical: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    def validate(self) -> "Term":
        if self.kind is TermKind.IRI:
            if not self.lexical:
                raise MalformedTerm("IRI must be non-empty")
            if self.datatype is not None or self.language is not None:
                raise MalformedTerm("IRI cannot carry a datatype or language tag")
        elif self.kind is TermKind.BLANK:
            if not _BNODE_LABEL.match(self.lexical):
                raise MalformedTerm(f"invalid blank node label {self.lexical!r}")
            if self.datatype is not None or self.language is not None:
                raise MalformedTerm("blank node cannot carry a datatype or language tag")
        elif self.kind is TermKind.LITERAL:
            if self.datatype is not None and self.language is not None:
                raise MalformedTerm("literal has both a datatype and a language tag")
            if self.datatype == "":
                raise MalformedTerm("literal datatype IRI must be non-empty")
            if self.language is not None and not _LANG_TAG.match(self.language):
                raise MalformedTerm(f"invalid language tag {self.language!r}")
        else:
            raise MalformedTerm(f"unknown term kind {self.kind!r}")
        return self

    @property
    def is_iri(self) -> bool:
        return self.kind is TermKind.IRI

    @property
    def is_blank(self) -> bool:
        return self.kind is TermKind.BLANK

    @property
    def is_literal(self) -> bool:
        return self.kind is TermKind.LITERAL

    @property
    def effective_datatype(self) -> Optional[str]:
        """The datatype a literal actually carries (``rdf:langString`` when tagged)."""
        if self.language is not None:
            return RDF_LANGSTRING
        return self.datatype

    def n3(self) -> str:
        from .ntriples import format_term

        return format_term(self)

    def __str__(self) -> str:
        return self.n3()


def IRI(value: str) -> Term:
    return Term(TermKind.IRI, value)


def BNode(label: str) -> Term:
    return Term(TermKind.BLANK, label)


def Literal(value: str, datatype: Optional[str] = None, language: Optional[str] = None) -> Term:
    return Term(TermKind.LITERAL, value, datatype, language)
