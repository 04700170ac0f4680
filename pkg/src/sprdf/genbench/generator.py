"""Paired plain / singleton-property dataset generator.

One seeded pass builds a university instance graph.  The plain dataset holds
the instance triples as-is; the singleton dataset replaces every triple whose
predicate is a temporal relation with its singleton graph (one or two year
literals as meta values).  Both datasets carry the schema and the singleton
vocabulary, so the plain and singleton knowledge bases differ only in how the
temporal relations are represented.
"""

from __future__ import annotations

import configparser
import json
import os
import random
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

from ..errors import ConfigError
from ..ntriples import write_file
from ..singleton import DEFAULT_VOCABULARY, SingletonMinter, install_vocabulary, reify
from ..store import Triple, TripleStore
from ..terms import IRI, RDF_TYPE, Literal
from .schema import DEFAULT_SP_RELATIONS, FROM, OBJECT_RELATIONS, TO, UB, schema_triples, ub

YEAR_MIN, YEAR_MAX = 1980, 2015

# Per-entity cardinality ranges (inclusive).
RANGES = {
    "departments": (3, 5),
    "full_professors": (2, 4),
    "associate_professors": (3, 5),
    "assistant_professors": (2, 4),
    "lecturers": (1, 3),
    "undergrads_per_faculty": (3, 5),
    "grads_per_faculty": (1, 2),
    "research_groups": (1, 3),
    "courses_per_faculty": (1, 2),
    "grad_courses_per_faculty": (1, 2),
    "undergrad_courses_taken": (2, 4),
    "grad_courses_taken": (1, 3),
    "publications_per_professor": (2, 5),
    "publications_per_lecturer": (0, 2),
}
# Degrees point at universities 0..max(universities, DEGREE_POOL)-1.
DEGREE_POOL = 20


@dataclass
class GenConfig:
    universities: int = 1
    seed: int = 0
    sp_relations: Tuple[Tuple[str, int], ...] = DEFAULT_SP_RELATIONS
    emit_data_triples: bool = False
    out_dir: Optional[str] = None
    plain_name: str = "plain.nt"
    sp_name: str = "sp.nt"

    def validate(self) -> "GenConfig":
        if not isinstance(self.universities, int) or self.universities < 1:
            raise ConfigError("universities must be a positive integer")
        if not isinstance(self.seed, int) or not -(2 ** 63) <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit integer")
        names = [name for name, _ in self.sp_relations]
        if len(names) != len(set(names)):
            raise ConfigError("duplicate relation in sp_relations")
        for name, arity in self.sp_relations:
            if name not in OBJECT_RELATIONS:
                raise ConfigError(f"{name!r} is not an object relation of the schema")
            if arity not in (1, 2):
                raise ConfigError(f"temporal arity of {name} must be 1 or 2, not {arity}")
        return self

    @classmethod
    def from_file(cls, path, **overrides) -> "GenConfig":
        """Read ``key = value`` lines (an optional ``[generate]`` header is allowed)."""
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if not text.lstrip().startswith("["):
            text = "[generate]\n" + text
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if not parser.has_section("generate"):
            raise ConfigError(f"{path}: expected a [generate] section")
        section = parser["generate"]
        kwargs = {}
        try:
            if "universities" in section:
                kwargs["universities"] = section.getint("universities")
            if "seed" in section:
                kwargs["seed"] = section.getint("seed")
            if "emit_data_triples" in section:
                kwargs["emit_data_triples"] = section.getboolean("emit_data_triples")
            if "sp_relations" in section:
                kwargs["sp_relations"] = parse_relations(section["sp_relations"])
            for key in ("out_dir", "plain_name", "sp_name"):
                if key in section:
                    kwargs[key] = section[key]
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs).validate()


def parse_relations(text: str) -> Tuple[Tuple[str, int], ...]:
    """Parse ``"worksFor:2, takesCourse:1"`` into relation/arity pairs."""
    out = []
    for item in text.replace("\n", ",").split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, arity = item.partition(":")
        if not sep:
            raise ConfigError(f"relation {item!r} needs an arity, e.g. {item}:1")
        out.append((name.strip(), int(arity)))
    return tuple(out)


@dataclass
class GenReport:
    plain_triple_count: int
    sp_triple_count: int
    sp_count: int
    ratio: float
    instance_triple_count: int = 0
    schema_triple_count: int = 0
    relation_counts: Dict[str, int] = field(default_factory=dict)
    relation_arity: Dict[str, int] = field(default_factory=dict)
    emit_data_triples: bool = False
    plain_path: Optional[str] = None
    sp_path: Optional[str] = None

    def expected_sp_triple_count(self) -> int:
        """Singleton triple count implied by the plain count and relation counts.

        Each reified triple trades one data triple for a usage triple, a
        ``singletonPropertyOf`` link and one triple per temporal value.
        """
        per = 2 if self.emit_data_triples else 1
        return self.plain_triple_count + sum(
            k * (per + self.relation_arity[rel]) for rel, k in self.relation_counts.items())

    def expected_ratio(self) -> float:
        return self.expected_sp_triple_count() / self.plain_triple_count

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


@dataclass
class GeneratedPair:
    plain: TripleStore
    sp: TripleStore
    report: GenReport
    instance_triples: List[tuple]


class _Builder:
    def __init__(self, config: GenConfig):
        self.rng = random.Random(config.seed)
        self.config = config
        self.triples: List[tuple] = []
        self._seen = set()

    def add(self, s, p, o):
        t = (s, p, o)
        if t not in self._seen:
            self._seen.add(t)
            self.triples.append(t)

    def between(self, key):
        lo, hi = RANGES[key]
        return self.rng.randint(lo, hi)

    def person(self, iri, cls, dept, local):
        self.add(iri, IRI(RDF_TYPE), ub(cls))
        self.add(iri, ub("name"), Literal(local))
        self.add(iri, ub("emailAddress"), Literal(f"{local}@{dept.lexical[len('http://www.'):]}"))
        self.add(iri, ub("telephone"), Literal(f"xxx-xxx-{self.rng.randint(0, 9999):04d}"))

    def degree_university(self):
        pool = max(self.config.universities, DEGREE_POOL)
        return IRI(f"http://www.University{self.rng.randrange(pool)}.edu")

    def build(self):
        for u in range(self.config.universities):
            self.university(u)
        return self.triples

    def university(self, u):
        uni = IRI(f"http://www.University{u}.edu")
        self.add(uni, IRI(RDF_TYPE), ub("University"))
        self.add(uni, ub("name"), Literal(f"University{u}"))
        for d in range(self.between("departments")):
            self.department(uni, u, d)

    def department(self, uni, u, d):
        rng = self.rng
        base = f"http://www.Department{d}.University{u}.edu"
        dept = IRI(base)
        self.add(dept, IRI(RDF_TYPE), ub("Department"))
        self.add(dept, ub("name"), Literal(f"Department{d}"))
        self.add(dept, ub("subOrganizationOf"), uni)

        faculty = []
        for cls, key in (("FullProfessor", "full_professors"),
                         ("AssociateProfessor", "associate_professors"),
                         ("AssistantProfessor", "assistant_professors"),
                         ("Lecturer", "lecturers")):
            for i in range(self.between(key)):
                faculty.append((IRI(f"{base}/{cls}{i}"), cls, f"{cls}{i}"))
        professors = [f for f in faculty if f[1] != "Lecturer"]

        courses, grad_courses = [], []
        for iri, cls, local in faculty:
            self.person(iri, cls, dept, local)
            self.add(iri, ub("worksFor"), dept)
            self.add(iri, ub("undergraduateDegreeFrom"), self.degree_university())
            self.add(iri, ub("mastersDegreeFrom"), self.degree_university())
            self.add(iri, ub("doctoralDegreeFrom"), self.degree_university())
            if cls != "Lecturer":
                self.add(iri, ub("researchInterest"), Literal(f"Research{rng.randrange(30)}"))
            for _ in range(self.between("courses_per_faculty")):
                c = IRI(f"{base}/Course{len(courses)}")
                courses.append(c)
                self.add(c, IRI(RDF_TYPE), ub("Course"))
                self.add(c, ub("name"), Literal(f"Course{len(courses) - 1}"))
                self.add(iri, ub("teacherOf"), c)
            for _ in range(self.between("grad_courses_per_faculty")):
                c = IRI(f"{base}/GraduateCourse{len(grad_courses)}")
                grad_courses.append(c)
                self.add(c, IRI(RDF_TYPE), ub("GraduateCourse"))
                self.add(c, ub("name"), Literal(f"GraduateCourse{len(grad_courses) - 1}"))
                self.add(iri, ub("teacherOf"), c)
        # First full professor chairs the department.
        self.add(faculty[0][0], ub("headOf"), dept)

        publications = 0
        pub_authors = []
        for iri, cls, local in faculty:
            key = "publications_per_lecturer" if cls == "Lecturer" else "publications_per_professor"
            for _ in range(self.between(key)):
                pub = IRI(f"{iri.lexical}/Publication{publications}")
                publications += 1
                self.add(pub, IRI(RDF_TYPE), ub("Publication"))
                self.add(pub, ub("name"), Literal(pub.lexical.rsplit("/", 1)[1]))
                self.add(pub, ub("publicationAuthor"), iri)
                pub_authors.append(pub)

        n_under = sum(self.between("undergrads_per_faculty") for _ in faculty)
        for i in range(n_under):
            s = IRI(f"{base}/UndergraduateStudent{i}")
            self.person(s, "UndergraduateStudent", dept, f"UndergraduateStudent{i}")
            self.add(s, ub("memberOf"), dept)
            k = min(self.between("undergrad_courses_taken"), len(courses))
            for c in rng.sample(courses, k):
                self.add(s, ub("takesCourse"), c)
            if rng.random() < 0.2:
                self.add(s, ub("advisor"), rng.choice(professors)[0])

        n_grad = sum(self.between("grads_per_faculty") for _ in faculty)
        for i in range(n_grad):
            s = IRI(f"{base}/GraduateStudent{i}")
            self.person(s, "GraduateStudent", dept, f"GraduateStudent{i}")
            self.add(s, ub("memberOf"), dept)
            self.add(s, ub("undergraduateDegreeFrom"), self.degree_university())
            k = min(self.between("grad_courses_taken"), len(grad_courses))
            for c in rng.sample(grad_courses, k):
                self.add(s, ub("takesCourse"), c)
            self.add(s, ub("advisor"), rng.choice(professors)[0])
            if rng.random() < 0.25:
                self.add(s, ub("teachingAssistantOf"), rng.choice(courses))
            if pub_authors and rng.random() < 0.5:
                self.add(rng.choice(pub_authors), ub("publicationAuthor"), s)

        for g in range(self.between("research_groups")):
            grp = IRI(f"{base}/ResearchGroup{g}")
            self.add(grp, IRI(RDF_TYPE), ub("ResearchGroup"))
            self.add(grp, ub("subOrganizationOf"), dept)


def _temporal_meta(rng: random.Random, arity: int):
    if arity == 1:
        return [(FROM, Literal(str(rng.randint(YEAR_MIN, YEAR_MAX))))]
    start = rng.randint(YEAR_MIN, YEAR_MAX - 1)
    end = rng.randint(start + 1, YEAR_MAX)
    return [(FROM, Literal(str(start))), (TO, Literal(str(end)))]


def build_pair(config: GenConfig) -> GeneratedPair:
    """Generate both knowledge bases in memory."""
    config.validate()
    instance = _Builder(config).build()
    schema = schema_triples()
    arity = {UB + name: a for name, a in config.sp_relations}

    plain = TripleStore()
    for s, p, o in schema:
        plain.add(s, p, o)
    install_vocabulary(plain, include_meta_axiom=True)
    for s, p, o in instance:
        plain.add(s, p, o)

    sp = TripleStore()
    for s, p, o in schema:
        sp.add(s, p, o)
    install_vocabulary(sp, include_meta_axiom=True)
    meta_rng = random.Random(f"temporal:{config.seed}")
    minter = SingletonMinter()
    counts = {name: 0 for name, _ in config.sp_relations}
    sp_count = 0
    for s, p, o in instance:
        a = arity.get(p.lexical)
        if a is None:
            sp.add(s, p, o)
            continue
        data = Triple(sp.intern(s), sp.intern(p), sp.intern(o))
        meta = [(sp.intern(m), sp.intern(v)) for m, v in _temporal_meta(meta_rng, a)]
        reify(sp, data, meta, minter, DEFAULT_VOCABULARY)
        if config.emit_data_triples:
            sp.insert(data)
        counts[p.lexical[len(UB):]] += 1
        sp_count += 1

    report = GenReport(
        plain_triple_count=len(plain),
        sp_triple_count=len(sp),
        sp_count=sp_count,
        ratio=len(sp) / len(plain),
        instance_triple_count=len(instance),
        schema_triple_count=len(schema) + len(DEFAULT_VOCABULARY.axioms()),
        relation_counts=counts,
        relation_arity={name: a for name, a in config.sp_relations},
        emit_data_triples=config.emit_data_triples,
    )
    return GeneratedPair(plain, sp, report, instance)


def generate(config: GenConfig) -> GenReport:
    """Generate the pair and write both N-Triples files into ``config.out_dir``."""
    if not config.out_dir:
        raise ConfigError("out_dir is required to write the datasets")
    pair = build_pair(config)
    try:
        os.makedirs(config.out_dir, exist_ok=True)
        plain_path = os.path.join(config.out_dir, config.plain_name)
        sp_path = os.path.join(config.out_dir, config.sp_name)
        write_file(pair.plain, plain_path)
        write_file(pair.sp, sp_path)
    except OSError as exc:
        raise IOError(f"cannot write datasets: {exc}") from exc
    pair.report.plain_path = plain_path
    pair.report.sp_path = sp_path
    return pair.report
