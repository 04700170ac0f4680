"""University-domain schema used by the paired generator.

A trimmed, RDFS-only rendering of the univ-bench ontology: class hierarchy,
17 object relations with domains/ranges, and the sub-property chain
``headOf < worksFor < memberOf``.
"""

from ..terms import IRI, RDF_TYPE, RDFS_CLASS, RDFS_DOMAIN, RDFS_RANGE, RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF

UB = "http://swat.cse.lehigh.edu/onto/univ-bench.owl#"
TIME = "http://example.org/lubm-sp/time#"

FROM = IRI(TIME + "from")
TO = IRI(TIME + "to")


def ub(name: str):
    return IRI(UB + name)


SUBCLASSES = [
    ("University", "Organization"),
    ("Department", "Organization"),
    ("ResearchGroup", "Organization"),
    ("Employee", "Person"),
    ("Faculty", "Employee"),
    ("Professor", "Faculty"),
    ("FullProfessor", "Professor"),
    ("AssociateProfessor", "Professor"),
    ("AssistantProfessor", "Professor"),
    ("Chair", "Professor"),
    ("Lecturer", "Faculty"),
    ("Student", "Person"),
    ("UndergraduateStudent", "Student"),
    ("GraduateStudent", "Student"),
    ("TeachingAssistant", "Person"),
    ("Course", "Work"),
    ("GraduateCourse", "Course"),
    ("Publication", "Work"),
]

# name -> (domain, range); None means unconstrained.
OBJECT_RELATIONS = {
    "subOrganizationOf": ("Organization", "Organization"),
    "memberOf": ("Person", "Organization"),
    "worksFor": ("Employee", "Organization"),
    "headOf": (None, "Organization"),
    "member": ("Organization", "Person"),
    "degreeFrom": ("Person", "University"),
    "undergraduateDegreeFrom": ("Person", "University"),
    "mastersDegreeFrom": ("Person", "University"),
    "doctoralDegreeFrom": ("Person", "University"),
    "hasAlumnus": ("University", "Person"),
    "teacherOf": ("Faculty", "Course"),
    "takesCourse": ("Student", "Course"),
    "teachingAssistantOf": ("TeachingAssistant", "Course"),
    "advisor": ("Person", "Professor"),
    "publicationAuthor": ("Publication", "Person"),
    "researchProject": ("ResearchGroup", None),
    "affiliatedOrganizationOf": ("Organization", "Organization"),
}

SUBPROPERTIES = [
    ("worksFor", "memberOf"),
    ("headOf", "worksFor"),
    ("undergraduateDegreeFrom", "degreeFrom"),
    ("mastersDegreeFrom", "degreeFrom"),
    ("doctoralDegreeFrom", "degreeFrom"),
]

DATATYPE_PROPERTIES = ["name", "emailAddress", "telephone", "researchInterest"]

# Relations carrying temporal metadata: five with from/to, five with from only.
DEFAULT_SP_RELATIONS = (
    ("worksFor", 2),
    ("headOf", 2),
    ("memberOf", 2),
    ("advisor", 2),
    ("teachingAssistantOf", 2),
    ("undergraduateDegreeFrom", 1),
    ("mastersDegreeFrom", 1),
    ("doctoralDegreeFrom", 1),
    ("takesCourse", 1),
    ("teacherOf", 1),
)


def schema_triples():
    """The schema as (s, p, o) Term triples, in a fixed order."""
    rdf_type, sub_class = IRI(RDF_TYPE), IRI(RDFS_SUBCLASSOF)
    out = []
    classes = []
    for child, parent in SUBCLASSES:
        for c in (child, parent):
            if c not in classes:
                classes.append(c)
    for c in classes:
        out.append((ub(c), rdf_type, IRI(RDFS_CLASS)))
    for child, parent in SUBCLASSES:
        out.append((ub(child), sub_class, ub(parent)))
    for name, (dom, rng) in OBJECT_RELATIONS.items():
        if dom is not None:
            out.append((ub(name), IRI(RDFS_DOMAIN), ub(dom)))
        if rng is not None:
            out.append((ub(name), IRI(RDFS_RANGE), ub(rng)))
    for child, parent in SUBPROPERTIES:
        out.append((ub(child), IRI(RDFS_SUBPROPERTYOF), ub(parent)))
    return out
