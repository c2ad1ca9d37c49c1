"""Four-facet question complexity: length, requirement, linguistic, syntactic.

Facets:
  c0  character count of the raw text (Unicode scalar values, spaces kept);
  c1  count of extracted requirement primitives -- concepts, properties,
      relationships and filters, plus one for an aggregation need and one
      for MULTIPLE cardinality;
  c2  surface counts from the POS layer -- noun chunks, verbs (VERB/AUX),
      prepositions (ADP), coordinating conjunctions (CCONJ) and modifiers
      (ADJ/ADV); the interrogative kind is carried along, not summed;
  c3  dependency-tree structure -- token count plus tree depth plus the
      number of arcs labelled nsubj, dobj, prep, acl, relcl, conj or agent.

Dependency labels are matched case-insensitively and on subtype parts
("acl:relcl" counts once). Files declaring ``dep_scheme: ud`` additionally
map "case" to prep and "obj" to dobj.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import CompetencyQuestion, InputError, ParseAnnotation, RequirementPrimitives
from .stats import mean_std

VERB_POS = frozenset({"VERB", "AUX"})
MODIFIER_POS = frozenset({"ADJ", "ADV"})
COMPLEX_RELATIONS = frozenset({"nsubj", "dobj", "prep", "acl", "relcl", "conj", "agent"})
_UD_ALIASES = {"case": "prep", "obj": "dobj"}


@dataclass(frozen=True)
class ComplexityProfile:
    cq_id: str
    c0: int
    c1: int
    c2: int
    c3: int
    interrogative: str


def c1_requirement(p: RequirementPrimitives) -> int:
    return (len(p.concepts) + len(p.properties) + len(p.relationships) + len(p.filters)
            + (1 if p.aggregation else 0)
            + (1 if p.cardinality == "MULTIPLE" else 0))


def c2_linguistic(a: ParseAnnotation) -> int:
    pos = [t.pos.upper() for t in a.tokens]
    return (a.noun_chunks
            + sum(1 for p in pos if p in VERB_POS)
            + sum(1 for p in pos if p == "ADP")
            + sum(1 for p in pos if p == "CCONJ")
            + sum(1 for p in pos if p in MODIFIER_POS))


def _matches_complex_relation(dep: str, dep_scheme: str) -> bool:
    parts = dep.lower().split(":")
    for part in parts:
        if part in COMPLEX_RELATIONS:
            return True
        if dep_scheme == "ud" and _UD_ALIASES.get(part) in COMPLEX_RELATIONS:
            return True
    return False


def tree_depth(a: ParseAnnotation) -> int:
    """Maximum number of edges from the root to any token.

    Walks the tree from the root; any token not reached lies on a head
    cycle, which the single-root invariant alone cannot rule out.
    """
    n = len(a.tokens)
    children: list[list[int]] = [[] for _ in range(n)]
    root = a.root
    for i, tok in enumerate(a.tokens):
        if i != root:
            children[tok.head].append(i)
    depth = 0
    seen = 1
    frontier = [root]
    while frontier:
        nxt = [c for i in frontier for c in children[i]]
        if nxt:
            depth += 1
            seen += len(nxt)
        frontier = nxt
    if seen != n:
        raise InputError(f"cyclic head references: {a.cq_id}")
    return depth


def c3_syntactic(a: ParseAnnotation) -> int:
    relation_arcs = sum(
        1 for i, tok in enumerate(a.tokens)
        if i != a.root and _matches_complex_relation(tok.dep, a.dep_scheme)
    )
    return len(a.tokens) + tree_depth(a) + relation_arcs


def complexity_profile(
    cq: CompetencyQuestion,
    a: ParseAnnotation,
    p: RequirementPrimitives,
) -> ComplexityProfile:
    if not (cq.cq_id == a.cq_id == p.cq_id):
        raise InputError(f"cq_id mismatch: {cq.cq_id} / {a.cq_id} / {p.cq_id}")
    return ComplexityProfile(
        cq_id=cq.cq_id,
        c0=len(cq.text),
        c1=c1_requirement(p),
        c2=c2_linguistic(a),
        c3=c3_syntactic(a),
        interrogative=a.interrogative,
    )


def set_complexity(profiles: list[ComplexityProfile]) -> dict[str, tuple[float, float]]:
    """Mean and sample std for each facet over a set of profiles."""
    if not profiles:
        raise InputError("empty set")
    return {facet: mean_std([float(getattr(pr, facet)) for pr in profiles])
            for facet in ("c0", "c1", "c2", "c3")}
