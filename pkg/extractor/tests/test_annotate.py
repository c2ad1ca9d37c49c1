from cqextract.annotate import (
    annotate_text,
    classify_interrogative,
    count_noun_chunks,
    tag,
    tokenize,
)
from cqextract.schemas import validate_annotation_entry


def test_aggregation_prefix_rule():
    ann = annotate_text("How many items are on loan?")
    assert ann["interrogative"] == "AGGREGATION"
    assert ann["primitives"]["aggregation"] is True
    assert ann["primitives"]["cardinality"] == "MULTIPLE"


def test_wh_prefix_rule():
    ann = annotate_text("Which museum loaned the guitar?")
    assert ann["interrogative"] == "WH"
    roots = [i for i, t in enumerate(ann["tokens"]) if t["head"] == i]
    assert len(roots) == 1


def test_boolean_prefix_rule():
    ann = annotate_text("Is the poster currently displayed?")
    assert ann["interrogative"] == "BOOLEAN"
    assert ann["primitives"]["cardinality"] == "EXISTENCE"


def test_other_fallback():
    tokens = tokenize("List every loan.")
    assert classify_interrogative("List every loan.", tag(tokens)) == "OTHER"


def test_single_root_and_heads_in_range():
    for text in (
        "What?",
        "Who donated the guitar?",
        "Which items stored in the vault were loaned to a partner institution and displayed?",
        "Is it?",
        "12?",
    ):
        ann = annotate_text(text)
        entry = {"cq_id": "x", **ann}
        assert validate_annotation_entry(entry) == [], text


def test_noun_chunk_counting():
    tags = tag(tokenize("The famous guitar and the old poster"))
    assert count_noun_chunks(tags) == 2


def test_primitives_deduplicated_case_insensitive():
    ann = annotate_text("Which item relates to the item?")
    concepts = [c.lower() for c in ann["primitives"]["concepts"]]
    assert len(concepts) == len(set(concepts))


def test_agent_preposition_tagged():
    ann = annotate_text("Which items were loaned by the museum?")
    by_token = next(t for t in ann["tokens"] if t["surface"] == "by")
    assert by_token["dep"] == "agent"


def test_deterministic_output():
    first = annotate_text("Which artist is associated with the record?")
    second = annotate_text("Which artist is associated with the record?")
    assert first == second
