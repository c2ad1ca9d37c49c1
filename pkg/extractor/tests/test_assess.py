import json

import pytest

from cqextract.assess import (
    ResponseParseError,
    RuleBasedJudge,
    parse_primitives_response,
    parse_relevance_response,
    run_with_retry,
)
from conftest import VALIDATED_RELEVANCE


def test_parse_bare_digit():
    assert parse_relevance_response("4") == 4
    assert parse_relevance_response(" Score: 3 (inferable) ") == 3


def test_parse_json_object():
    assert parse_relevance_response('{"relevance": 2, "rationale": "contextual"}') == 2


def test_parse_out_of_range_rejected():
    with pytest.raises(ResponseParseError):
        parse_relevance_response("9")
    with pytest.raises(ResponseParseError):
        parse_relevance_response('{"relevance": 7}')
    with pytest.raises(ResponseParseError):
        parse_relevance_response("no score here")


def test_parse_primitives_dedupes_and_validates():
    doc = {"concepts": ["Item", "item", "Loan"], "properties": [],
           "relationships": ["loanedTo"], "filters": [],
           "cardinality": "multiple", "aggregation": False}
    parsed = parse_primitives_response(json.dumps(doc))
    assert parsed["concepts"] == ["Item", "Loan"]
    assert parsed["cardinality"] == "MULTIPLE"
    with pytest.raises(ResponseParseError):
        parse_primitives_response("not json at all")
    with pytest.raises(ResponseParseError):
        parse_primitives_response(json.dumps({"cardinality": "MANY"}))


def test_retry_then_failure_record():
    failures = []
    calls = []

    def flaky():
        calls.append(1)
        raise ResponseParseError("bad output")

    assert run_with_retry(flaky, "cq-9", failures) is None
    assert len(calls) == 2  # one retry
    assert failures == [{"cq_id": "cq-9", "error": "bad output"}]


def test_retry_succeeds_second_time():
    failures = []
    state = {"n": 0}

    def once():
        state["n"] += 1
        if state["n"] == 1:
            raise ResponseParseError("hiccup")
        return 4

    assert run_with_retry(once, "cq-1", failures) == 4
    assert failures == []


def test_rule_judge_hand_validated_subset(story_text):
    judge = RuleBasedJudge(story_text)
    agreements = 0
    for question, expected in VALIDATED_RELEVANCE:
        got, _rationale = judge.relevance(question)
        agreements += got == expected
    assert len(VALIDATED_RELEVANCE) == 12
    assert agreements >= 10, f"only {agreements}/12 agreements"


def test_rule_judge_deterministic(story_text):
    judge = RuleBasedJudge(story_text)
    first = [judge.relevance(q)[0] for q, _ in VALIDATED_RELEVANCE]
    second = [judge.relevance(q)[0] for q, _ in VALIDATED_RELEVANCE]
    assert first == second
