import json
import math

import pytest
from hypothesis import given, strategies as st

from valueprobe.core import (
    CIRCLE,
    CODES,
    N_ITEMS,
    ValueCircle,
    ValueId,
    circle_distance,
    human_benchmark_profile,
    load_questionnaire,
    parse_questionnaire,
)
from valueprobe.errors import FileUnreadable, SchemaViolation

values = st.sampled_from(list(ValueId))


def test_circle_order_and_angles():
    assert CODES == ("SDT", "SDA", "ST", "HE", "AC", "POD", "POR", "FAC", "SEP", "SES",
                     "TR", "COR", "COI", "HUM", "BED", "BEC", "UNC", "UNN", "UNT")
    assert CIRCLE.angle(ValueId.SDT) == 0.0
    assert math.isclose(CIRCLE.angle(ValueId.AC), 2 * math.pi * 4 / 19)
    assert CIRCLE.neighbors(ValueId.SDT) == (ValueId.UNT, ValueId.SDA)


def test_value_parse():
    assert ValueId.parse("bec") is ValueId.BEC
    assert ValueId.parse(ValueId.HE) is ValueId.HE
    assert ValueId.BEC.display_name == "Benevolence-Caring"
    with pytest.raises(ValueError):
        ValueId.parse("XYZ")


def test_circle_rejects_non_permutation():
    with pytest.raises(ValueError):
        ValueCircle(tuple(ValueId)[:-1])


@given(values, values)
def test_circle_distance_symmetric_and_bounded(a, b):
    d = circle_distance(a, b)
    assert d == circle_distance(b, a)
    assert 0 <= d <= 9
    assert (d == 0) == (a is b)


@given(values, values, values)
def test_circle_distance_triangle(a, b, c):
    assert circle_distance(a, c) <= circle_distance(a, b) + circle_distance(b, c)


@given(values)
def test_opposite_values_are_nine_apart(v):
    assert circle_distance(v, CIRCLE.at(CIRCLE.position(v) + 9)) == 9
    assert CIRCLE.offset(v, v) == 0


def test_bundled_questionnaire(questionnaire):
    assert len(questionnaire) == N_ITEMS
    idx = questionnaire.value_index_matrix()
    assert len(idx) == 19 and all(len(r) == 3 for r in idx)
    assert sorted(i for r in idx for i in r) == list(range(N_ITEMS))
    pod = [it.index for it in questionnaire.items_for(ValueId.POD)]
    assert pod == [6, 29, 41]
    it = questionnaire.item(6)
    assert it.text("male") != it.text("female")
    with pytest.raises(ValueError):
        it.text("other")


def _doc(questionnaire):
    return {"scale": {"min": 1, "max": 6}, "items": [
        {"index": it.index, "value": it.value.name, "variant": it.variant,
         "text_male": it.text_male, "text_female": it.text_female} for it in questionnaire.items]}


def test_schema_item_count(questionnaire):
    doc = _doc(questionnaire)
    doc["items"].pop()
    with pytest.raises(SchemaViolation, match="item count 56"):
        parse_questionnaire(doc)


def test_schema_duplicate_index(questionnaire):
    doc = _doc(questionnaire)
    doc["items"][1]["index"] = doc["items"][0]["index"]
    with pytest.raises(SchemaViolation, match="duplicate item index: 1"):
        parse_questionnaire(doc)


def test_schema_unbalanced_values(questionnaire):
    doc = _doc(questionnaire)
    hum = next(i for i in doc["items"] if i["value"] == "HUM")
    hum["value"] = "POD"
    with pytest.raises(SchemaViolation, match="POD has 4 items, HUM has 2 items"):
        parse_questionnaire(doc)


def test_schema_missing_gender_text(questionnaire):
    doc = _doc(questionnaire)
    doc["items"][3]["text_female"] = ""
    with pytest.raises(SchemaViolation):
        parse_questionnaire(doc)


def test_schema_bad_scale(questionnaire):
    doc = _doc(questionnaire)
    doc["scale"] = {"min": 1, "max": 7}
    with pytest.raises(SchemaViolation):
        parse_questionnaire(doc)


def test_load_from_path(questionnaire, tmp_path):
    p = tmp_path / "q.json"
    p.write_text(json.dumps(_doc(questionnaire)))
    assert load_questionnaire(p).items == questionnaire.items
    with pytest.raises(FileUnreadable):
        load_questionnaire(tmp_path / "missing.json")
    p.write_text("{not json")
    with pytest.raises(SchemaViolation):
        load_questionnaire(p)


def test_benchmark_ordering():
    h = human_benchmark_profile()
    ranked = h.by_rank()
    assert ranked[0] is ValueId.BEC and ranked[-1] is ValueId.POD
    means = [h.means[v] for v in ranked]
    assert means == sorted(means, reverse=True)
