from __future__ import annotations

import pytest

from colabel.errors import InvalidSchema, SchemaMismatch, ValidationError
from colabel.model import (
    ENCODED_VALUES,
    Choice,
    Confidence,
    LabelValue,
    encode,
    datasheet_from_dict,
    individual_label_from_dict,
    label_value_from_dict,
    schema_from_dict,
    schema_from_dicts,
    seed_datasheet,
    seed_text,
)

from conftest import DIMS_TWO, lv


ALL_PAIRS = [(c, k) for c in Choice for k in Confidence]


def test_encoding_table():
    assert encode(lv("d", "positive", "high")) == -1.0
    assert encode(lv("d", "negative", "high")) == +1.0
    assert encode(lv("d", "positive", "low")) == -0.5
    assert encode(lv("d", "negative", "low")) == +0.5


def test_encoding_is_bijection():
    seen = {encode(LabelValue("d", c, k)) for c, k in ALL_PAIRS}
    assert seen == set(ENCODED_VALUES) == {-1.0, -0.5, 0.5, 1.0}
    assert len(seen) == len(ALL_PAIRS)


def test_label_value_rejects_bad_enum():
    with pytest.raises(ValueError):
        LabelValue("d", "maybe", "high")
    with pytest.raises(ValueError):
        LabelValue("d", "positive", "medium")


def test_label_value_round_trip():
    v = lv("damage", "positive", "low")
    assert label_value_from_dict(v.as_dict()) == v


def test_schema_requires_dimension():
    with pytest.raises(InvalidSchema):
        schema_from_dicts([], "a", 0.0)


def test_schema_unique_names():
    dims = [
        {"name": "d", "positive_value": "x", "negative_value": "y"},
        {"name": "d", "positive_value": "p", "negative_value": "q"},
    ]
    with pytest.raises(InvalidSchema):
        schema_from_dicts(dims, "a", 0.0)


def test_schema_distinct_values():
    with pytest.raises(InvalidSchema):
        schema_from_dicts(
            [{"name": "d", "positive_value": "same", "negative_value": "same"}], "a", 0.0
        )


def test_schema_definition_seeded_and_round_trips():
    schema = schema_from_dicts(DIMS_TWO, "author", 1.5)
    for dim in schema.dimensions:
        assert len(dim.definition_text.revisions) == 1
        assert dim.definition_text.revisions[0].author == "author"
    assert schema_from_dict(schema.as_dict()) == schema


def test_sort_values_covers_schema_exactly():
    schema = schema_from_dicts(DIMS_TWO, "a", 0.0)
    ordered = schema.sort_values([lv("intent", "negative"), lv("damage", "positive")])
    assert [v.dimension for v in ordered] == ["damage", "intent"]
    with pytest.raises(SchemaMismatch):
        schema.sort_values([lv("damage", "positive")])
    with pytest.raises(SchemaMismatch):
        schema.sort_values(
            [lv("damage", "positive"), lv("intent", "negative"), lv("bogus", "positive")]
        )
    with pytest.raises(SchemaMismatch):
        schema.sort_values([lv("damage", "positive"), lv("damage", "negative")])


def test_revisioned_text_appends():
    text = seed_text("v1", "a", 1.0)
    text = text.revised("v2", "b", 2.0)
    assert text.current == "v2"
    assert text.revision == 2
    assert [r.text for r in text.revisions] == ["v1", "v2"]


def test_individual_label_round_trip():
    label = individual_label_from_dict(
        {
            "author": "u1",
            "entity": "e1",
            "values": [lv("damage", "positive").as_dict()],
            "note": "why",
            "created_at": 1.0,
            "updated_at": 2.0,
        }
    )
    assert label.choices() == {"damage": Choice.POSITIVE}
    assert individual_label_from_dict(label.as_dict()) == label


def test_datasheet_requires_mandatory_sections():
    with pytest.raises(InvalidSchema):
        seed_datasheet({"label definitions": "x"}, "a", 0.0)


def test_datasheet_round_trip_and_revision():
    sheet = seed_datasheet(
        {
            "label definitions": "defs",
            "data statement": "statement",
            "inclusion criteria": "criteria",
        },
        "a",
        0.0,
    )
    sheet2 = sheet.with_revision("data statement", "statement v2", "b", 1.0)
    assert sheet2.section("data statement").history.current == "statement v2"
    assert sheet2.section("data statement").history.revision == 2
    # original untouched (value semantics)
    assert sheet.section("data statement").history.revision == 1
    assert datasheet_from_dict(sheet2.as_dict()) == sheet2


def test_topic_title_must_be_nonempty():
    from colabel.model import Topic

    with pytest.raises(ValidationError):
        Topic("")
