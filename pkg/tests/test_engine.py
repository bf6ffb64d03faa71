from __future__ import annotations

import random
import threading
from concurrent.futures import ThreadPoolExecutor

import pytest

from colabel.engine import RECORDED_AGREE, RECORDED_DISAGREE_NUDGE
from colabel.errors import (
    ExcludedEntity,
    NoPrimaryYet,
    RevisionConflict,
    SchemaMismatch,
    UnknownEntity,
)
from colabel.model import Choice

from conftest import Harness, lv


def test_first_label_initializes_primary(harness):
    entity = harness.add_entity()
    outcome = harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    assert outcome.status == RECORDED_AGREE
    assert outcome.entity_link == entity
    assert outcome.primary_snapshot == {"damage": "positive", "intent": "negative"}
    primary = harness.campaign.primaries[entity]
    assert primary.revision == 1
    assert len(primary.history) == 1
    assert primary.history[0].values == primary.values
    assert primary.history[0].editor == "u1"


def test_agreeing_submission_recorded_agree(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    outcome = harness.submit("u2", entity, {"damage": "positive", "intent": "negative"})
    assert outcome.status == RECORDED_AGREE
    # second submission never touches the primary
    assert harness.campaign.primaries[entity].revision == 1


def test_differing_submission_nudges(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    outcome = harness.submit("u2", entity, {"damage": "negative", "intent": "negative"})
    assert outcome.status == RECORDED_DISAGREE_NUDGE
    assert outcome.primary_snapshot == {"damage": "positive", "intent": "negative"}


def test_confidence_difference_alone_is_agreement(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    values = [lv("damage", "positive", "low"), lv("intent", "negative", "low")]
    outcome = harness.engine.submit_individual_label("u2", entity, values)
    assert outcome.status == RECORDED_AGREE


def test_resubmission_replaces_in_place(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    first = harness.campaign.labels[entity]["u1"]
    harness.submit("u1", entity, {"damage": "negative", "intent": "negative"}, note="changed my mind")
    labels = harness.campaign.labels_for(entity)
    assert len(labels) == 1
    updated = labels[0]
    assert updated.created_at == first.created_at
    assert updated.updated_at > first.updated_at
    assert updated.choices()["damage"] is Choice.NEGATIVE
    assert updated.note == "changed my mind"


def test_idempotent_resubmission_keeps_revision_and_notifications(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.submit("u2", entity, {"damage": "positive", "intent": "negative"})
    before_rev = harness.campaign.primaries[entity].revision
    before_notes = sum(len(v) for v in harness.ws.notifications.values())
    harness.submit("u2", entity, {"damage": "positive", "intent": "negative"})
    harness.submit("u2", entity, {"damage": "positive", "intent": "negative"})
    assert harness.campaign.primaries[entity].revision == before_rev
    assert sum(len(v) for v in harness.ws.notifications.values()) == before_notes


def test_submit_unknown_entity(harness):
    with pytest.raises(UnknownEntity):
        harness.submit("u1", "e999", {"damage": "positive", "intent": "negative"})


def test_submit_excluded_entity(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.service.exclude_entity(harness.campaign_id, entity, "u1", "gone")
    with pytest.raises(ExcludedEntity):
        harness.submit("u2", entity, {"damage": "positive", "intent": "negative"})


def test_submit_schema_mismatch(harness):
    entity = harness.add_entity()
    with pytest.raises(SchemaMismatch):
        harness.engine.submit_individual_label("u1", entity, [lv("damage", "positive")])
    with pytest.raises(SchemaMismatch):
        harness.engine.submit_individual_label(
            "u1",
            entity,
            [lv("damage", "positive"), lv("intent", "negative"), lv("extra", "positive")],
        )


def test_edit_primary_success_and_notifications(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.submit("u2", entity, {"damage": "positive", "intent": "negative"})
    harness.submit("u3", entity, {"damage": "negative", "intent": "negative"})
    primary = harness.engine.edit_primary_label(
        "u3", entity, {"damage": "negative", "intent": "negative"}, base_revision=1,
        rationale="two later labelers disagree",
    )
    assert primary.revision == 2
    assert len(primary.history) == 2
    assert primary.history[1].rationale == "two later labelers disagree"
    # replaying the history reproduces the current state
    assert primary.history[-1].values == primary.values
    assert [h.revision for h in primary.history] == [1, 2]
    # u1 and u2 notified, editor u3 not
    assert {n.recipient for ns in harness.ws.notifications.values() for n in ns} == {"u1", "u2"}
    note = harness.ws.notifications["u1"][0]
    assert note.kind == "primary_changed"
    assert note.old_values == {"damage": "positive", "intent": "negative"}
    assert note.new_values == {"damage": "negative", "intent": "negative"}
    assert not note.read


def test_edit_primary_stale_revision_conflict(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.engine.edit_primary_label(
        "u2", entity, {"damage": "negative", "intent": "negative"}, base_revision=1
    )
    with pytest.raises(RevisionConflict) as err:
        harness.engine.edit_primary_label(
            "u3", entity, {"damage": "positive", "intent": "positive"}, base_revision=1
        )
    assert err.value.current_revision == 2
    assert err.value.current_values == {"damage": "negative", "intent": "negative"}
    # no mutation happened
    assert harness.campaign.primaries[entity].revision == 2


def test_edit_primary_requires_primary(harness):
    entity = harness.add_entity()
    with pytest.raises(NoPrimaryYet):
        harness.engine.edit_primary_label(
            "u1", entity, {"damage": "positive", "intent": "negative"}, base_revision=0
        )


def test_edit_primary_sole_labeler_notifies_nobody(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.engine.edit_primary_label(
        "u1", entity, {"damage": "negative", "intent": "negative"}, base_revision=1
    )
    assert harness.ws.notifications == {}


def test_edit_primary_schema_mismatch(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    with pytest.raises(SchemaMismatch):
        harness.engine.edit_primary_label("u1", entity, {"damage": "negative"}, base_revision=1)


def test_cas_race_exactly_one_winner(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    n_threads = 8
    barrier = threading.Barrier(n_threads)
    results = []

    def racer(i):
        barrier.wait()
        try:
            harness.engine.edit_primary_label(
                f"racer{i}",
                entity,
                {"damage": "negative", "intent": "positive"},
                base_revision=1,
            )
            return "win"
        except RevisionConflict:
            return "conflict"

    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        results = list(pool.map(racer, range(n_threads)))
    assert results.count("win") == 1
    assert results.count("conflict") == n_threads - 1
    assert harness.campaign.primaries[entity].revision == 2


def test_concurrent_first_submissions_single_initialization(harness):
    entity = harness.add_entity()
    n_threads = 12
    barrier = threading.Barrier(n_threads)
    submitted = {}

    def submitter(i):
        barrier.wait()
        choice = "positive" if i % 2 == 0 else "negative"
        submitted[f"w{i}"] = choice
        harness.submit(f"w{i}", entity, {"damage": choice, "intent": "negative"})

    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        list(pool.map(submitter, range(n_threads)))
    primary = harness.campaign.primaries[entity]
    assert primary.revision == 1  # only edit_primary_label grows revisions
    first_values = dict(primary.history[0].values)
    editor = primary.history[0].editor
    # history[0] equals the choices of whoever won the race
    assert first_values["damage"].value == submitted[editor]
    assert len(harness.campaign.labels_for(entity)) == n_threads


def test_entity_view_ordering_and_own_label(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.submit("u2", entity, {"damage": "negative", "intent": "negative"}, note="hmm")
    harness.submit("u3", entity, {"damage": "positive", "intent": "positive"})
    view = harness.engine.get_entity_view("u2", entity)
    assert [l.author for l in view.labels] == ["u1", "u2", "u3"]
    assert view.own_label.author == "u2"
    assert view.own_label.note == "hmm"
    assert view.primary.revision == 1
    assert not view.entity.excluded
    assert view.requires_acknowledgement


def test_entity_view_without_own_label(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    view = harness.engine.get_entity_view("stranger", entity)
    assert view.own_label is None
    anonymous = harness.engine.get_entity_view(None, entity)
    assert anonymous.own_label is None


def test_entity_view_excluded_banner(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.service.exclude_entity(harness.campaign_id, entity, "u1", "hidden")
    view = harness.engine.get_entity_view("u1", entity)
    assert view.entity.excluded
    assert view.entity.exclusion_reason == "hidden"
    assert view.primary is not None  # archived but inspectable


def test_notifications_newest_first_and_unread_filter(harness):
    e1 = harness.add_entity(ref="a")
    e2 = harness.add_entity(ref="b")
    harness.submit("u1", e1, {"damage": "positive", "intent": "negative"})
    harness.submit("u1", e2, {"damage": "positive", "intent": "negative"})
    harness.engine.edit_primary_label("u2", e1, {"damage": "negative", "intent": "negative"}, 1)
    harness.engine.edit_primary_label("u2", e2, {"damage": "negative", "intent": "negative"}, 1)
    inbox = harness.engine.list_notifications("u1")
    assert [n.entity for n in inbox] == [e2, e1]  # newest first
    assert harness.engine.list_notifications("u2") == []

    marked = harness.engine.mark_notifications_read("u1", [inbox[0].id])
    assert marked == 1
    unread = harness.engine.list_notifications("u1", unread_only=True)
    assert [n.entity for n in unread] == [e1]
    # idempotent
    assert harness.engine.mark_notifications_read("u1", [inbox[0].id]) == 0
    assert harness.engine.mark_notifications_read("u1") == 1
    assert harness.engine.list_notifications("u1", unread_only=True) == []
    assert harness.engine.mark_notifications_read("u1") == 0


def test_no_notifications_without_edits(harness):
    entity = harness.add_entity()
    harness.submit("u1", entity, {"damage": "positive", "intent": "negative"})
    harness.submit("u2", entity, {"damage": "negative", "intent": "negative"})
    assert harness.engine.list_notifications("u1") == []
    assert harness.engine.list_notifications("u2") == []


def test_nudge_soundness_fuzz():
    rng = random.Random(99)
    for _ in range(200):
        n_dims = rng.randint(1, 4)
        dims = [
            {"name": f"d{i}", "positive_value": f"p{i}", "negative_value": f"n{i}"}
            for i in range(n_dims)
        ]
        h = Harness(dims=dims)
        entity = h.add_entity()
        first = {f"d{i}": rng.choice(["positive", "negative"]) for i in range(n_dims)}
        h.submit("u1", entity, first)
        if rng.random() < 0.3:
            new_values = {f"d{i}": rng.choice(["positive", "negative"]) for i in range(n_dims)}
            h.engine.edit_primary_label("u1", entity, new_values, base_revision=1)
        primary_choices = h.campaign.primaries[entity].choices_dict()
        submitted = {f"d{i}": rng.choice(["positive", "negative"]) for i in range(n_dims)}
        expect_nudge = any(submitted[d] != primary_choices[d] for d in submitted)
        outcome = h.submit("u2", entity, submitted, confidence=rng.choice(["high", "low"]))
        expected = RECORDED_DISAGREE_NUDGE if expect_nudge else RECORDED_AGREE
        assert outcome.status == expected
