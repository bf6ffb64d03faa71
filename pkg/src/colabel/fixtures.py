"""Ready-made campaign fixtures for demos, tests and UI development."""

from __future__ import annotations

from .campaign import CampaignService
from .engine import LabelEngine
from .model import Confidence, LabelValue
from .store import Workspace

# Default schema for curating edit-review datasets: two binary dimensions,
# one for whether a change hurts the article and one for the editor's
# apparent intent.
EDIT_QUALITY_DIMENSIONS = [
    {
        "name": "damage",
        "positive_value": "damaging",
        "negative_value": "not damaging",
        "definition": (
            "A change is damaging when the page is worse after it than before "
            "it. Judge only the change itself, not what else could have been "
            "improved; a change that leaves the page no better and no worse "
            "is not damaging."
        ),
    },
    {
        "name": "intent",
        "positive_value": "bad faith",
        "negative_value": "good faith",
        "definition": (
            "A change is good faith when it is plausible the editor was trying "
            "to improve the page. Good faith is the default; pick bad faith "
            "only with a concrete reason. Damaging changes can still be good "
            "faith."
        ),
    },
]

SEED_DATASHEET = {
    "label definitions": (
        "Each entity carries one label per dimension. See the per-dimension "
        "definitions; revise them here as the community's understanding "
        "sharpens."
    ),
    "data statement": (
        "This dataset records the judgments of the members who curated it. "
        "It is not a representative sample of the underlying activity stream "
        "and should not be reused outside this campaign without discussion."
    ),
    "inclusion criteria": (
        "Entities are added by members during normal review work. Entities "
        "whose source content is no longer publicly visible are excluded "
        "(exclusions are logged below)."
    ),
}


def _lv(dimension: str, choice: str, confidence: str = "high") -> LabelValue:
    return LabelValue(dimension=dimension, choice=choice, confidence=Confidence(confidence))


def seed_demo_campaign(
    workspace: Workspace, *, n_extra_entities: int = 0, name: str = "edit-quality-demo"
) -> dict:
    """Create a small populated campaign; returns the ids it allocated.

    Ships three users, five entities covering the interesting states
    (unanimous, disagreeing, low-confidence, excluded, unlabeled), one
    primary edit and a talk topic.
    """
    service = CampaignService(workspace)
    engine = LabelEngine(workspace)
    users = [workspace.register_user(n) for n in ("Ada", "Grace", "Lin")]
    ada, grace, lin = (u.id for u in users)
    campaign_id = service.create_campaign(name, EDIT_QUALITY_DIMENSIONS, SEED_DATASHEET, ada)

    def add(ref: str, snapshot: str) -> str:
        return service.add_entity(campaign_id, ref, snapshot, ada)

    e_clear = add("demo/change/101", "replaced sourced population figure with profanity")
    e_split = add("demo/change/102", "split one dense link into two shorter ones")
    e_edge = add("demo/change/103", "reworded caption; unclear if meaning preserved")
    e_gone = add("demo/change/104", "content since removed upstream")
    e_fresh = add("demo/change/105", "added citation to new source")

    engine.submit_individual_label(
        ada, e_clear, [_lv("damage", "positive"), _lv("intent", "positive")]
    )
    engine.submit_individual_label(
        grace, e_clear, [_lv("damage", "positive"), _lv("intent", "positive")]
    )
    engine.submit_individual_label(
        lin, e_clear, [_lv("damage", "positive"), _lv("intent", "positive")]
    )

    engine.submit_individual_label(
        ada,
        e_split,
        [_lv("damage", "positive"), _lv("intent", "negative")],
        note="style guidance says avoid adjacent links",
    )
    engine.submit_individual_label(
        grace,
        e_split,
        [_lv("damage", "negative"), _lv("intent", "negative")],
        note="reads better after the change",
    )
    engine.submit_individual_label(
        lin, e_split, [_lv("damage", "negative"), _lv("intent", "negative")]
    )
    engine.edit_primary_label(
        grace,
        e_split,
        {"damage": "negative", "intent": "negative"},
        base_revision=1,
        rationale="two of three see an improvement; discussing on talk",
    )
    service.post_to_thread(
        campaign_id,
        "Is splitting links damaging?",
        "The style guide is advisory, and the result is easier to read.",
        grace,
        entity_id=e_split,
    )

    engine.submit_individual_label(
        ada, e_edge, [_lv("damage", "negative", "low"), _lv("intent", "negative", "low")]
    )
    engine.submit_individual_label(
        grace, e_edge, [_lv("damage", "negative", "low"), _lv("intent", "negative")]
    )

    engine.submit_individual_label(
        ada, e_gone, [_lv("damage", "positive"), _lv("intent", "positive")]
    )
    service.exclude_entity(campaign_id, e_gone, ada, "source content no longer public")

    for i in range(n_extra_entities):
        add(f"demo/change/{200 + i}", f"generated demo change {i}")

    return {
        "campaign_id": campaign_id,
        "users": {u.display_name: u.id for u in users},
        "tokens": {u.display_name: u.token for u in users},
        "entities": {
            "clear": e_clear,
            "split": e_split,
            "edge": e_edge,
            "excluded": e_gone,
            "fresh": e_fresh,
        },
    }
