"""Label lifecycle: individual submission, consensus edits, notifications.

The consensus ("primary") label of an entity starts as a copy of the first
submitted individual label and afterwards changes only through explicit
compare-and-set edits; it is never recomputed from a vote. A submission
whose choices differ from the current primary gets a disagree outcome so
the client can nudge the submitter toward the talk page.

All mutations on one entity are serialized through the workspace's
per-entity lock, which is what makes the compare-and-set contract hold
under concurrency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import ExcludedEntity, NoPrimaryYet, RevisionConflict
from .model import (
    Choice,
    Entity,
    IndividualLabel,
    LabelValue,
    Notification,
    PrimaryLabel,
)
from .store import Workspace

# Reminder shown before a primary-label edit. Enforcement of the
# acknowledgement checkbox is a client concern; the engine only carries it.
EDIT_ACKNOWLEDGEMENT = (
    "Changing the shared label is welcome, but it should reflect the group's "
    "view rather than only your own. If others disagree with your change, "
    "continue on the talk page instead of re-editing."
)

RECORDED_AGREE = "recorded_agree"
RECORDED_DISAGREE_NUDGE = "recorded_disagree_nudge"


@dataclass(frozen=True)
class SubmitOutcome:
    """Result of one label submission.

    ``status`` is ``recorded_disagree_nudge`` exactly when some submitted
    choice differed from the primary's at submission time; confidence is
    ignored in that comparison.
    """

    status: str
    entity_link: str
    primary_snapshot: dict[str, str]

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "entity_link": self.entity_link,
            "primary_snapshot": dict(self.primary_snapshot),
        }


@dataclass(frozen=True)
class EntityView:
    """Read-only snapshot of an entity page."""

    entity: Entity
    primary: Optional[PrimaryLabel]
    labels: tuple[IndividualLabel, ...]  # created_at ascending
    own_label: Optional[IndividualLabel]
    has_discussion: bool
    requires_acknowledgement: bool = True
    acknowledgement_text: str = EDIT_ACKNOWLEDGEMENT

    def as_dict(self) -> dict:
        return {
            "entity": self.entity.as_dict(),
            "primary": self.primary.as_dict() if self.primary else None,
            "labels": [l.as_dict() for l in self.labels],
            "own_label": self.own_label.as_dict() if self.own_label else None,
            "has_discussion": self.has_discussion,
            "requires_acknowledgement": self.requires_acknowledgement,
            "acknowledgement_text": self.acknowledgement_text,
        }


class LabelEngine:
    def __init__(self, workspace: Workspace):
        self.workspace = workspace

    def submit_individual_label(
        self,
        user: str,
        entity_id: str,
        values: Iterable[LabelValue],
        note: Optional[str] = None,
    ) -> SubmitOutcome:
        """Upsert the caller's label on an entity.

        The first label on an entity also initializes the primary label at
        revision 1 with the same choices. Later submissions never touch the
        primary; they only report agreement or disagreement against it.
        Resubmitting replaces the caller's previous values in place.
        """
        ws = self.workspace
        campaign, entity = ws.resolve_entity(entity_id)
        with ws.entity_lock(entity_id):
            campaign, entity = ws.resolve_entity(entity_id)
            if entity.excluded:
                raise ExcludedEntity(f"entity {entity_id!r} is excluded from the campaign")
            sorted_values = campaign.schema.sort_values(values)
            primary = campaign.primaries.get(entity_id)
            creates_primary = primary is None
            if creates_primary:
                status = RECORDED_AGREE
            else:
                primary_choices = primary.choices()
                disagrees = any(
                    v.choice is not primary_choices[v.dimension] for v in sorted_values
                )
                status = RECORDED_DISAGREE_NUDGE if disagrees else RECORDED_AGREE
            event = {
                "op": "label_submitted",
                "campaign_id": campaign.id,
                "entity_id": entity_id,
                "author": user,
                "values": [v.as_dict() for v in sorted_values],
                "note": note,
                "creates_primary": creates_primary,
                "ts": ws.clock(),
            }
            ws.commit(event)
            snapshot = campaign.primaries[entity_id].choices_dict()
        return SubmitOutcome(status=status, entity_link=entity_id, primary_snapshot=snapshot)

    def edit_primary_label(
        self,
        user: str,
        entity_id: str,
        new_values: Mapping[str, Choice | str],
        base_revision: int,
        rationale: Optional[str] = None,
    ) -> PrimaryLabel:
        """Compare-and-set edit of the consensus label.

        Succeeds only when ``base_revision`` equals the current revision;
        otherwise raises RevisionConflict carrying the current revision so
        the caller can re-read and retry. On success every distinct prior
        labeler except the editor gets a primary_changed notification.
        """
        ws = self.workspace
        ws.resolve_entity(entity_id)
        with ws.entity_lock(entity_id):
            campaign, entity = ws.resolve_entity(entity_id)
            primary = campaign.primaries.get(entity_id)
            if primary is None:
                raise NoPrimaryYet(f"entity {entity_id!r} has no labels yet")
            sorted_values = campaign.schema.sort_choices(new_values)
            if base_revision != primary.revision:
                raise RevisionConflict(
                    f"primary label moved to revision {primary.revision}",
                    current_revision=primary.revision,
                    current_values=primary.choices_dict(),
                )
            prior_labelers = {lbl.author for lbl in campaign.labels_for(entity_id)}
            recipients = sorted(prior_labelers - {user})
            event = {
                "op": "primary_edited",
                "campaign_id": campaign.id,
                "entity_id": entity_id,
                "editor": user,
                "values": {d: c.value for d, c in sorted_values},
                "old_values": primary.choices_dict(),
                "rationale": rationale,
                "notifications": [
                    {"id": ws.allocate_id("n"), "recipient": r} for r in recipients
                ],
                "ts": ws.clock(),
            }
            ws.commit(event)
            return campaign.primaries[entity_id]

    def get_entity_view(self, user: Optional[str], entity_id: str) -> EntityView:
        """Entity page snapshot: primary, all labels in submission order, own label.

        Excluded entities stay retrievable by id; the ``excluded`` flag on
        the embedded entity is the archive banner signal.
        """
        campaign, entity = self.workspace.resolve_entity(entity_id)
        labels = tuple(campaign.labels_for(entity_id))
        own = None
        if user is not None:
            own = campaign.labels.get(entity_id, {}).get(user)
        return EntityView(
            entity=entity,
            primary=campaign.primaries.get(entity_id),
            labels=labels,
            own_label=own,
            has_discussion=campaign.has_discussion(entity_id),
        )

    def list_notifications(self, user: str, unread_only: bool = False) -> list[Notification]:
        """The caller's notifications, newest first."""
        inbox = self.workspace.notifications_for(user)
        if unread_only:
            inbox = [n for n in inbox if not n.read]
        return sorted(inbox, key=lambda n: (n.created_at, n.id), reverse=True)

    def mark_notifications_read(self, user: str, ids: Optional[Iterable[str]] = None) -> int:
        """Mark notifications read (all of them when ``ids`` is None). Idempotent."""
        ws = self.workspace
        inbox = ws.notifications_for(user)
        wanted = None if ids is None else set(ids)
        to_mark = [
            n.id for n in inbox if not n.read and (wanted is None or n.id in wanted)
        ]
        if to_mark:
            ws.commit(
                {
                    "op": "notifications_read",
                    "user": user,
                    "ids": to_mark,
                    "ts": ws.clock(),
                }
            )
        return len(to_mark)
