"""Campaign lifecycle: datasheet, entity table, exclusion, talk threads.

The campaign table routes contributor attention: sort modes surface
entities that need more labels, have high disagreement, or differ from the
viewer's own judgment. Excluded entities disappear from the table and the
export but stay retrievable by id, and each exclusion leaves an audit line
in the "inclusion criteria" revision history.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

from . import metrics
from .errors import (
    AlreadyExcluded,
    DuplicateExternalRef,
    DuplicateName,
    UnknownEntity,
    UnknownParent,
    UnknownScope,
    UnknownSection,
    ValidationError,
)
from .model import TalkThread, schema_from_dicts, seed_datasheet
from .store import Workspace, _id_number, to_iso


class SortMode(str, Enum):
    FEWEST_LABELS = "fewest_labels"
    HIGHEST_DISAGREEMENT = "highest_disagreement"
    DIFFERS_FROM_MINE = "differs_from_mine"
    RECENT_ACTIVITY = "recent_activity"


@dataclass(frozen=True)
class TableRow:
    """One campaign-table row, derived from stored state plus the viewer id."""

    entity_id: str
    external_ref: str
    primary_values: Optional[dict[str, str]]
    n_labels: int
    disagreement: float  # max over dimensions
    has_discussion: bool
    differs_from_viewer: bool
    last_activity: float

    def as_dict(self) -> dict:
        return {
            "entity_id": self.entity_id,
            "external_ref": self.external_ref,
            "primary_values": self.primary_values,
            "n_labels": self.n_labels,
            "disagreement": self.disagreement,
            "has_discussion": self.has_discussion,
            "differs_from_viewer": self.differs_from_viewer,
            "last_activity": self.last_activity,
        }


class CampaignService:
    def __init__(self, workspace: Workspace):
        self.workspace = workspace

    # -- lifecycle ---------------------------------------------------------

    def create_campaign(
        self,
        name: str,
        dimensions: Sequence[Mapping],
        datasheet: Mapping[str, str],
        created_by: str = "system",
        thresholds: Optional[tuple[float, float]] = None,
    ) -> str:
        """Create an empty campaign with a validated schema and seed datasheet.

        ``dimensions`` are dicts with name, positive_value, negative_value
        and optional definition text; ``datasheet`` must include the three
        mandatory sections.
        """
        ws = self.workspace
        if not name:
            raise ValidationError("campaign name must be non-empty")
        with ws.campaign_lock("create"):
            if ws.campaign_by_name(name) is not None:
                raise DuplicateName(f"campaign named {name!r} already exists")
            ts = ws.clock()
            # Validate before committing; these raise InvalidSchema.
            schema_from_dicts(dimensions, created_by, ts)
            seed_datasheet(datasheet, created_by, ts)
            event = {
                "op": "campaign_created",
                "campaign_id": ws.allocate_id("c"),
                "name": name,
                "created_by": created_by,
                "schema": [dict(d) for d in dimensions],
                "datasheet": dict(datasheet),
                "salt": ws.configured_salt or secrets.token_hex(8),
                "thresholds": list(thresholds or ws.default_thresholds),
                "ts": ts,
            }
            ws.commit(event)
            return event["campaign_id"]

    def list_campaigns(self) -> list[dict]:
        return [c.summary() for c in self.workspace.campaigns.values()]

    # -- entities ------------------------------------------------------------

    def add_entity(
        self, campaign_id: str, external_ref: str, content_snapshot: str, user: str
    ) -> str:
        """Register a new data point; refs are unique within the campaign."""
        ws = self.workspace
        campaign = ws.campaign(campaign_id)
        if not external_ref:
            raise ValidationError("external_ref must be non-empty")
        with ws.campaign_lock(campaign_id):
            existing = campaign.ref_index.get(external_ref)
            if existing is not None:
                raise DuplicateExternalRef(
                    f"ref {external_ref!r} already present", existing_id=existing
                )
            event = {
                "op": "entity_added",
                "campaign_id": campaign_id,
                "entity_id": ws.allocate_id("e"),
                "external_ref": external_ref,
                "content_snapshot": content_snapshot,
                "added_by": user,
                "ts": ws.clock(),
            }
            ws.commit(event)
            return event["entity_id"]

    def exclude_entity(self, campaign_id: str, entity_id: str, user: str, reason: str) -> str:
        """Soft-delete an entity from the dataset, with an audit trail.

        Returns "excluded", or "already_excluded" for a repeat call (a
        no-op signal, not a failure). The audit line is appended to the
        "inclusion criteria" datasheet section.
        """
        ws = self.workspace
        campaign = ws.campaign(campaign_id)
        if entity_id not in campaign.entities:
            raise UnknownEntity(f"no entity {entity_id!r} in campaign {campaign_id!r}")
        with ws.campaign_lock(campaign_id), ws.entity_lock(entity_id):
            entity = campaign.entities[entity_id]
            if entity.excluded:
                return AlreadyExcluded.code
            ts = ws.clock()
            section = campaign.datasheet.section("inclusion criteria")
            audit_line = (
                f"- {to_iso(ts)} excluded {entity.external_ref} ({entity_id}) "
                f"by {user}: {reason}"
            )
            event = {
                "op": "entity_excluded",
                "campaign_id": campaign_id,
                "entity_id": entity_id,
                "user": user,
                "reason": reason,
                "audit_text": section.history.current + "\n" + audit_line,
                "ts": ts,
            }
            ws.commit(event)
            return "excluded"

    # -- table ---------------------------------------------------------------

    def table_rows(self, campaign_id: str, viewer: Optional[str]) -> list[TableRow]:
        """All included rows, unordered (callers sort)."""
        campaign = self.workspace.campaign(campaign_id)
        dims = campaign.schema.dimension_names
        rows = []
        for entity in campaign.entities_in_order():
            if entity.excluded:
                continue
            labels = campaign.labels_for(entity.id)
            primary = campaign.primaries.get(entity.id)
            disagreement = max(
                (
                    metrics.disagreement([l.value_for(d) for l in labels])
                    for d in dims
                ),
                default=0.0,
            )
            differs = False
            if viewer is not None and primary is not None:
                own = campaign.labels.get(entity.id, {}).get(viewer)
                if own is not None:
                    primary_choices = primary.choices()
                    differs = any(
                        v.choice is not primary_choices[v.dimension] for v in own.values
                    )
            rows.append(
                TableRow(
                    entity_id=entity.id,
                    external_ref=entity.external_ref,
                    primary_values=primary.choices_dict() if primary else None,
                    n_labels=len(labels),
                    disagreement=disagreement,
                    has_discussion=campaign.has_discussion(entity.id),
                    differs_from_viewer=differs,
                    last_activity=campaign.last_activity.get(entity.id, entity.added_at),
                )
            )
        return rows

    def list_table(
        self,
        campaign_id: str,
        viewer: Optional[str] = None,
        sort: SortMode | str = SortMode.RECENT_ACTIVITY,
        page: int = 1,
        page_size: int = 50,
    ) -> list[TableRow]:
        """Sorted, paginated campaign table; excluded entities are omitted.

        Every mode is a stable total order with the entity id (ascending,
        creation order) as the final tie-break. ``differs_from_mine`` puts
        rows where the viewer's own label disagrees with the primary first,
        then everything else; both groups are ordered by recent activity.
        """
        sort = SortMode(sort)
        if page < 1 or page_size < 1:
            raise ValidationError("page and page_size must be >= 1")
        rows = self.table_rows(campaign_id, viewer)
        key = {
            SortMode.FEWEST_LABELS: lambda r: (r.n_labels, _id_number(r.entity_id)),
            SortMode.HIGHEST_DISAGREEMENT: lambda r: (
                -r.disagreement,
                _id_number(r.entity_id),
            ),
            SortMode.DIFFERS_FROM_MINE: lambda r: (
                0 if r.differs_from_viewer else 1,
                -r.last_activity,
                _id_number(r.entity_id),
            ),
            SortMode.RECENT_ACTIVITY: lambda r: (
                -r.last_activity,
                _id_number(r.entity_id),
            ),
        }[sort]
        rows.sort(key=key)
        start = (page - 1) * page_size
        return rows[start : start + page_size]

    # -- datasheet -------------------------------------------------------------

    def get_datasheet(self, campaign_id: str) -> dict:
        return self.workspace.campaign(campaign_id).datasheet.as_dict()

    def edit_datasheet_section(
        self, campaign_id: str, section: str, new_text: str, user: str
    ) -> int:
        """Append a revision to an existing section; returns the new revision number.

        Wiki-faithful: identical text still appends a revision.
        """
        ws = self.workspace
        campaign = ws.campaign(campaign_id)
        with ws.campaign_lock(campaign_id):
            existing = campaign.datasheet.section(section)
            if existing is None:
                raise UnknownSection(f"no datasheet section {section!r}")
            event = {
                "op": "datasheet_edited",
                "campaign_id": campaign_id,
                "section": section,
                "text": new_text,
                "author": user,
                "ts": ws.clock(),
            }
            ws.commit(event)
            return campaign.datasheet.section(section).history.revision

    def add_datasheet_section(
        self, campaign_id: str, section: str, text: str, user: str
    ) -> int:
        """Add a new named section (communities grow the datasheet over time)."""
        ws = self.workspace
        campaign = ws.campaign(campaign_id)
        if not section:
            raise ValidationError("section name must be non-empty")
        with ws.campaign_lock(campaign_id):
            if campaign.datasheet.section(section) is not None:
                raise DuplicateName(f"section {section!r} already exists")
            event = {
                "op": "datasheet_section_added",
                "campaign_id": campaign_id,
                "section": section,
                "text": text,
                "author": user,
                "ts": ws.clock(),
            }
            ws.commit(event)
            return 1

    def revise_dimension_definition(
        self, campaign_id: str, dimension: str, new_text: str, user: str
    ) -> int:
        """Append a revision to one dimension's definition text."""
        ws = self.workspace
        campaign = ws.campaign(campaign_id)
        if dimension not in campaign.schema.dimension_names:
            raise UnknownSection(f"no dimension {dimension!r}")
        with ws.campaign_lock(campaign_id):
            event = {
                "op": "definition_revised",
                "campaign_id": campaign_id,
                "dimension": dimension,
                "text": new_text,
                "author": user,
                "ts": ws.clock(),
            }
            ws.commit(event)
            return campaign.schema.dimension(dimension).definition_text.revision

    # -- talk --------------------------------------------------------------------

    def post_to_thread(
        self,
        campaign_id: str,
        topic_title: str,
        body: str,
        user: str,
        entity_id: Optional[str] = None,
        parent: Optional[str] = None,
    ) -> str:
        """Append a post to a campaign- or entity-scoped talk topic.

        Creates the topic when the title is new. A new post on an entity
        thread flips that entity's has_discussion flag. Users mentioned as
        ``@user_id`` in an entity-scoped post get a "mentioned" notification.
        """
        ws = self.workspace
        campaign = ws.campaign(campaign_id)
        if not topic_title:
            raise ValidationError("topic title must be non-empty")
        if entity_id is not None and entity_id not in campaign.entities:
            raise UnknownScope(f"no entity {entity_id!r} in campaign {campaign_id!r}")
        with ws.campaign_lock(campaign_id):
            thread = campaign.thread_for(entity_id)
            if parent is not None:
                topic = thread.topic(topic_title)
                if topic is None or all(p.id != parent for p in topic.posts):
                    raise UnknownParent(f"no post {parent!r} in topic {topic_title!r}")
            mentions = []
            if entity_id is not None:
                mentioned = {
                    uid
                    for uid in self.workspace.users
                    if f"@{uid}" in body and uid != user
                }
                mentions = [
                    {"id": ws.allocate_id("n"), "recipient": uid}
                    for uid in sorted(mentioned)
                ]
            event = {
                "op": "post_added",
                "campaign_id": campaign_id,
                "scope_entity": entity_id,
                "topic": topic_title,
                "post_id": ws.allocate_id("p"),
                "author": user,
                "body": body,
                "parent": parent,
                "mentions": mentions,
                "ts": ws.clock(),
            }
            ws.commit(event)
            return event["post_id"]

    def get_thread(self, campaign_id: str, entity_id: Optional[str] = None) -> TalkThread:
        campaign = self.workspace.campaign(campaign_id)
        if entity_id is not None and entity_id not in campaign.entities:
            raise UnknownScope(f"no entity {entity_id!r} in campaign {campaign_id!r}")
        return campaign.thread_for(entity_id)
