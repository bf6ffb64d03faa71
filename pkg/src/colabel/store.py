"""Durable persistence and dataset export/import.

State is kept in memory and made durable through a write-ahead event log:
every committed mutation is one JSON line, flushed and fsynced before the
call returns, and replayed on startup. A torn final line (crash mid-write)
is discarded as uncommitted, so a restart never observes a partially
applied edit.

Serialization points: mutating operations build their event under the
relevant per-campaign / per-entity lock, then `Workspace.commit` appends
and applies it under a global state lock. Readers take plain references to
immutable value objects and may observe slightly stale snapshots, which the
concurrency contract allows.

Exports are deterministic: identical state produces identical bytes.
Author ids are pseudonymized with a stable per-campaign salt unless the
campaign was itself created by an import (its authors are pseudonyms
already, and re-hashing them would break the export/import fixpoint).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping, Optional

from . import metrics
from .errors import (
    DuplicateName,
    ParseError,
    SchemaMismatch,
    UnknownCampaign,
    UnknownEntity,
    ValidationError,
)
from .model import (
    Choice,
    Datasheet,
    Entity,
    IndividualLabel,
    LabelSchema,
    Notification,
    PrimaryLabel,
    TalkThread,
    entity_from_dict,
    individual_label_from_dict,
    initial_primary,
    label_value_from_dict,
    schema_from_dicts,
    seed_datasheet,
)

EXPORT_FORMAT_VERSION = 1


def to_iso(ts: float) -> str:
    return (
        datetime.fromtimestamp(ts, tz=timezone.utc)
        .isoformat(timespec="microseconds")
        .replace("+00:00", "Z")
    )


def from_iso(text: str) -> float:
    return datetime.fromisoformat(text.replace("Z", "+00:00")).timestamp()


def pseudonym(salt: str, author: str) -> str:
    digest = hashlib.sha256(salt.encode() + b"\x00" + author.encode()).hexdigest()
    return "u_" + digest[:12]


def _id_number(identifier: str) -> int:
    """Numeric part of an allocated id like ``e42``; used for stable ordering."""
    i = 0
    while i < len(identifier) and not identifier[i].isdigit():
        i += 1
    try:
        return int(identifier[i:])
    except ValueError:
        return 0


class MonotonicClock:
    """Wall-clock timestamps, strictly increasing, rounded to microseconds."""

    def __init__(self, base: Optional[Callable[[], float]] = None):
        self._fn = base or time.time
        self._last = 0.0
        self._lock = threading.Lock()

    def __call__(self) -> float:
        with self._lock:
            now = round(self._fn(), 6)
            if now <= self._last:
                now = round(self._last + 1e-6, 6)
            self._last = now
            return now

    def advance_to(self, ts: float) -> None:
        with self._lock:
            self._last = max(self._last, ts)


class EventLog:
    """Append-only JSONL write-ahead log."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, event: dict) -> None:
        line = json.dumps(event, ensure_ascii=False, separators=(",", ":"))
        self._fh.write(line + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def replay(self) -> list[dict]:
        """Parse committed events; a torn trailing line is dropped silently."""
        if not self.path.exists():
            return []
        events = []
        with open(self.path, "r", encoding="utf-8") as fh:
            raw = fh.read()
        lines = raw.split("\n")
        for i, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                events.append(json.loads(line))
            except json.JSONDecodeError:
                if i == len(lines) - 1 or (i == len(lines) - 2 and lines[-1] == ""):
                    break  # torn tail from a crash mid-append
                raise ParseError(f"corrupt event log entry", line=i + 1)
        return events

    def close(self) -> None:
        self._fh.close()


@dataclass
class User:
    id: str
    display_name: str
    token: str

    def as_dict(self) -> dict:
        return {"id": self.id, "display_name": self.display_name}


@dataclass
class CampaignRecord:
    """Mutable container for one campaign's state. Values inside are immutable."""

    id: str
    name: str
    schema: LabelSchema
    datasheet: Datasheet
    salt: str
    thresholds: tuple[float, float]
    created_by: str
    created_at: float
    authors_pseudonymous: bool = False
    entities: dict[str, Entity] = field(default_factory=dict)
    ref_index: dict[str, str] = field(default_factory=dict)
    labels: dict[str, dict[str, IndividualLabel]] = field(default_factory=dict)
    primaries: dict[str, PrimaryLabel] = field(default_factory=dict)
    entity_threads: dict[str, TalkThread] = field(default_factory=dict)
    campaign_thread: TalkThread = field(default_factory=lambda: TalkThread("campaign"))
    last_activity: dict[str, float] = field(default_factory=dict)

    def entities_in_order(self) -> list[Entity]:
        return sorted(self.entities.values(), key=lambda e: (e.added_at, _id_number(e.id)))

    def labels_for(self, entity_id: str) -> list[IndividualLabel]:
        per_entity = self.labels.get(entity_id, {})
        return sorted(per_entity.values(), key=lambda l: (l.created_at, l.author))

    def thread_for(self, entity_id: Optional[str]) -> TalkThread:
        if entity_id is None:
            return self.campaign_thread
        return self.entity_threads.get(entity_id, TalkThread(entity_id))

    def has_discussion(self, entity_id: str) -> bool:
        thread = self.entity_threads.get(entity_id)
        return thread is not None and thread.post_count() > 0

    def touch(self, entity_id: str, ts: float) -> None:
        current = self.last_activity.get(entity_id, 0.0)
        self.last_activity[entity_id] = max(current, ts)

    def summary(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "dimensions": list(self.schema.dimension_names),
            "thresholds": list(self.thresholds),
            "n_entities": sum(1 for e in self.entities.values() if not e.excluded),
            "n_excluded": sum(1 for e in self.entities.values() if e.excluded),
        }


class Workspace:
    """All durable state plus the serialization points for mutating it.

    Pass ``storage_dir=None`` for a purely in-memory workspace (tests,
    ephemeral evaluation runs); otherwise events persist under
    ``storage_dir/events.log`` and are replayed when the workspace opens.
    """

    def __init__(
        self,
        storage_dir: Optional[str | Path] = None,
        *,
        clock: Optional[Callable[[], float]] = None,
        default_thresholds: tuple[float, float] = metrics.DEFAULT_THRESHOLDS,
        salt: Optional[str] = None,
    ):
        self.clock = clock if clock is not None else MonotonicClock()
        self.default_thresholds = default_thresholds
        self.configured_salt = salt
        self.users: dict[str, User] = {}
        self.tokens: dict[str, str] = {}
        self.campaigns: dict[str, CampaignRecord] = {}
        self.entity_index: dict[str, str] = {}  # entity id -> campaign id
        self.notifications: dict[str, list[Notification]] = {}
        self._counters = {"c": 0, "e": 0, "n": 0, "p": 0, "u": 0}
        self._counter_lock = threading.Lock()
        self._state_lock = threading.RLock()
        self._locks: dict[tuple, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self.log: Optional[EventLog] = None
        if storage_dir is not None:
            self.log = EventLog(Path(storage_dir) / "events.log")
            for event in self.log.replay():
                self._apply(event)
                if isinstance(self.clock, MonotonicClock) and "ts" in event:
                    self.clock.advance_to(event["ts"])

    # -- locks and ids ----------------------------------------------------

    def _lock(self, key: tuple) -> threading.Lock:
        with self._locks_guard:
            lock = self._locks.get(key)
            if lock is None:
                lock = threading.Lock()
                self._locks[key] = lock
            return lock

    def campaign_lock(self, campaign_id: str) -> threading.Lock:
        return self._lock(("campaign", campaign_id))

    def entity_lock(self, entity_id: str) -> threading.Lock:
        return self._lock(("entity", entity_id))

    def allocate_id(self, prefix: str) -> str:
        with self._counter_lock:
            self._counters[prefix] += 1
            return f"{prefix}{self._counters[prefix]}"

    def _note_id(self, identifier: str) -> None:
        prefix = identifier[0]
        if prefix in self._counters:
            with self._counter_lock:
                self._counters[prefix] = max(self._counters[prefix], _id_number(identifier))

    # -- commit & apply ----------------------------------------------------

    def commit(self, event: dict) -> None:
        """Durably record one event, then apply it. Atomic per event."""
        with self._state_lock:
            if self.log is not None:
                self.log.append(event)
            self._apply(event)

    def _apply(self, event: dict) -> None:
        handler = getattr(self, "_apply_" + event["op"])
        handler(event)

    # -- accessors ----------------------------------------------------------

    def campaign(self, campaign_id: str) -> CampaignRecord:
        record = self.campaigns.get(campaign_id)
        if record is None:
            raise UnknownCampaign(f"no campaign {campaign_id!r}")
        return record

    def campaign_by_name(self, name: str) -> Optional[CampaignRecord]:
        for record in self.campaigns.values():
            if record.name == name:
                return record
        return None

    def resolve_entity(self, entity_id: str) -> tuple[CampaignRecord, Entity]:
        campaign_id = self.entity_index.get(entity_id)
        if campaign_id is None:
            raise UnknownEntity(f"no entity {entity_id!r}")
        record = self.campaigns[campaign_id]
        return record, record.entities[entity_id]

    def user_by_token(self, token: str) -> Optional[User]:
        user_id = self.tokens.get(token)
        return self.users.get(user_id) if user_id else None

    def notifications_for(self, user: str) -> list[Notification]:
        return list(self.notifications.get(user, []))

    # -- users ----------------------------------------------------------------

    def register_user(self, display_name: str, *, token: Optional[str] = None) -> User:
        if not display_name:
            raise ValidationError("display name must be non-empty")
        with self._state_lock:
            user_id = self.allocate_id("u")
            event = {
                "op": "user_registered",
                "user_id": user_id,
                "display_name": display_name,
                "token": token or secrets.token_hex(16),
                "ts": self.clock(),
            }
            self.commit(event)
            return self.users[user_id]

    def _apply_user_registered(self, e: dict) -> None:
        self._note_id(e["user_id"])
        user = User(e["user_id"], e["display_name"], e["token"])
        self.users[user.id] = user
        self.tokens[user.token] = user.id

    # -- event appliers -------------------------------------------------------

    def _apply_campaign_created(self, e: dict) -> None:
        self._note_id(e["campaign_id"])
        schema = schema_from_dicts(e["schema"], e["created_by"], e["ts"])
        sheet = seed_datasheet(e["datasheet"], e["created_by"], e["ts"])
        record = CampaignRecord(
            id=e["campaign_id"],
            name=e["name"],
            schema=schema,
            datasheet=sheet,
            salt=e["salt"],
            thresholds=tuple(e["thresholds"]),
            created_by=e["created_by"],
            created_at=e["ts"],
        )
        self.campaigns[record.id] = record

    def _apply_entity_added(self, e: dict) -> None:
        self._note_id(e["entity_id"])
        record = self.campaigns[e["campaign_id"]]
        entity = Entity(
            id=e["entity_id"],
            external_ref=e["external_ref"],
            content_snapshot=e["content_snapshot"],
            added_by=e["added_by"],
            added_at=e["ts"],
        )
        record.entities[entity.id] = entity
        record.ref_index[entity.external_ref] = entity.id
        self.entity_index[entity.id] = record.id
        record.touch(entity.id, e["ts"])

    def _apply_label_submitted(self, e: dict) -> None:
        record = self.campaigns[e["campaign_id"]]
        entity_id = e["entity_id"]
        values = tuple(label_value_from_dict(v) for v in e["values"])
        per_entity = record.labels.setdefault(entity_id, {})
        existing = per_entity.get(e["author"])
        created_at = existing.created_at if existing else e["ts"]
        per_entity[e["author"]] = IndividualLabel(
            author=e["author"],
            entity=entity_id,
            values=values,
            note=e.get("note"),
            created_at=created_at,
            updated_at=e["ts"],
        )
        if e.get("creates_primary"):
            choices = tuple((v.dimension, v.choice) for v in values)
            record.primaries[entity_id] = initial_primary(
                entity_id, choices, e["author"], e["ts"]
            )
        record.touch(entity_id, e["ts"])

    def _apply_primary_edited(self, e: dict) -> None:
        record = self.campaigns[e["campaign_id"]]
        entity_id = e["entity_id"]
        primary = record.primaries[entity_id]
        values = record.schema.sort_choices(e["values"])
        record.primaries[entity_id] = primary.edited(
            values, e["editor"], e["ts"], e.get("rationale")
        )
        for note in e.get("notifications", []):
            self._note_id(note["id"])
            notification = Notification(
                id=note["id"],
                recipient=note["recipient"],
                entity=entity_id,
                kind="primary_changed",
                old_values=e["old_values"],
                new_values=dict(e["values"]),
                created_at=e["ts"],
            )
            self.notifications.setdefault(note["recipient"], []).append(notification)
        record.touch(entity_id, e["ts"])

    def _apply_entity_excluded(self, e: dict) -> None:
        record = self.campaigns[e["campaign_id"]]
        entity = record.entities[e["entity_id"]]
        record.entities[e["entity_id"]] = replace(
            entity, excluded=True, exclusion_reason=e.get("reason")
        )
        record.datasheet = record.datasheet.with_revision(
            "inclusion criteria", e["audit_text"], e["user"], e["ts"]
        )
        record.touch(e["entity_id"], e["ts"])

    def _apply_datasheet_edited(self, e: dict) -> None:
        record = self.campaigns[e["campaign_id"]]
        record.datasheet = record.datasheet.with_revision(
            e["section"], e["text"], e["author"], e["ts"]
        )

    def _apply_datasheet_section_added(self, e: dict) -> None:
        record = self.campaigns[e["campaign_id"]]
        record.datasheet = record.datasheet.with_section(
            e["section"], e["text"], e["author"], e["ts"]
        )

    def _apply_definition_revised(self, e: dict) -> None:
        record = self.campaigns[e["campaign_id"]]
        dims = []
        for dim in record.schema.dimensions:
            if dim.name == e["dimension"]:
                dims.append(
                    replace(
                        dim,
                        definition_text=dim.definition_text.revised(
                            e["text"], e["author"], e["ts"]
                        ),
                    )
                )
            else:
                dims.append(dim)
        record.schema = LabelSchema(tuple(dims))

    def _apply_post_added(self, e: dict) -> None:
        from .model import Post

        self._note_id(e["post_id"])
        record = self.campaigns[e["campaign_id"]]
        post = Post(
            id=e["post_id"],
            author=e["author"],
            body=e["body"],
            timestamp=e["ts"],
            parent=e.get("parent"),
        )
        entity_id = e.get("scope_entity")
        if entity_id is None:
            record.campaign_thread = record.campaign_thread.with_post(e["topic"], post)
        else:
            thread = record.entity_threads.get(entity_id, TalkThread(entity_id))
            record.entity_threads[entity_id] = thread.with_post(e["topic"], post)
            record.touch(entity_id, e["ts"])
        for note in e.get("mentions", []):
            self._note_id(note["id"])
            notification = Notification(
                id=note["id"],
                recipient=note["recipient"],
                entity=entity_id or "",
                kind="mentioned",
                old_values=None,
                new_values=None,
                created_at=e["ts"],
            )
            self.notifications.setdefault(note["recipient"], []).append(notification)

    def _apply_notifications_read(self, e: dict) -> None:
        inbox = self.notifications.get(e["user"], [])
        ids = e.get("ids")
        for i, notification in enumerate(inbox):
            if ids is None or notification.id in ids:
                if not notification.read:
                    inbox[i] = replace(notification, read=True)

    def _apply_quick_label_added(self, e: dict) -> None:
        self._apply_entity_added(e)
        self._apply_label_submitted(e)

    def _apply_campaign_imported(self, e: dict) -> None:
        self._note_id(e["campaign_id"])
        schema = schema_from_dicts(e["schema"], "import", e["ts"])
        sheet = seed_datasheet(e["datasheet"], "import", e["ts"])
        record = CampaignRecord(
            id=e["campaign_id"],
            name=e["name"],
            schema=schema,
            datasheet=sheet,
            salt=e["salt"],
            thresholds=tuple(e["thresholds"]),
            created_by="import",
            created_at=e["ts"],
            authors_pseudonymous=True,
        )
        for ent in e["entities"]:
            self._note_id(ent["id"])
            entity = entity_from_dict(ent["entity"])
            record.entities[entity.id] = entity
            record.ref_index[entity.external_ref] = entity.id
            self.entity_index[entity.id] = record.id
            record.touch(entity.id, entity.added_at)
            if ent["labels"]:
                record.labels[entity.id] = {
                    lbl["author"]: individual_label_from_dict(lbl) for lbl in ent["labels"]
                }
            if ent.get("primary") is not None:
                values = schema.sort_choices(ent["primary"])
                record.primaries[entity.id] = initial_primary(
                    entity.id, values, "import", e["ts"]
                )
        self.campaigns[record.id] = record


# -- export ------------------------------------------------------------------


def _canonical_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), sort_keys=True)


def _author_map(campaign: CampaignRecord) -> Callable[[str], str]:
    if campaign.authors_pseudonymous:
        return lambda author: author
    return lambda author: pseudonym(campaign.salt, author)


def export_header(campaign: CampaignRecord) -> dict:
    return {
        "type": "campaign_header",
        "format_version": EXPORT_FORMAT_VERSION,
        "name": campaign.name,
        "schema": [
            {
                "name": d.name,
                "positive_value": d.positive_value,
                "negative_value": d.negative_value,
                "definition": d.definition_text.current,
            }
            for d in campaign.schema.dimensions
        ],
        "thresholds": list(campaign.thresholds),
    }


def export_records(campaign: CampaignRecord) -> list[dict]:
    """One record per included entity, in (added_at, id) order."""
    dims = campaign.schema.dimension_names
    mapper = _author_map(campaign)
    records = []
    for entity in campaign.entities_in_order():
        if entity.excluded:
            continue
        labels = campaign.labels_for(entity.id)
        primary = campaign.primaries.get(entity.id)
        label_dicts = [
            {
                "author": mapper(lbl.author),
                "values": [v.as_dict() for v in lbl.values],
                "note": lbl.note,
                "created_at": to_iso(lbl.created_at),
                "updated_at": to_iso(lbl.updated_at),
            }
            for lbl in labels
        ]
        records.append(
            {
                "external_ref": entity.external_ref,
                "content_snapshot": entity.content_snapshot,
                "primary": primary.choices_dict() if primary else None,
                "labels": label_dicts,
                "n_labels": len(labels),
                "disagreement": {
                    d: metrics.disagreement([l.value_for(d) for l in labels]) for d in dims
                },
                "low_conf_fraction": {
                    d: metrics.low_conf_fraction([l.value_for(d) for l in labels])
                    for d in dims
                },
            }
        )
    return records


def export_campaign(campaign: CampaignRecord, fmt: str = "jsonl") -> bytes:
    """Serialize the campaign dataset; deterministic bytes for fixed state."""
    if fmt == "jsonl":
        return _export_jsonl(campaign)
    if fmt == "csv":
        return _export_csv(campaign)
    raise ValidationError(f"unknown export format {fmt!r}")


def _export_jsonl(campaign: CampaignRecord) -> bytes:
    lines = [_canonical_json(export_header(campaign))]
    lines.extend(_canonical_json(r) for r in export_records(campaign))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _escape_label_cell(label_json: str) -> str:
    # "|" is the sub-delimiter between labels; a literal pipe inside note
    # text survives as the JSON escape |.
    return label_json.replace("|", "\\u007c")


def _export_csv(campaign: CampaignRecord) -> bytes:
    dims = campaign.schema.dimension_names
    buf = io.StringIO()
    buf.write("#schema " + _canonical_json(export_header(campaign)) + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    columns = ["external_ref", "content_snapshot", "n_labels", "labels"]
    for d in dims:
        columns.extend([f"primary.{d}", f"disagreement.{d}", f"low_conf_fraction.{d}"])
    writer.writerow(columns)
    for record in export_records(campaign):
        labels_cell = "|".join(
            _escape_label_cell(_canonical_json(lbl)) for lbl in record["labels"]
        )
        row = [
            record["external_ref"],
            record["content_snapshot"],
            record["n_labels"],
            labels_cell,
        ]
        for d in dims:
            primary = record["primary"]
            row.append("" if primary is None else primary[d])
            row.append(repr(record["disagreement"][d]))
            row.append(repr(record["low_conf_fraction"][d]))
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


# -- import ------------------------------------------------------------------


def _parse_jsonl_export(text: str) -> tuple[dict, list[dict]]:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing header line", line=1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header: {exc.msg}", line=1)
    if header.get("type") != "campaign_header":
        raise ParseError("first line must be the campaign header record", line=1)
    records = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad record: {exc.msg}", line=i)
    return header, records


def _parse_csv_export(text: str) -> tuple[dict, list[dict]]:
    if not text.startswith("#schema "):
        raise ParseError("missing '#schema' header line", line=1)
    first_break = text.find("\n")
    if first_break == -1:
        raise ParseError("missing table after header", line=1)
    try:
        header = json.loads(text[len("#schema ") : first_break].strip())
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad schema header: {exc.msg}", line=1)
    reader = csv.reader(io.StringIO(text[first_break + 1 :]))
    rows = list(reader)
    if not rows:
        raise ParseError("missing column header row", line=2)
    columns = rows[0]
    dims = [d["name"] for d in header["schema"]]
    records = []
    for i, row in enumerate(rows[1:], start=3):
        if not row:
            continue
        if len(row) != len(columns):
            raise ParseError("wrong number of columns", line=i)
        cells = dict(zip(columns, row))
        try:
            labels = []
            if cells["labels"]:
                for chunk in cells["labels"].split("|"):
                    labels.append(json.loads(chunk))
            primary = None
            if cells.get(f"primary.{dims[0]}", ""):
                primary = {d: cells[f"primary.{d}"] for d in dims}
            records.append(
                {
                    "external_ref": cells["external_ref"],
                    "content_snapshot": cells["content_snapshot"],
                    "n_labels": int(cells["n_labels"]),
                    "labels": labels,
                    "primary": primary,
                    "disagreement": {d: float(cells[f"disagreement.{d}"]) for d in dims},
                    "low_conf_fraction": {
                        d: float(cells[f"low_conf_fraction.{d}"]) for d in dims
                    },
                }
            )
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise ParseError(f"bad row: {exc}", line=i)
    return header, records


def import_campaign(
    workspace: Workspace,
    data: bytes | str,
    fmt: str = "jsonl",
    *,
    name: Optional[str] = None,
) -> str:
    """Reconstruct a campaign from an exported dataset.

    Entities, individual labels and primary labels are rebuilt; revision
    histories collapse to a single imported revision. Imported author ids
    (already pseudonyms) are preserved verbatim, and the campaign is marked
    so that re-exports pass them through, which makes export-import-export
    a fixpoint.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if fmt == "jsonl":
        header, records = _parse_jsonl_export(text)
    elif fmt == "csv":
        header, records = _parse_csv_export(text)
    else:
        raise ValidationError(f"unknown import format {fmt!r}")
    if "schema" not in header or not header["schema"]:
        raise ParseError("header has no schema section", line=1)
    campaign_name = name or header.get("name") or "imported"
    dims = [d["name"] for d in header["schema"]]
    return _commit_import(
        workspace,
        campaign_name=campaign_name,
        schema_dicts=header["schema"],
        thresholds=tuple(header.get("thresholds") or workspace.default_thresholds),
        dims=dims,
        records=records,
    )


def _commit_import(
    workspace: Workspace,
    *,
    campaign_name: str,
    schema_dicts: list[dict],
    thresholds: tuple[float, float],
    dims: list[str],
    records: list[dict],
) -> str:
    with workspace.campaign_lock("import"):
        if workspace.campaign_by_name(campaign_name) is not None:
            raise DuplicateName(f"campaign named {campaign_name!r} already exists")
        ts = workspace.clock()
        campaign_id = workspace.allocate_id("c")
        entities = []
        for i, record in enumerate(records):
            entity_id = workspace.allocate_id("e")
            added_at = round(ts + i * 1e-6, 6)
            labels = []
            for lbl in record.get("labels", []):
                values = [label_value_from_dict(v) for v in lbl["values"]]
                if sorted(v.dimension for v in values) != sorted(dims):
                    raise SchemaMismatch(
                        f"label on {record['external_ref']!r} does not match the header schema"
                    )
                labels.append(
                    {
                        "author": lbl["author"],
                        "entity": entity_id,
                        "values": [v.as_dict() for v in values],
                        "note": lbl.get("note"),
                        "created_at": from_iso(lbl["created_at"]),
                        "updated_at": from_iso(lbl["updated_at"]),
                    }
                )
            primary = record.get("primary")
            if primary is not None and sorted(primary) != sorted(dims):
                raise SchemaMismatch(
                    f"primary on {record['external_ref']!r} does not match the header schema"
                )
            if primary is not None and not labels:
                # Keep the invariant that a primary implies at least one
                # individual label: synthesize a single imported label.
                labels.append(
                    {
                        "author": "import",
                        "entity": entity_id,
                        "values": [
                            {"dimension": d, "choice": primary[d], "confidence": "high"}
                            for d in dims
                        ],
                        "note": None,
                        "created_at": added_at,
                        "updated_at": added_at,
                    }
                )
            if primary is None and labels:
                first = min(labels, key=lambda l: (l["created_at"], l["author"]))
                primary = {v["dimension"]: v["choice"] for v in first["values"]}
            entities.append(
                {
                    "id": entity_id,
                    "entity": {
                        "id": entity_id,
                        "external_ref": record["external_ref"],
                        "content_snapshot": record.get("content_snapshot", ""),
                        "added_by": "import",
                        "added_at": added_at,
                    },
                    "labels": labels,
                    "primary": primary,
                }
            )
        event = {
            "op": "campaign_imported",
            "campaign_id": campaign_id,
            "name": campaign_name,
            "salt": secrets.token_hex(8),
            "thresholds": list(thresholds),
            "schema": schema_dicts,
            "datasheet": {
                "label definitions": "(imported dataset)",
                "data statement": "(imported dataset)",
                "inclusion criteria": "(imported dataset)",
            },
            "entities": entities,
            "ts": ts,
        }
        workspace.commit(event)
        return campaign_id


def import_mapped(
    workspace: Workspace,
    data: bytes | str,
    mapping: Mapping,
    *,
    name: Optional[str] = None,
) -> str:
    """Import an external CSV dataset described by a column mapping file.

    The mapping isolates everything unknown about a third-party layout:

    .. code-block:: json

        {
          "format": "csv",
          "campaign_name": "imported-dataset",
          "schema": [{"name": "damage", "positive_value": "damaging",
                      "negative_value": "not damaging"}],
          "ref_column": "rev_id",
          "snapshot_column": null,
          "primary_columns": {
            "damage": {"column": "damaging",
                       "values": {"True": "positive", "False": "negative"}}
          }
        }

    Rows become entities with the mapped primary choices; one imported
    individual label per entity is synthesized from the primary so the
    primary-implies-label invariant holds.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if mapping.get("format", "csv") != "csv":
        raise ValidationError("mapped import currently supports csv only")
    for key in ("schema", "ref_column", "primary_columns"):
        if key not in mapping:
            raise ValidationError(f"mapping file is missing {key!r}")
    dims = [d["name"] for d in mapping["schema"]]
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for i, row in enumerate(reader, start=2):
        ref = row.get(mapping["ref_column"])
        if ref is None:
            raise ParseError(f"missing column {mapping['ref_column']!r}", line=i)
        primary = {}
        for dim in dims:
            spec = mapping["primary_columns"].get(dim)
            if spec is None:
                raise ValidationError(f"mapping has no primary column for {dim!r}")
            cell = row.get(spec["column"])
            if cell is None:
                raise ParseError(f"missing column {spec['column']!r}", line=i)
            try:
                primary[dim] = Choice(spec["values"][cell]).value
            except KeyError:
                raise ParseError(
                    f"unmapped value {cell!r} in column {spec['column']!r}", line=i
                )
        snapshot_col = mapping.get("snapshot_column")
        records.append(
            {
                "external_ref": ref,
                "content_snapshot": row.get(snapshot_col, "") if snapshot_col else "",
                "labels": [],
                "primary": primary,
            }
        )
    return _commit_import(
        workspace,
        campaign_name=name or mapping.get("campaign_name", "imported"),
        schema_dicts=list(mapping["schema"]),
        thresholds=tuple(mapping.get("thresholds") or workspace.default_thresholds),
        dims=dims,
        records=records,
    )
