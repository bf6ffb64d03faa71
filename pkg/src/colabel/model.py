"""Core domain types: label schema, labels, entities, threads, datasheet.

All types here are immutable value objects, safe to share across threads.
Mutation happens by constructing a replacement (see `dataclasses.replace`)
inside the store's serialization points.

Canonical JSON shape: every type serializes through ``as_dict`` with
snake_case field names matching the attribute names exactly, and loads back
through the module-level ``*_from_dict`` helpers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InvalidSchema, SchemaMismatch, ValidationError


class Choice(str, Enum):
    """Binary judgment on one dimension."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class Confidence(str, Enum):
    """Self-reported certainty flag attached to an individual label."""

    HIGH = "high"
    LOW = "low"


# Encoding of a (choice, confidence) pair onto the [-1, +1] scale.
# The positive class maps to the negative half-axis, and low confidence
# halves the magnitude. This is the input to the disagreement metric.
ENCODING: dict[tuple[Choice, Confidence], float] = {
    (Choice.POSITIVE, Confidence.HIGH): -1.0,
    (Choice.POSITIVE, Confidence.LOW): -0.5,
    (Choice.NEGATIVE, Confidence.LOW): +0.5,
    (Choice.NEGATIVE, Confidence.HIGH): +1.0,
}

ENCODED_VALUES = frozenset(ENCODING.values())


@dataclass(frozen=True)
class LabelValue:
    """One user's judgment on one dimension."""

    dimension: str
    choice: Choice
    confidence: Confidence

    def __post_init__(self):
        object.__setattr__(self, "choice", Choice(self.choice))
        object.__setattr__(self, "confidence", Confidence(self.confidence))

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "choice": self.choice.value,
            "confidence": self.confidence.value,
        }


def encode(label_value: LabelValue) -> float:
    """Map a label value onto {-1.0, -0.5, +0.5, +1.0}.

    Total and deterministic: a bijection between the four
    (choice, confidence) pairs and the four encoded values.
    """
    return ENCODING[(label_value.choice, label_value.confidence)]


def label_value_from_dict(d: Mapping) -> LabelValue:
    return LabelValue(
        dimension=d["dimension"],
        choice=Choice(d["choice"]),
        confidence=Confidence(d["confidence"]),
    )


@dataclass(frozen=True)
class TextRevision:
    """One entry in an append-only revision history."""

    revision: int
    text: str
    author: str
    timestamp: float

    def as_dict(self) -> dict:
        return {
            "revision": self.revision,
            "text": self.text,
            "author": self.author,
            "timestamp": self.timestamp,
        }


@dataclass(frozen=True)
class RevisionedText:
    """Append-only revisioned text; always holds at least one revision."""

    revisions: tuple[TextRevision, ...]

    def __post_init__(self):
        if not self.revisions:
            raise ValidationError("revisioned text needs at least one revision")

    @property
    def current(self) -> str:
        return self.revisions[-1].text

    @property
    def revision(self) -> int:
        return self.revisions[-1].revision

    def revised(self, text: str, author: str, timestamp: float) -> "RevisionedText":
        entry = TextRevision(self.revision + 1, text, author, timestamp)
        return RevisionedText(self.revisions + (entry,))

    def as_dict(self) -> dict:
        return {"revisions": [r.as_dict() for r in self.revisions]}


def seed_text(text: str, author: str, timestamp: float) -> RevisionedText:
    return RevisionedText((TextRevision(1, text, author, timestamp),))


def revisioned_text_from_dict(d: Mapping) -> RevisionedText:
    return RevisionedText(
        tuple(
            TextRevision(r["revision"], r["text"], r["author"], r["timestamp"])
            for r in d["revisions"]
        )
    )


@dataclass(frozen=True)
class LabelDimension:
    """One binary labeling dimension of a campaign's schema."""

    name: str
    positive_value: str
    negative_value: str
    definition_text: RevisionedText

    def __post_init__(self):
        if not self.name:
            raise InvalidSchema("dimension name must be non-empty")
        if self.positive_value == self.negative_value:
            raise InvalidSchema(
                f"dimension {self.name!r}: positive and negative values must differ"
            )

    def display(self, choice: Choice) -> str:
        return self.positive_value if choice is Choice.POSITIVE else self.negative_value

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "positive_value": self.positive_value,
            "negative_value": self.negative_value,
            "definition_text": self.definition_text.as_dict(),
        }


@dataclass(frozen=True)
class LabelSchema:
    """Ordered list of dimensions; names unique, at least one dimension."""

    dimensions: tuple[LabelDimension, ...]

    def __post_init__(self):
        if not self.dimensions:
            raise InvalidSchema("schema needs at least one dimension")
        names = [d.name for d in self.dimensions]
        if len(set(names)) != len(names):
            raise InvalidSchema("dimension names must be unique")

    @property
    def dimension_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dimensions)

    def dimension(self, name: str) -> LabelDimension:
        for d in self.dimensions:
            if d.name == name:
                return d
        raise KeyError(name)

    def sort_values(self, values: Iterable[LabelValue]) -> tuple[LabelValue, ...]:
        """Validate that values cover the schema exactly; return schema order."""
        by_dim: dict[str, LabelValue] = {}
        for v in values:
            if v.dimension in by_dim:
                raise SchemaMismatch(f"duplicate value for dimension {v.dimension!r}")
            by_dim[v.dimension] = v
        missing = [n for n in self.dimension_names if n not in by_dim]
        extra = [n for n in by_dim if n not in self.dimension_names]
        if missing or extra:
            raise SchemaMismatch(
                "values must cover the schema exactly"
                + (f"; missing {missing}" if missing else "")
                + (f"; unknown {extra}" if extra else "")
            )
        return tuple(by_dim[n] for n in self.dimension_names)

    def sort_choices(self, choices: Mapping[str, Choice | str]) -> tuple[tuple[str, Choice], ...]:
        """Validate a per-dimension choice map; return (dimension, choice) pairs in schema order."""
        missing = [n for n in self.dimension_names if n not in choices]
        extra = [n for n in choices if n not in self.dimension_names]
        if missing or extra:
            raise SchemaMismatch(
                "choices must cover the schema exactly"
                + (f"; missing {missing}" if missing else "")
                + (f"; unknown {extra}" if extra else "")
            )
        return tuple((n, Choice(choices[n])) for n in self.dimension_names)

    def as_dict(self) -> dict:
        return {"dimensions": [d.as_dict() for d in self.dimensions]}


def schema_from_dicts(dimensions: Sequence[Mapping], author: str, timestamp: float) -> LabelSchema:
    """Build a schema from plain dicts, seeding definition revisions.

    Each dict needs ``name``, ``positive_value``, ``negative_value`` and an
    optional ``definition`` (free text, becomes revision 1).
    """
    dims = []
    for d in dimensions:
        try:
            definition = d.get("definition") or f"Definition of {d['name']} (to be written)."
            dims.append(
                LabelDimension(
                    name=d["name"],
                    positive_value=d["positive_value"],
                    negative_value=d["negative_value"],
                    definition_text=seed_text(definition, author, timestamp),
                )
            )
        except KeyError as exc:
            raise InvalidSchema(f"dimension is missing field {exc}")
    return LabelSchema(tuple(dims))


def schema_from_dict(d: Mapping) -> LabelSchema:
    return LabelSchema(
        tuple(
            LabelDimension(
                name=dim["name"],
                positive_value=dim["positive_value"],
                negative_value=dim["negative_value"],
                definition_text=revisioned_text_from_dict(dim["definition_text"]),
            )
            for dim in d["dimensions"]
        )
    )


@dataclass(frozen=True)
class IndividualLabel:
    """One user's judgment on one entity; editable only by its author.

    Exactly one exists per (author, entity). Resubmission replaces ``values``
    and ``note`` in place and bumps ``updated_at``; ``created_at`` is kept.
    """

    author: str
    entity: str
    values: tuple[LabelValue, ...]
    note: Optional[str]
    created_at: float
    updated_at: float

    def choices(self) -> dict[str, Choice]:
        return {v.dimension: v.choice for v in self.values}

    def value_for(self, dimension: str) -> LabelValue:
        for v in self.values:
            if v.dimension == dimension:
                return v
        raise KeyError(dimension)

    def as_dict(self) -> dict:
        return {
            "author": self.author,
            "entity": self.entity,
            "values": [v.as_dict() for v in self.values],
            "note": self.note,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


def individual_label_from_dict(d: Mapping) -> IndividualLabel:
    return IndividualLabel(
        author=d["author"],
        entity=d["entity"],
        values=tuple(label_value_from_dict(v) for v in d["values"]),
        note=d.get("note"),
        created_at=d["created_at"],
        updated_at=d["updated_at"],
    )


@dataclass(frozen=True)
class PrimaryRevision:
    """One entry in a primary label's append-only history."""

    revision: int
    values: tuple[tuple[str, Choice], ...]
    editor: str
    timestamp: float
    rationale: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "revision": self.revision,
            "values": {d: c.value for d, c in self.values},
            "editor": self.editor,
            "timestamp": self.timestamp,
            "rationale": self.rationale,
        }


@dataclass(frozen=True)
class PrimaryLabel:
    """The consensus label of an entity.

    Initialized from the first submitted individual label, afterwards changed
    only through explicit compare-and-set edits. ``revision`` always equals
    ``len(history)`` and the history is append-only.
    """

    entity: str
    values: tuple[tuple[str, Choice], ...]
    revision: int
    history: tuple[PrimaryRevision, ...]

    def choices(self) -> dict[str, Choice]:
        return dict(self.values)

    def choices_dict(self) -> dict[str, str]:
        return {d: c.value for d, c in self.values}

    def edited(
        self,
        values: tuple[tuple[str, Choice], ...],
        editor: str,
        timestamp: float,
        rationale: Optional[str],
    ) -> "PrimaryLabel":
        entry = PrimaryRevision(self.revision + 1, values, editor, timestamp, rationale)
        return PrimaryLabel(self.entity, values, self.revision + 1, self.history + (entry,))

    def as_dict(self) -> dict:
        return {
            "entity": self.entity,
            "values": {d: c.value for d, c in self.values},
            "revision": self.revision,
            "history": [h.as_dict() for h in self.history],
        }


def initial_primary(
    entity: str,
    values: tuple[tuple[str, Choice], ...],
    editor: str,
    timestamp: float,
) -> PrimaryLabel:
    first = PrimaryRevision(1, values, editor, timestamp, None)
    return PrimaryLabel(entity, values, 1, (first,))


def primary_from_dict(d: Mapping, schema: LabelSchema) -> PrimaryLabel:
    values = schema.sort_choices(d["values"])
    history = tuple(
        PrimaryRevision(
            revision=h["revision"],
            values=schema.sort_choices(h["values"]),
            editor=h["editor"],
            timestamp=h["timestamp"],
            rationale=h.get("rationale"),
        )
        for h in d["history"]
    )
    return PrimaryLabel(d["entity"], values, d["revision"], history)


@dataclass(frozen=True)
class Entity:
    """One data point under curation."""

    id: str
    external_ref: str
    content_snapshot: str
    added_by: str
    added_at: float
    excluded: bool = False
    exclusion_reason: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "external_ref": self.external_ref,
            "content_snapshot": self.content_snapshot,
            "added_by": self.added_by,
            "added_at": self.added_at,
            "excluded": self.excluded,
            "exclusion_reason": self.exclusion_reason,
        }


def entity_from_dict(d: Mapping) -> Entity:
    return Entity(
        id=d["id"],
        external_ref=d["external_ref"],
        content_snapshot=d["content_snapshot"],
        added_by=d["added_by"],
        added_at=d["added_at"],
        excluded=d.get("excluded", False),
        exclusion_reason=d.get("exclusion_reason"),
    )


@dataclass(frozen=True)
class Post:
    """One talk post; append-only, optionally a reply to a parent post."""

    id: str
    author: str
    body: str
    timestamp: float
    parent: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "author": self.author,
            "body": self.body,
            "timestamp": self.timestamp,
            "parent": self.parent,
        }


@dataclass(frozen=True)
class Topic:
    """A titled discussion topic within a talk thread."""

    title: str
    posts: tuple[Post, ...] = ()

    def __post_init__(self):
        if not self.title:
            raise ValidationError("topic title must be non-empty")

    def as_dict(self) -> dict:
        return {"title": self.title, "posts": [p.as_dict() for p in self.posts]}


@dataclass(frozen=True)
class TalkThread:
    """Deliberation thread attached to an entity or to the campaign itself."""

    scope: str  # "campaign" or an entity id
    topics: tuple[Topic, ...] = ()

    def topic(self, title: str) -> Optional[Topic]:
        for t in self.topics:
            if t.title == title:
                return t
        return None

    def post_count(self) -> int:
        return sum(len(t.posts) for t in self.topics)

    def with_post(self, topic_title: str, post: Post) -> "TalkThread":
        for i, t in enumerate(self.topics):
            if t.title == topic_title:
                updated = Topic(t.title, t.posts + (post,))
                return TalkThread(self.scope, self.topics[:i] + (updated,) + self.topics[i + 1 :])
        return TalkThread(self.scope, self.topics + (Topic(topic_title, (post,)),))

    def as_dict(self) -> dict:
        return {"scope": self.scope, "topics": [t.as_dict() for t in self.topics]}


@dataclass(frozen=True)
class Notification:
    """Inbox entry telling a user the primary label moved or they were mentioned."""

    id: str
    recipient: str
    entity: str
    kind: str  # "primary_changed" or "mentioned"
    old_values: Optional[dict[str, str]]
    new_values: Optional[dict[str, str]]
    created_at: float
    read: bool = False

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "recipient": self.recipient,
            "entity": self.entity,
            "kind": self.kind,
            "old_values": self.old_values,
            "new_values": self.new_values,
            "created_at": self.created_at,
            "read": self.read,
        }


MANDATORY_SECTIONS = ("label definitions", "data statement", "inclusion criteria")


@dataclass(frozen=True)
class DatasheetSection:
    name: str
    history: RevisionedText

    def as_dict(self) -> dict:
        return {"name": self.name, "history": self.history.as_dict()}


@dataclass(frozen=True)
class Datasheet:
    """Living campaign documentation, ordered revisioned sections.

    The mandatory sections (label definitions, data statement, inclusion
    criteria) are always present and can only be revised, never removed.
    """

    sections: tuple[DatasheetSection, ...]

    def __post_init__(self):
        names = [s.name for s in self.sections]
        for required in MANDATORY_SECTIONS:
            if required not in names:
                raise InvalidSchema(f"datasheet is missing mandatory section {required!r}")
        if len(set(names)) != len(names):
            raise InvalidSchema("datasheet section names must be unique")

    def section(self, name: str) -> Optional[DatasheetSection]:
        for s in self.sections:
            if s.name == name:
                return s
        return None

    def with_revision(self, name: str, text: str, author: str, timestamp: float) -> "Datasheet":
        out = []
        for s in self.sections:
            if s.name == name:
                out.append(DatasheetSection(name, s.history.revised(text, author, timestamp)))
            else:
                out.append(s)
        return Datasheet(tuple(out))

    def with_section(self, name: str, text: str, author: str, timestamp: float) -> "Datasheet":
        return Datasheet(
            self.sections + (DatasheetSection(name, seed_text(text, author, timestamp)),)
        )

    def as_dict(self) -> dict:
        return {"sections": [s.as_dict() for s in self.sections]}


def seed_datasheet(sections: Mapping[str, str], author: str, timestamp: float) -> Datasheet:
    """Build the initial datasheet; raises InvalidSchema if a mandatory section is absent."""
    missing = [n for n in MANDATORY_SECTIONS if n not in sections]
    if missing:
        raise InvalidSchema(f"seed datasheet missing mandatory sections: {missing}")
    return Datasheet(
        tuple(
            DatasheetSection(name, seed_text(text, author, timestamp))
            for name, text in sections.items()
        )
    )


def datasheet_from_dict(d: Mapping) -> Datasheet:
    return Datasheet(
        tuple(
            DatasheetSection(s["name"], revisioned_text_from_dict(s["history"]))
            for s in d["sections"]
        )
    )


def replace_entity(entity: Entity, **changes) -> Entity:
    return replace(entity, **changes)
