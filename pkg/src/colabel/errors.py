"""Exception hierarchy shared by every module.

Each error carries a stable machine-readable ``code`` used verbatim by the
HTTP layer, so callers can branch on codes instead of message text.
"""

from __future__ import annotations

from typing import Any


class DomainError(Exception):
    """Base class for all expected, caller-visible failures."""

    code = "domain_error"

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def as_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        payload.update(self.details)
        return payload


class UnknownCampaign(DomainError):
    code = "unknown_campaign"


class UnknownEntity(DomainError):
    code = "unknown_entity"


class ExcludedEntity(DomainError):
    code = "excluded_entity"


class SchemaMismatch(DomainError):
    """Submitted values do not cover the campaign's dimensions exactly."""

    code = "schema_mismatch"


class RevisionConflict(DomainError):
    """Compare-and-set failure: base revision is stale.

    Carries the revision (and values) the caller must re-read before retrying.
    """

    code = "revision_conflict"

    def __init__(self, message: str, current_revision: int, current_values: dict):
        super().__init__(
            message,
            current_revision=current_revision,
            current_values=current_values,
        )
        self.current_revision = current_revision
        self.current_values = current_values


class NoPrimaryYet(DomainError):
    code = "no_primary_yet"


class DuplicateName(DomainError):
    code = "duplicate_name"


class InvalidSchema(DomainError):
    code = "invalid_schema"


class DuplicateExternalRef(DomainError):
    """The external reference is already registered; carries the existing id."""

    code = "duplicate_external_ref"

    def __init__(self, message: str, existing_id: str):
        super().__init__(message, existing_id=existing_id)
        self.existing_id = existing_id


class AlreadyExcluded(DomainError):
    """Signal (not a failure) that the entity was excluded earlier."""

    code = "already_excluded"


class UnknownSection(DomainError):
    code = "unknown_section"


class UnknownScope(DomainError):
    code = "unknown_scope"


class UnknownParent(DomainError):
    code = "unknown_parent"


class UnknownDimension(DomainError):
    code = "unknown_dimension"


class DegenerateLabels(DomainError):
    """Labels contain a single class, so no nondegenerate ROC curve exists."""

    code = "degenerate_labels"


class ParseError(DomainError):
    code = "parse_error"

    def __init__(self, message: str, line: int):
        super().__init__(message, line=line)
        self.line = line


class AdapterFetchFailed(DomainError):
    code = "adapter_fetch_failed"


class AuthRequired(DomainError):
    code = "auth_required"


class ValidationError(DomainError):
    code = "validation_error"
