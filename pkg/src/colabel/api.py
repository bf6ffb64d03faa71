"""HTTP/JSON boundary over the engine, campaign service, store and eval.

Every response is enveloped: ``{"ok": true, "data": ...}`` on success and
``{"ok": false, "error": {"code", "message", ...}}`` on failure, with one
fixed HTTP status per domain error code. A stale compare-and-set edit maps
to 409 and the error payload carries the current revision and values so
clients can re-render before retrying.

Bearer-token auth against a local user registry guards every mutating
endpoint; reads are open. The quick-label endpoint is the in-workflow
labeling surface: an unknown external ref is fetched through the
campaign's source adapter and the entity plus its first label are created
in one atomic commit, so no observable state has the entity without a
label.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

from fastapi import Body, Depends, FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse

from . import metrics
from .campaign import CampaignService, SortMode
from .config import AppConfig
from .engine import EDIT_ACKNOWLEDGEMENT, LabelEngine
from .errors import (
    AdapterFetchFailed,
    AuthRequired,
    DomainError,
    UnknownEntity,
    ValidationError,
)
from .evaluate import PredictionSet, compare_models
from .model import LabelValue, label_value_from_dict
from .store import User, Workspace, export_campaign, import_campaign

# One HTTP status per error code. already_excluded never crosses the wire
# as an error: the exclude endpoint reports it inside an ok envelope.
ERROR_STATUS = {
    "unknown_campaign": 404,
    "unknown_entity": 404,
    "no_primary_yet": 404,
    "unknown_section": 404,
    "unknown_scope": 404,
    "unknown_parent": 404,
    "unknown_dimension": 404,
    "schema_mismatch": 400,
    "invalid_schema": 400,
    "validation_error": 400,
    "parse_error": 400,
    "degenerate_labels": 400,
    "excluded_entity": 409,
    "duplicate_name": 409,
    "duplicate_external_ref": 409,
    "revision_conflict": 409,
    "already_excluded": 200,
    "auth_required": 401,
    "adapter_fetch_failed": 502,
    "domain_error": 400,
}


class SourceAdapter(ABC):
    """Read-only fetcher turning an external ref into a content snapshot.

    Fetch failures must raise AdapterFetchFailed; an entity is never
    created from a failed fetch.
    """

    name: str

    @abstractmethod
    def fetch(self, external_ref: str) -> str: ...


class StaticAdapter(SourceAdapter):
    """Adapter over pre-registered content, for tests and fixtures."""

    name = "static"

    def __init__(self, contents: Optional[dict[str, str]] = None):
        self.contents = dict(contents or {})

    def register(self, external_ref: str, content: str) -> None:
        self.contents[external_ref] = content

    def fetch(self, external_ref: str) -> str:
        try:
            return self.contents[external_ref]
        except KeyError:
            raise AdapterFetchFailed(f"no registered content for {external_ref!r}")


def ok(data) -> dict:
    return {"ok": True, "data": data}


def quick_label(
    workspace: Workspace,
    engine: LabelEngine,
    adapter: SourceAdapter,
    user: str,
    campaign_id: str,
    external_ref: str,
    values: list[LabelValue],
    note: Optional[str] = None,
) -> tuple[str, dict]:
    """Label by external ref, creating the entity on first sight.

    Returns (entity_id, submit outcome dict). Entity creation and the first
    label commit as one event, and a failed adapter fetch leaves the
    campaign untouched.
    """
    campaign = workspace.campaign(campaign_id)
    existing = campaign.ref_index.get(external_ref)
    if existing is not None:
        outcome = engine.submit_individual_label(user, existing, values, note)
        return existing, outcome.as_dict()
    content = adapter.fetch(external_ref)  # before any allocation or lock
    with workspace.campaign_lock(campaign_id):
        existing = campaign.ref_index.get(external_ref)
        if existing is None:
            sorted_values = campaign.schema.sort_values(values)
            entity_id = workspace.allocate_id("e")
            event = {
                "op": "quick_label_added",
                "campaign_id": campaign_id,
                "entity_id": entity_id,
                "external_ref": external_ref,
                "content_snapshot": content,
                "added_by": user,
                "author": user,
                "values": [v.as_dict() for v in sorted_values],
                "note": note,
                "creates_primary": True,
                "ts": workspace.clock(),
            }
            workspace.commit(event)
            snapshot = campaign.primaries[entity_id].choices_dict()
            return entity_id, {
                "status": "recorded_agree",
                "entity_link": entity_id,
                "primary_snapshot": snapshot,
            }
    # Lost the race: someone registered the ref first, so just label it.
    outcome = engine.submit_individual_label(user, existing, values, note)
    return existing, outcome.as_dict()


def create_app(
    workspace: Optional[Workspace] = None,
    config: Optional[AppConfig] = None,
) -> FastAPI:
    config = config or AppConfig()
    if workspace is None:
        workspace = Workspace(
            config.storage_path,
            default_thresholds=config.quadrant_thresholds,
            salt=config.export_salt,
        )
    app = FastAPI(title="colabel", version="0.1.0")
    app.state.workspace = workspace
    app.state.engine = LabelEngine(workspace)
    app.state.service = CampaignService(workspace)
    app.state.adapters = {"static": StaticAdapter()}
    app.state.config = config

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError):
        status = ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(
            status_code=status, content={"ok": False, "error": exc.as_payload()}
        )

    def auth_user(request: Request) -> Optional[User]:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            return None
        return workspace.user_by_token(header[7:].strip())

    def required_user(request: Request) -> User:
        user = auth_user(request)
        if user is None:
            raise AuthRequired("a valid bearer token is required for mutations")
        return user

    def entity_in(campaign_id: str, entity_id: str) -> None:
        campaign = workspace.campaign(campaign_id)
        if entity_id not in campaign.entities:
            raise UnknownEntity(f"no entity {entity_id!r} in campaign {campaign_id!r}")

    def parse_values(raw) -> list[LabelValue]:
        if not isinstance(raw, list):
            raise ValidationError("values must be a list of label values")
        try:
            return [label_value_from_dict(v) for v in raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad label value: {exc}")

    # -- session -----------------------------------------------------------

    @app.get("/health")
    async def health():
        return ok({"status": "up", "version": app.version})

    @app.post("/users")
    async def register_user(payload: dict = Body(...)):
        name = payload.get("display_name", "")
        user = workspace.register_user(name)
        return ok({"user_id": user.id, "display_name": user.display_name, "token": user.token})

    @app.get("/users/me")
    async def whoami(user: User = Depends(required_user)):
        return ok({"user_id": user.id, "display_name": user.display_name})

    # -- campaigns -----------------------------------------------------------

    @app.get("/campaigns")
    async def list_campaigns():
        return ok(app.state.service.list_campaigns())

    @app.post("/campaigns")
    async def create_campaign(payload: dict = Body(...), user: User = Depends(required_user)):
        thresholds = payload.get("thresholds")
        campaign_id = app.state.service.create_campaign(
            payload.get("name", ""),
            payload.get("dimensions", []),
            payload.get("datasheet", {}),
            created_by=user.id,
            thresholds=tuple(thresholds) if thresholds else None,
        )
        return ok({"campaign_id": campaign_id})

    @app.get("/campaigns/{campaign_id}")
    async def campaign_detail(campaign_id: str):
        campaign = workspace.campaign(campaign_id)
        detail = campaign.summary()
        detail["schema"] = campaign.schema.as_dict()
        detail["datasheet"] = campaign.datasheet.as_dict()
        return ok(detail)

    @app.get("/campaigns/{campaign_id}/stats")
    async def campaign_statistics(campaign_id: str):
        campaign = workspace.campaign(campaign_id)
        return ok(metrics.campaign_stats(campaign).as_dict())

    @app.get("/campaigns/{campaign_id}/table")
    async def campaign_table(
        campaign_id: str,
        request: Request,
        sort: str = Query(default=SortMode.RECENT_ACTIVITY.value),
        page: int = Query(default=1),
        page_size: int = Query(default=50),
    ):
        try:
            mode = SortMode(sort)
        except ValueError:
            raise ValidationError(f"unknown sort mode {sort!r}")
        viewer = auth_user(request)
        rows = app.state.service.list_table(
            campaign_id,
            viewer.id if viewer else None,
            mode,
            page=page,
            page_size=page_size,
        )
        return ok([r.as_dict() for r in rows])

    # -- entities -------------------------------------------------------------

    @app.post("/campaigns/{campaign_id}/entities")
    async def add_entity(
        campaign_id: str, payload: dict = Body(...), user: User = Depends(required_user)
    ):
        entity_id = app.state.service.add_entity(
            campaign_id,
            payload.get("external_ref", ""),
            payload.get("content_snapshot", ""),
            user.id,
        )
        return ok({"entity_id": entity_id})

    @app.get("/campaigns/{campaign_id}/entities/{entity_id}")
    async def entity_view(campaign_id: str, entity_id: str, request: Request):
        entity_in(campaign_id, entity_id)
        viewer = auth_user(request)
        view = app.state.engine.get_entity_view(viewer.id if viewer else None, entity_id)
        return ok(view.as_dict())

    @app.post("/campaigns/{campaign_id}/entities/{entity_id}/labels")
    async def submit_label(
        campaign_id: str,
        entity_id: str,
        payload: dict = Body(...),
        user: User = Depends(required_user),
    ):
        entity_in(campaign_id, entity_id)
        outcome = app.state.engine.submit_individual_label(
            user.id, entity_id, parse_values(payload.get("values")), payload.get("note")
        )
        return ok(outcome.as_dict())

    @app.get("/campaigns/{campaign_id}/entities/{entity_id}/primary")
    async def get_primary(campaign_id: str, entity_id: str):
        entity_in(campaign_id, entity_id)
        campaign = workspace.campaign(campaign_id)
        primary = campaign.primaries.get(entity_id)
        return ok(
            {
                "primary": primary.as_dict() if primary else None,
                "requires_acknowledgement": True,
                "acknowledgement_text": EDIT_ACKNOWLEDGEMENT,
            }
        )

    @app.put("/campaigns/{campaign_id}/entities/{entity_id}/primary")
    async def edit_primary(
        campaign_id: str,
        entity_id: str,
        payload: dict = Body(...),
        user: User = Depends(required_user),
    ):
        entity_in(campaign_id, entity_id)
        if "base_revision" not in payload:
            raise ValidationError("base_revision is required")
        primary = app.state.engine.edit_primary_label(
            user.id,
            entity_id,
            payload.get("values", {}),
            int(payload["base_revision"]),
            payload.get("rationale"),
        )
        return ok(primary.as_dict())

    @app.post("/campaigns/{campaign_id}/entities/{entity_id}/exclude")
    async def exclude_entity(
        campaign_id: str,
        entity_id: str,
        payload: dict = Body(...),
        user: User = Depends(required_user),
    ):
        status = app.state.service.exclude_entity(
            campaign_id, entity_id, user.id, payload.get("reason", "")
        )
        return ok({"status": status})

    # -- talk ---------------------------------------------------------------------

    @app.get("/campaigns/{campaign_id}/talk")
    async def campaign_talk(campaign_id: str):
        return ok(app.state.service.get_thread(campaign_id).as_dict())

    @app.post("/campaigns/{campaign_id}/talk")
    async def post_campaign_talk(
        campaign_id: str, payload: dict = Body(...), user: User = Depends(required_user)
    ):
        post_id = app.state.service.post_to_thread(
            campaign_id,
            payload.get("topic", ""),
            payload.get("body", ""),
            user.id,
            parent=payload.get("parent"),
        )
        return ok({"post_id": post_id})

    @app.get("/campaigns/{campaign_id}/entities/{entity_id}/talk")
    async def entity_talk(campaign_id: str, entity_id: str):
        entity_in(campaign_id, entity_id)
        return ok(app.state.service.get_thread(campaign_id, entity_id).as_dict())

    @app.post("/campaigns/{campaign_id}/entities/{entity_id}/talk")
    async def post_entity_talk(
        campaign_id: str,
        entity_id: str,
        payload: dict = Body(...),
        user: User = Depends(required_user),
    ):
        post_id = app.state.service.post_to_thread(
            campaign_id,
            payload.get("topic", ""),
            payload.get("body", ""),
            user.id,
            entity_id=entity_id,
            parent=payload.get("parent"),
        )
        return ok({"post_id": post_id})

    # -- datasheet -------------------------------------------------------------------

    @app.get("/campaigns/{campaign_id}/datasheet")
    async def get_datasheet(campaign_id: str):
        return ok(app.state.service.get_datasheet(campaign_id))

    @app.put("/campaigns/{campaign_id}/datasheet/{section}")
    async def edit_datasheet(
        campaign_id: str,
        section: str,
        payload: dict = Body(...),
        user: User = Depends(required_user),
    ):
        revision = app.state.service.edit_datasheet_section(
            campaign_id, section, payload.get("text", ""), user.id
        )
        return ok({"section": section, "revision": revision})

    @app.post("/campaigns/{campaign_id}/datasheet")
    async def add_datasheet(
        campaign_id: str, payload: dict = Body(...), user: User = Depends(required_user)
    ):
        revision = app.state.service.add_datasheet_section(
            campaign_id, payload.get("section", ""), payload.get("text", ""), user.id
        )
        return ok({"section": payload.get("section", ""), "revision": revision})

    @app.put("/campaigns/{campaign_id}/definitions/{dimension}")
    async def revise_definition(
        campaign_id: str,
        dimension: str,
        payload: dict = Body(...),
        user: User = Depends(required_user),
    ):
        revision = app.state.service.revise_dimension_definition(
            campaign_id, dimension, payload.get("text", ""), user.id
        )
        return ok({"dimension": dimension, "revision": revision})

    # -- export / import / evaluate -----------------------------------------------------

    @app.get("/campaigns/{campaign_id}/export")
    async def export_endpoint(campaign_id: str, format: str = Query(default="jsonl")):
        campaign = workspace.campaign(campaign_id)
        data = export_campaign(campaign, format)
        media = "application/x-ndjson" if format == "jsonl" else "text/csv"
        return Response(content=data, media_type=media)

    @app.post("/campaigns/import")
    async def import_endpoint(
        request: Request,
        format: str = Query(default="jsonl"),
        name: Optional[str] = Query(default=None),
        user: User = Depends(required_user),
    ):
        body = await request.body()
        campaign_id = import_campaign(workspace, body, format, name=name)
        return ok({"campaign_id": campaign_id})

    @app.post("/campaigns/{campaign_id}/evaluate")
    async def evaluate_endpoint(campaign_id: str, payload: dict = Body(...)):
        campaign = workspace.campaign(campaign_id)
        sets = []
        for p in payload.get("predictions", []):
            try:
                sets.append(
                    PredictionSet(
                        model=p["model"],
                        dimension=payload.get("dimension", p.get("dimension", "")),
                        positive_means=p["positive_means"],
                        scores={str(k): float(v) for k, v in p["scores"].items()},
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"bad prediction set: {exc}")
        comparison = compare_models(
            campaign,
            payload.get("dimension", ""),
            sets,
            weighting=payload.get("weighting", "none"),
        )
        return ok(comparison.as_dict())

    # -- notifications -------------------------------------------------------------------

    @app.get("/notifications")
    async def list_notifications(
        request: Request,
        unread_only: bool = Query(default=False),
        user: User = Depends(required_user),
    ):
        inbox = app.state.engine.list_notifications(user.id, unread_only)
        return ok([n.as_dict() for n in inbox])

    @app.post("/notifications/read")
    async def mark_read(payload: dict = Body(default={}), user: User = Depends(required_user)):
        marked = app.state.engine.mark_notifications_read(user.id, payload.get("ids"))
        return ok({"marked": marked})

    # -- quick label -----------------------------------------------------------------------

    @app.post("/quick-label")
    async def quick_label_endpoint(payload: dict = Body(...), user: User = Depends(required_user)):
        campaign_id = payload.get("campaign", "")
        adapter_name = app.state.config.adapter
        adapter = app.state.adapters.get(adapter_name)
        if adapter is None:
            raise ValidationError(f"no adapter named {adapter_name!r} is configured")
        entity_id, outcome = quick_label(
            workspace,
            app.state.engine,
            adapter,
            user.id,
            campaign_id,
            payload.get("external_ref", ""),
            parse_values(payload.get("values")),
            payload.get("note"),
        )
        outcome["entity_id"] = entity_id
        return ok(outcome)

    if config.ui_path and Path(config.ui_path).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_path, html=True), name="ui")

    return app
