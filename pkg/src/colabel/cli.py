"""Command-line interface: serve the API, move datasets, render reports.

The report-producing commands (``evaluate``, ``stats``) write delimited
outputs and matplotlib figures side by side into the chosen directory.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import metrics
from .config import load_config
from .errors import DomainError
from .evaluate import compare_models, parse_prediction_csv, parse_prediction_jsonl
from .fixtures import seed_demo_campaign
from .store import Workspace, export_campaign, import_campaign, import_mapped


def _open_workspace(storage: str | None) -> Workspace:
    return Workspace(storage)


def _load_campaign(campaign: str, storage: str | None):
    """Resolve --campaign as a workspace id/name or as an exported file path."""
    path = Path(campaign)
    if path.is_file():
        ws = Workspace()
        fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
        campaign_id = import_campaign(ws, path.read_bytes(), fmt)
        return ws.campaign(campaign_id)
    if storage is None:
        raise click.UsageError(
            f"{campaign!r} is not a file; pass --storage to resolve it as a campaign id"
        )
    ws = _open_workspace(storage)
    if campaign in ws.campaigns:
        return ws.campaign(campaign)
    by_name = ws.campaign_by_name(campaign)
    if by_name is None:
        raise click.ClickException(f"no campaign {campaign!r} in {storage}")
    return by_name


@click.group()
def main():
    """Community-driven curation of AI evaluation datasets."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default=None, help="Override the configured listen host.")
@click.option("--port", type=int, default=None, help="Override the configured listen port.")
def serve(config_path, host, port):
    """Run the HTTP service."""
    import uvicorn

    from .api import create_app

    cfg = load_config(config_path)
    if host:
        cfg.listen_host = host
    if port:
        cfg.listen_port = port
    app = create_app(config=cfg)
    uvicorn.run(app, host=cfg.listen_host, port=cfg.listen_port)


@main.command("create-demo")
@click.option("--storage", required=True, type=click.Path())
@click.option("--extra-entities", type=int, default=0)
def create_demo(storage, extra_entities):
    """Seed a demo campaign into a storage directory."""
    ws = _open_workspace(storage)
    ids = seed_demo_campaign(ws, n_extra_entities=extra_entities)
    click.echo(json.dumps(ids, indent=2))


@main.command()
@click.option("--storage", required=True, type=click.Path(exists=True))
@click.option("--campaign", required=True)
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]), default="jsonl")
@click.option("--out", type=click.Path(), default=None, help="Output file (default stdout).")
def export(storage, campaign, fmt, out):
    """Export a campaign dataset."""
    record = _load_campaign(campaign, storage)
    data = export_campaign(record, fmt)
    if out:
        Path(out).write_bytes(data)
        click.echo(f"wrote {len(data)} bytes to {out}")
    else:
        sys.stdout.buffer.write(data)


@main.command("import")
@click.option("--storage", required=True, type=click.Path())
@click.option("--file", "file_", required=True, type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]), default=None)
@click.option("--name", default=None, help="Name for the imported campaign.")
@click.option(
    "--mapping",
    type=click.Path(exists=True),
    default=None,
    help="Column mapping file for third-party CSV layouts.",
)
def import_(storage, file_, fmt, name, mapping):
    """Import a dataset file as a new campaign."""
    ws = _open_workspace(storage)
    data = Path(file_).read_bytes()
    try:
        if mapping:
            mapping_spec = json.loads(Path(mapping).read_text(encoding="utf-8"))
            campaign_id = import_mapped(ws, data, mapping_spec, name=name)
        else:
            if fmt is None:
                fmt = "csv" if file_.lower().endswith(".csv") else "jsonl"
            campaign_id = import_campaign(ws, data, fmt, name=name)
    except DomainError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}")
    record = ws.campaign(campaign_id)
    click.echo(
        json.dumps({"campaign_id": campaign_id, "entities": len(record.entities)}, indent=2)
    )


def _load_predictions(paths, dimension):
    sets = []
    for p in paths:
        path = Path(p)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() == ".csv":
            # The two-column CSV variant has no header record; the model
            # name comes from the file name and the score is taken to mean
            # the dimension's positive value.
            sets.append(
                parse_prediction_csv(text, model=path.stem, dimension=dimension, positive_means="")
            )
        else:
            sets.append(parse_prediction_jsonl(text, default_model=path.stem))
    return sets


@main.command()
@click.option("--campaign", required=True, help="Campaign id/name, or an exported dataset file.")
@click.option("--storage", type=click.Path(exists=True), default=None)
@click.option("--dimension", required=True)
@click.option(
    "--predictions",
    "prediction_paths",
    multiple=True,
    required=True,
    type=click.Path(exists=True),
    help="Prediction file (JSONL with header, or two-column CSV). Repeatable.",
)
@click.option("--out", required=True, type=click.Path())
@click.option("--weighting", type=click.Choice(["none", "consensus"]), default="none")
def evaluate(campaign, storage, dimension, prediction_paths, out, weighting):
    """Evaluate model scores against a campaign's primary labels.

    Writes report.json, report.txt, per-model ROC point CSVs and the ROC
    figure into --out.
    """
    from .report import render_text_report, write_evaluation_outputs

    record = _load_campaign(campaign, storage)
    sets = _load_predictions(prediction_paths, dimension)
    fixed = []
    for ps in sets:
        if not ps.positive_means:
            dim = record.schema.dimension(dimension)
            ps = type(ps)(ps.model, dimension, dim.positive_value, ps.scores)
        fixed.append(ps)
    try:
        comparison = compare_models(record, dimension, fixed, weighting=weighting)
    except DomainError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}")
    written = write_evaluation_outputs(comparison, out)
    click.echo(render_text_report(comparison))
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@click.option("--campaign", required=True, help="Campaign id/name, or an exported dataset file.")
@click.option("--storage", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def stats(campaign, storage, out):
    """Write per-entity disagreement stats, aggregates and the quadrant figure."""
    from .report import write_stats_outputs

    record = _load_campaign(campaign, storage)
    campaign_stats = metrics.campaign_stats(record)
    written = write_stats_outputs(
        campaign_stats, record.thresholds, record.schema.dimension_names, out
    )
    click.echo(
        f"{campaign_stats.n_entities} entities, "
        f"{campaign_stats.n_with_primary} with a primary label"
    )
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
