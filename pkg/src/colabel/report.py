"""Report rendering: text tables, JSON, ROC point CSVs and figures.

The CLI report path writes the delimited outputs next to the rendered
matplotlib figures so a campaign's evaluation can be read in a terminal,
re-plotted elsewhere, or browsed as images.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluate import EvaluationReport, ModelComparison
from .metrics import CampaignStats, Quadrant

MODEL_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")

QUADRANT_COLORS = {
    Quadrant.CLEAR_CUT.value: "#2ca02c",
    Quadrant.GENUINE_DIFFERENCE.value: "#d62728",
    Quadrant.AMBIGUOUS.value: "#9467bd",
    Quadrant.AGREED_EDGE_CASE.value: "#ff7f0e",
    Quadrant.INSUFFICIENT.value: "#7f7f7f",
}


def render_text_report(comparison: ModelComparison) -> str:
    """Human-readable summary table plus per-quadrant error rates."""
    lines = [f"Evaluation on dimension {comparison.dimension!r}"]
    header = f"{'model':<20} {'n':>5} {'auc':>7} {'best_thr':>9} {'accuracy':>9} {'tp':>4} {'fp':>4} {'tn':>4} {'fn':>4}"
    lines.append(header)
    lines.append("-" * len(header))
    for r in comparison.reports:
        auc_text = f"{r.auc:.4f}" if r.auc_defined else "undef"
        c = r.confusion
        lines.append(
            f"{r.model:<20} {r.n:>5} {auc_text:>7} {r.best_threshold:>9.4f} "
            f"{r.best_accuracy:>9.4f} {c['tp']:>4} {c['fp']:>4} {c['tn']:>4} {c['fn']:>4}"
        )
    for r in comparison.reports:
        if r.quadrant_breakdown:
            lines.append("")
            lines.append(f"{r.model}: error rate by quadrant")
            for q in r.quadrant_breakdown:
                lines.append(
                    f"  {q.quadrant:<20} n={q.n:<5} errors={q.errors:<5} rate={q.error_rate:.3f}"
                )
        if r.skipped_refs:
            lines.append(f"{r.model}: skipped {len(r.skipped_refs)} unmatched campaign refs")
        if r.unresolved_refs:
            lines.append(
                f"{r.model}: {len(r.unresolved_refs)} prediction refs not in the campaign"
            )
    return "\n".join(lines) + "\n"


def roc_points_csv(report: EvaluationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["fpr", "tpr", "threshold"])
    for p in report.roc_points:
        writer.writerow([p.fpr, p.tpr, "" if math.isinf(p.threshold) else p.threshold])
    return buf.getvalue()


def roc_figure(comparison: ModelComparison):
    """One ROC plot for all models, AUC in the legend."""
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot([0, 1], [0, 1], linestyle=":", color="#999999", linewidth=1)
    for i, report in enumerate(comparison.reports):
        if not report.auc_defined:
            continue
        xs = [p.fpr for p in report.roc_points]
        ys = [p.tpr for p in report.roc_points]
        ax.plot(
            xs,
            ys,
            label=f"{report.model} (AUC {report.auc:.2f})",
            color=MODEL_COLORS[i % len(MODEL_COLORS)],
        )
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_title(f"ROC, dimension {comparison.dimension!r}")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="lower right")
    fig.tight_layout()
    return fig


def quadrant_scatter_figure(
    stats: CampaignStats, thresholds: tuple[float, float], dimensions: Sequence[str]
):
    """Disagreement vs. low-confidence fraction, one panel per dimension.

    Entities with fewer than two labels are left out; the dashed lines mark
    the configured quadrant thresholds.
    """
    d_thresh, c_thresh = thresholds
    fig, axes = plt.subplots(1, len(dimensions), figsize=(5.5 * len(dimensions), 5), squeeze=False)
    for ax, dim in zip(axes[0], dimensions):
        rows = [s for s in stats.entities if s.n_labels >= 2]
        for s in rows:
            tag = s.quadrant[dim].value
            ax.scatter(
                s.disagreement[dim],
                s.low_conf_fraction[dim],
                color=QUADRANT_COLORS[tag],
                alpha=0.65,
                s=30,
            )
        ax.axvline(d_thresh, linestyle="--", color="#bbbbbb", linewidth=1)
        ax.axhline(c_thresh, linestyle="--", color="#bbbbbb", linewidth=1)
        ax.set_xlim(-0.05, 1.05)
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("disagreement (std of encoded labels)")
        ax.set_ylabel("fraction of low-confidence labels")
        ax.set_title(dim)
    handles = [
        plt.Line2D([], [], marker="o", linestyle="", color=color, label=tag)
        for tag, color in QUADRANT_COLORS.items()
        if tag != Quadrant.INSUFFICIENT.value
    ]
    fig.legend(handles=handles, loc="lower center", ncol=4, frameon=False)
    fig.tight_layout(rect=(0, 0.06, 1, 1))
    return fig


def entity_stats_csv(stats: CampaignStats, dimensions: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    columns = ["entity", "n_labels"]
    for d in dimensions:
        columns.extend([f"disagreement.{d}", f"low_conf_fraction.{d}", f"quadrant.{d}"])
    writer.writerow(columns)
    for s in stats.entities:
        row = [s.entity, s.n_labels]
        for d in dimensions:
            row.extend([s.disagreement[d], s.low_conf_fraction[d], s.quadrant[d].value])
        writer.writerow(row)
    return buf.getvalue()


def write_evaluation_outputs(comparison: ModelComparison, out_dir: str | Path) -> list[Path]:
    """Write report.json, report.txt, per-model ROC CSVs and the ROC figure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "report.json"
    path.write_text(json.dumps(comparison.as_dict(), indent=2) + "\n", encoding="utf-8")
    written.append(path)

    path = out / "report.txt"
    path.write_text(render_text_report(comparison), encoding="utf-8")
    written.append(path)

    for report in comparison.reports:
        safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in report.model)
        path = out / f"roc_points.{safe}.csv"
        path.write_text(roc_points_csv(report), encoding="utf-8")
        written.append(path)

    fig = roc_figure(comparison)
    path = out / "roc_curves.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written


def write_stats_outputs(
    stats: CampaignStats,
    thresholds: tuple[float, float],
    dimensions: Sequence[str],
    out_dir: str | Path,
) -> list[Path]:
    """Write the per-entity stats CSV, the aggregates JSON and the quadrant figure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "entity_stats.csv"
    path.write_text(entity_stats_csv(stats, dimensions), encoding="utf-8")
    written.append(path)

    aggregates = {
        "n_entities": stats.n_entities,
        "n_with_primary": stats.n_with_primary,
        "primary_counts": stats.primary_counts,
        "primary_fractions": stats.primary_fractions,
        "contributions": stats.contributions,
    }
    path = out / "aggregates.json"
    path.write_text(json.dumps(aggregates, indent=2) + "\n", encoding="utf-8")
    written.append(path)

    fig = quadrant_scatter_figure(stats, thresholds, dimensions)
    path = out / "disagreement_confidence.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written
