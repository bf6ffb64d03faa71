"""Model evaluation against curated primary labels.

Computes ROC curves, trapezoidal AUC, accuracy-maximizing decision
thresholds and confusion counts for candidate model scores, and joins the
per-entity disagreement statistics so errors can be broken down by quadrant
(how do the models fare on clear-cut vs. ambiguous entities?).

Conventions: the "positive" class of a dimension is its schema
``positive_value``; a score is the predicted probability of that class and
an instance is classified positive when ``score >= threshold`` (closed
boundary). Trapezoidal AUC over the tie-grouped ROC points equals the
pairwise comparison statistic with ties counted as one half.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

from . import metrics
from .errors import DegenerateLabels, ParseError, UnknownDimension, ValidationError
from .model import Choice

if TYPE_CHECKING:
    from .store import CampaignRecord


@dataclass(frozen=True)
class RocPoint:
    fpr: float
    tpr: float
    threshold: float  # math.inf for the leading all-negative point

    def as_dict(self) -> dict:
        thr = None if math.isinf(self.threshold) else self.threshold
        return {"fpr": self.fpr, "tpr": self.tpr, "threshold": thr}


def _to_bools(labels: Sequence) -> list[bool]:
    out = []
    for lbl in labels:
        if isinstance(lbl, bool):
            out.append(lbl)
        else:
            out.append(Choice(lbl) is Choice.POSITIVE)
    return out


def roc(labels: Sequence, scores: Sequence[float]) -> list[RocPoint]:
    """ROC points at every distinct score threshold, descending.

    ``labels`` holds `Choice` values (or "positive"/"negative" strings, or
    plain booleans with True = positive). Tied scores are grouped into a
    single step, which makes the curve pass diagonally through ties. Starts
    at (0, 0) and ends at (1, 1). Raises DegenerateLabels unless both
    classes are present.
    """
    bools = _to_bools(labels)
    if len(bools) != len(scores):
        raise ValidationError("labels and scores must have equal length")
    n_pos = sum(bools)
    n_neg = len(bools) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("both a positive and a negative label are required")
    by_score: dict[float, list[bool]] = {}
    for lbl, s in zip(bools, scores):
        by_score.setdefault(float(s), []).append(lbl)
    points = [RocPoint(0.0, 0.0, math.inf)]
    tp = fp = 0
    for s in sorted(by_score, reverse=True):
        group = by_score[s]
        tp += sum(group)
        fp += len(group) - sum(group)
        points.append(RocPoint(fp / n_neg, tp / n_pos, s))
    return points


def auc(labels: Sequence, scores: Sequence[float]) -> float:
    """Trapezoidal area under the ROC curve.

    Equals the fraction of (positive, negative) pairs where the positive
    scores higher, counting ties as one half.
    """
    points = roc(labels, scores)
    area = 0.0
    for a, b in zip(points, points[1:]):
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0
    return area


def threshold_candidates(scores: Sequence[float]) -> list[float]:
    """Candidate thresholds: midpoints of adjacent distinct scores plus {0, 1}."""
    distinct = sorted(set(float(s) for s in scores))
    candidates = {0.0, 1.0}
    for a, b in zip(distinct, distinct[1:]):
        candidates.add((a + b) / 2.0)
    return sorted(candidates)


def accuracy_at(
    labels: Sequence[bool],
    scores: Sequence[float],
    threshold: float,
    weights: Optional[Sequence[float]] = None,
) -> float:
    """(Weighted) accuracy of the rule ``score >= threshold => positive``."""
    if weights is None:
        correct = sum(1 for lbl, s in zip(labels, scores) if (s >= threshold) == lbl)
        return correct / len(labels)
    total = sum(weights)
    if total == 0:
        return 0.0
    correct = sum(w for lbl, s, w in zip(labels, scores, weights) if (s >= threshold) == lbl)
    return correct / total


def best_accuracy_threshold(
    labels: Sequence,
    scores: Sequence[float],
    weights: Optional[Sequence[float]] = None,
) -> tuple[float, float]:
    """Threshold from the candidate set that maximizes accuracy.

    Sweeps midpoints of adjacent distinct scores plus the boundaries 0 and
    1; ties resolve to the smallest such threshold. Works for single-class
    label lists too (accuracy is still well defined there); only an empty
    input raises.
    """
    bools = _to_bools(labels)
    if not bools:
        raise DegenerateLabels("at least one labeled instance is required")
    if len(bools) != len(scores):
        raise ValidationError("labels and scores must have equal length")
    best_thr = 0.0
    best_acc = -1.0
    for t in threshold_candidates(scores):
        acc = accuracy_at(bools, scores, t, weights)
        if acc > best_acc:
            best_thr, best_acc = t, acc
    return best_thr, best_acc


def confusion_at(
    labels: Sequence[bool], scores: Sequence[float], threshold: float
) -> dict[str, int]:
    tp = fp = tn = fn = 0
    for lbl, s in zip(labels, scores):
        predicted = s >= threshold
        if predicted and lbl:
            tp += 1
        elif predicted and not lbl:
            fp += 1
        elif not predicted and not lbl:
            tn += 1
        else:
            fn += 1
    return {"tp": tp, "fp": fp, "tn": tn, "fn": fn}


@dataclass(frozen=True)
class PredictionSet:
    """Scores of one model, keyed by entity external_ref.

    ``positive_means`` declares the score semantics: the schema value a
    score of 1.0 predicts (e.g. "damaging"). Scores are flipped internally
    when it names the dimension's negative value.
    """

    model: str
    dimension: str
    positive_means: str
    scores: dict[str, float]

    def __post_init__(self):
        for ref, s in self.scores.items():
            if not (0.0 <= s <= 1.0):
                raise ValidationError(f"score for {ref!r} out of [0, 1]: {s}")


def parse_prediction_jsonl(data: str, default_model: str = "model") -> PredictionSet:
    """Parse the JSONL prediction format: a header line then {ref, score} lines."""
    lines = [ln for ln in data.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty prediction file", line=1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header: {exc}", line=1)
    if "positive_means" not in header or "dimension" not in header:
        raise ParseError("header must declare model, dimension and positive_means", line=1)
    scores: dict[str, float] = {}
    for i, ln in enumerate(lines[1:], start=2):
        try:
            rec = json.loads(ln)
            scores[str(rec["ref"])] = float(rec["score"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad prediction line: {exc}", line=i)
    return PredictionSet(
        model=header.get("model", default_model),
        dimension=header["dimension"],
        positive_means=header["positive_means"],
        scores=scores,
    )


def parse_prediction_csv(
    data: str, model: str, dimension: str, positive_means: str
) -> PredictionSet:
    """Parse the two-column CSV variant (header row ``ref,score``)."""
    reader = csv.reader(io.StringIO(data))
    rows = list(reader)
    if not rows:
        raise ParseError("empty prediction file", line=1)
    start = 1 if rows[0][:2] == ["ref", "score"] else 0
    scores: dict[str, float] = {}
    for i, row in enumerate(rows[start:], start=start + 1):
        if not row:
            continue
        if len(row) < 2:
            raise ParseError("expected two columns: ref, score", line=i)
        try:
            scores[row[0]] = float(row[1])
        except ValueError as exc:
            raise ParseError(f"bad score: {exc}", line=i)
    return PredictionSet(model=model, dimension=dimension, positive_means=positive_means, scores=scores)


@dataclass(frozen=True)
class QuadrantBreakdown:
    quadrant: str
    n: int
    errors: int

    @property
    def error_rate(self) -> float:
        return self.errors / self.n if self.n else 0.0

    def as_dict(self) -> dict:
        return {
            "quadrant": self.quadrant,
            "n": self.n,
            "errors": self.errors,
            "error_rate": self.error_rate,
        }


@dataclass(frozen=True)
class EvaluationReport:
    """Everything computed for one model on one dimension."""

    model: str
    dimension: str
    n: int
    roc_points: list[RocPoint]
    auc: Optional[float]
    auc_defined: bool
    best_threshold: float
    best_accuracy: float
    confusion: dict[str, int]
    skipped_refs: list[str]
    unresolved_refs: list[str]
    quadrant_breakdown: list[QuadrantBreakdown]
    weighting: str = "none"
    weighted_accuracy: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "dimension": self.dimension,
            "n": self.n,
            "roc_points": [p.as_dict() for p in self.roc_points],
            "auc": self.auc,
            "auc_defined": self.auc_defined,
            "best_threshold": self.best_threshold,
            "best_accuracy": self.best_accuracy,
            "confusion": dict(self.confusion),
            "skipped_refs": list(self.skipped_refs),
            "unresolved_refs": list(self.unresolved_refs),
            "quadrant_breakdown": [q.as_dict() for q in self.quadrant_breakdown],
            "weighting": self.weighting,
            "weighted_accuracy": self.weighted_accuracy,
        }


@dataclass(frozen=True)
class EntityAnnotation:
    """Per-entity join of primary label, disagreement stats and model verdicts."""

    external_ref: str
    entity: str
    primary_choice: str
    n_labels: int
    disagreement: float
    quadrant: str
    scores: dict[str, float]
    correct: dict[str, bool]

    def as_dict(self) -> dict:
        return {
            "external_ref": self.external_ref,
            "entity": self.entity,
            "primary_choice": self.primary_choice,
            "n_labels": self.n_labels,
            "disagreement": self.disagreement,
            "quadrant": self.quadrant,
            "scores": dict(self.scores),
            "correct": dict(self.correct),
        }


@dataclass(frozen=True)
class ModelComparison:
    dimension: str
    reports: list[EvaluationReport]
    entities: list[EntityAnnotation]

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "reports": [r.as_dict() for r in self.reports],
            "entities": [e.as_dict() for e in self.entities],
        }


def _oriented_scores(campaign_dim, prediction_set: PredictionSet) -> dict[str, float]:
    if prediction_set.positive_means == campaign_dim.positive_value:
        return dict(prediction_set.scores)
    if prediction_set.positive_means == campaign_dim.negative_value:
        return {ref: 1.0 - s for ref, s in prediction_set.scores.items()}
    raise ValidationError(
        f"prediction set {prediction_set.model!r} declares positive_means "
        f"{prediction_set.positive_means!r}, which is neither value of dimension "
        f"{campaign_dim.name!r}"
    )


def compare_models(
    campaign: "CampaignRecord",
    dimension: str,
    prediction_sets: Sequence[PredictionSet],
    weighting: str = "none",
) -> ModelComparison:
    """Evaluate every prediction set on the shared matched entity subset.

    The evaluation set is the intersection, over all models, of included
    entities that have a primary label and a score. Eligible entities left
    out of that intersection are listed in every report's ``skipped_refs``;
    prediction refs that match no campaign entity land in
    ``unresolved_refs`` (reported, never silently dropped).

    ``weighting="consensus"`` weights instances by (1 - disagreement) when
    sweeping for the best threshold, an extension for disagreement-aware
    scoring; AUC stays unweighted.
    """
    if dimension not in campaign.schema.dimension_names:
        raise UnknownDimension(f"no dimension named {dimension!r}")
    if not prediction_sets:
        raise ValidationError("at least one prediction set is required")
    if weighting not in ("none", "consensus"):
        raise ValidationError(f"unknown weighting mode {weighting!r}")
    dim = campaign.schema.dimension(dimension)

    eligible: dict[str, str] = {}  # external_ref -> entity id
    for entity in campaign.entities_in_order():
        if not entity.excluded and entity.id in campaign.primaries:
            eligible[entity.external_ref] = entity.id

    oriented = [_oriented_scores(dim, ps) for ps in prediction_sets]
    eval_refs = set(eligible)
    for scores in oriented:
        eval_refs &= set(scores)
    refs = sorted(eval_refs)
    skipped = sorted(set(eligible) - eval_refs)
    all_refs = {e.external_ref for e in campaign.entities_in_order()}

    stats_by_entity = {
        s.entity: s for s in metrics.campaign_stats(campaign).entities
    }
    labels: list[bool] = []
    weights: list[float] = []
    for ref in refs:
        entity_id = eligible[ref]
        primary = campaign.primaries[entity_id]
        labels.append(primary.choices()[dimension] is Choice.POSITIVE)
        stat = stats_by_entity[entity_id]
        weights.append(1.0 - stat.disagreement[dimension])

    reports: list[EvaluationReport] = []
    correct_by_model: dict[str, dict[str, bool]] = {}
    for ps, scores in zip(prediction_sets, oriented):
        aligned = [scores[ref] for ref in refs]
        unresolved = sorted(set(ps.scores) - all_refs)
        weight_arg = weights if weighting == "consensus" else None
        if refs:
            thr, acc = best_accuracy_threshold(labels, aligned, weight_arg)
            plain_acc = accuracy_at(labels, aligned, thr)
            confusion = confusion_at(labels, aligned, thr)
        else:
            thr, acc, plain_acc = 0.0, 0.0, 0.0
            confusion = {"tp": 0, "fp": 0, "tn": 0, "fn": 0}
        try:
            points = roc(labels, aligned)
            area: Optional[float] = auc(labels, aligned)
            defined = True
        except DegenerateLabels:
            points = []
            area = None
            defined = False

        by_quadrant: dict[str, list[int]] = {}
        correct: dict[str, bool] = {}
        for ref, lbl, s in zip(refs, labels, aligned):
            stat = stats_by_entity[eligible[ref]]
            tag = stat.quadrant[dimension].value
            ok = (s >= thr) == lbl
            correct[ref] = ok
            bucket = by_quadrant.setdefault(tag, [0, 0])
            bucket[0] += 1
            bucket[1] += 0 if ok else 1
        correct_by_model[ps.model] = correct
        breakdown = [
            QuadrantBreakdown(tag, n, errors)
            for tag, (n, errors) in sorted(by_quadrant.items())
        ]
        reports.append(
            EvaluationReport(
                model=ps.model,
                dimension=dimension,
                n=len(refs),
                roc_points=points,
                auc=area,
                auc_defined=defined,
                best_threshold=thr,
                best_accuracy=plain_acc,
                confusion=confusion,
                skipped_refs=skipped,
                unresolved_refs=unresolved,
                quadrant_breakdown=breakdown,
                weighting=weighting,
                weighted_accuracy=acc if weighting == "consensus" else None,
            )
        )

    annotations = []
    for ref, lbl in zip(refs, labels):
        entity_id = eligible[ref]
        stat = stats_by_entity[entity_id]
        annotations.append(
            EntityAnnotation(
                external_ref=ref,
                entity=entity_id,
                primary_choice=Choice.POSITIVE.value if lbl else Choice.NEGATIVE.value,
                n_labels=stat.n_labels,
                disagreement=stat.disagreement[dimension],
                quadrant=stat.quadrant[dimension].value,
                scores={ps.model: sc[ref] for ps, sc in zip(prediction_sets, oriented)},
                correct={m: correct_by_model[m][ref] for m in correct_by_model},
            )
        )
    return ModelComparison(dimension=dimension, reports=reports, entities=annotations)
