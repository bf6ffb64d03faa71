"""Disagreement and confidence statistics over individual labels.

Disagreement on one dimension is the population standard deviation of the
encoded labels (see `colabel.model.encode`), which is 0 for unanimous input
and bounded by 1 for a maximal split between high-confidence opposites.
Population (not sample) deviation is used deliberately: the labels present
are the whole population of judgments on that entity, and the choice keeps
the [0, 1] bound exact.

The per-entity (disagreement, low-confidence fraction) pair classifies
entities into four qualitative quadrants:

====================  =====================  =======================
                      low low-conf fraction  high low-conf fraction
====================  =====================  =======================
low disagreement      clear_cut              agreed_edge_case
high disagreement     genuine_difference     ambiguous
====================  =====================  =======================

Boundary values (exactly at a threshold) count as "high".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

from .model import Confidence, LabelValue, encode

if TYPE_CHECKING:
    from .store import CampaignRecord

DEFAULT_THRESHOLDS = (0.5, 0.5)


class Quadrant(str, Enum):
    CLEAR_CUT = "clear_cut"
    AMBIGUOUS = "ambiguous"
    GENUINE_DIFFERENCE = "genuine_difference"
    AGREED_EDGE_CASE = "agreed_edge_case"
    INSUFFICIENT = "insufficient"


def disagreement(labels: Sequence[LabelValue]) -> float:
    """Population standard deviation of the encoded labels of one dimension.

    Returns 0.0 for empty or single-label input. Always within [0, 1].
    """
    n = len(labels)
    if n <= 1:
        return 0.0
    encoded = [encode(v) for v in labels]
    mean = sum(encoded) / n
    variance = sum((x - mean) ** 2 for x in encoded) / n
    return math.sqrt(variance)


def low_conf_fraction(labels: Sequence[LabelValue]) -> float:
    """Fraction of labels submitted with low confidence; 0.0 for empty input."""
    if not labels:
        return 0.0
    low = sum(1 for v in labels if v.confidence is Confidence.LOW)
    return low / len(labels)


def quadrant(
    disagreement_value: float,
    low_conf_value: float,
    thresholds: tuple[float, float] = DEFAULT_THRESHOLDS,
) -> Quadrant:
    """Classify one (disagreement, low-confidence fraction) pair.

    ``thresholds`` is (disagreement threshold, low-confidence threshold),
    both in (0, 1); values at or above a threshold count as "high".
    """
    d_thresh, c_thresh = thresholds
    high_disagreement = disagreement_value >= d_thresh
    uncertain = low_conf_value >= c_thresh
    if high_disagreement:
        return Quadrant.AMBIGUOUS if uncertain else Quadrant.GENUINE_DIFFERENCE
    return Quadrant.AGREED_EDGE_CASE if uncertain else Quadrant.CLEAR_CUT


@dataclass(frozen=True)
class EntityStats:
    """Per-entity label statistics, one value per schema dimension."""

    entity: str
    n_labels: int
    disagreement: dict[str, float]
    low_conf_fraction: dict[str, float]
    quadrant: dict[str, Quadrant]

    def as_dict(self) -> dict:
        return {
            "entity": self.entity,
            "n_labels": self.n_labels,
            "disagreement": dict(self.disagreement),
            "low_conf_fraction": dict(self.low_conf_fraction),
            "quadrant": {d: q.value for d, q in self.quadrant.items()},
        }


@dataclass(frozen=True)
class CampaignStats:
    """Campaign-wide aggregates over non-excluded entities."""

    entities: list[EntityStats]
    # dimension -> choice name ("positive"/"negative") -> count over primaries
    primary_counts: dict[str, dict[str, int]]
    # dimension -> choice name -> fraction of primaries
    primary_fractions: dict[str, dict[str, float]]
    # author -> number of individual labels contributed
    contributions: dict[str, int]
    n_entities: int
    n_with_primary: int

    def as_dict(self) -> dict:
        return {
            "entities": [e.as_dict() for e in self.entities],
            "primary_counts": self.primary_counts,
            "primary_fractions": self.primary_fractions,
            "contributions": self.contributions,
            "n_entities": self.n_entities,
            "n_with_primary": self.n_with_primary,
        }


def entity_stats(
    entity_id: str,
    labels: Sequence,  # IndividualLabel
    dimension_names: Sequence[str],
    thresholds: tuple[float, float] = DEFAULT_THRESHOLDS,
) -> EntityStats:
    """Compute the stats row for one entity from its individual labels."""
    n = len(labels)
    dis: dict[str, float] = {}
    low: dict[str, float] = {}
    quad: dict[str, Quadrant] = {}
    for dim in dimension_names:
        per_dim = [lbl.value_for(dim) for lbl in labels]
        d = disagreement(per_dim)
        c = low_conf_fraction(per_dim)
        dis[dim] = d
        low[dim] = c
        quad[dim] = Quadrant.INSUFFICIENT if n < 2 else quadrant(d, c, thresholds)
    return EntityStats(entity_id, n, dis, low, quad)


def campaign_stats(campaign: "CampaignRecord") -> CampaignStats:
    """One EntityStats per non-excluded entity plus campaign aggregates.

    Excluded entities are omitted from both the per-entity rows and every
    aggregate. Primary-label fractions are taken over the non-excluded
    entities that have a primary label.
    """
    dims = campaign.schema.dimension_names
    thresholds = campaign.thresholds
    rows: list[EntityStats] = []
    counts: dict[str, dict[str, int]] = {d: {"positive": 0, "negative": 0} for d in dims}
    contributions: dict[str, int] = {}
    n_with_primary = 0
    for entity in campaign.entities_in_order():
        if entity.excluded:
            continue
        labels = campaign.labels_for(entity.id)
        rows.append(entity_stats(entity.id, labels, dims, thresholds))
        for lbl in labels:
            contributions[lbl.author] = contributions.get(lbl.author, 0) + 1
        primary = campaign.primaries.get(entity.id)
        if primary is not None:
            n_with_primary += 1
            for dim, choice in primary.values:
                counts[dim][choice.value] += 1
    fractions = {
        d: {
            c: (counts[d][c] / n_with_primary if n_with_primary else 0.0)
            for c in ("positive", "negative")
        }
        for d in dims
    }
    return CampaignStats(
        entities=rows,
        primary_counts=counts,
        primary_fractions=fractions,
        contributions=contributions,
        n_entities=len(rows),
        n_with_primary=n_with_primary,
    )
