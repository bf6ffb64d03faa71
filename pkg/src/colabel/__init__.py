"""colabel: community-driven curation of AI evaluation datasets.

Members label data points individually, converge on consensus primary
labels through discussion instead of majority vote, and evaluate candidate
models against the curated dataset while keeping disagreement and
uncertainty visible.
"""

from .campaign import CampaignService, SortMode, TableRow
from .engine import LabelEngine, SubmitOutcome
from .evaluate import PredictionSet, compare_models
from .metrics import Quadrant, campaign_stats, disagreement, low_conf_fraction, quadrant
from .model import (
    Choice,
    Confidence,
    LabelValue,
    Notification,
    encode,
)
from .store import Workspace, export_campaign, import_campaign, import_mapped

__version__ = "0.1.0"

__all__ = [
    "CampaignService",
    "Choice",
    "Confidence",
    "LabelEngine",
    "LabelValue",
    "Notification",
    "PredictionSet",
    "Quadrant",
    "SortMode",
    "SubmitOutcome",
    "TableRow",
    "Workspace",
    "campaign_stats",
    "compare_models",
    "disagreement",
    "encode",
    "export_campaign",
    "import_campaign",
    "import_mapped",
    "low_conf_fraction",
    "quadrant",
]
