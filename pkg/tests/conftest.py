from __future__ import annotations

import pytest

from colabel.campaign import CampaignService
from colabel.engine import LabelEngine
from colabel.model import Confidence, LabelValue
from colabel.store import Workspace

DATASHEET = {
    "label definitions": "seed definitions",
    "data statement": "seed statement",
    "inclusion criteria": "seed criteria",
}

DIMS_ONE = [
    {"name": "damage", "positive_value": "damaging", "negative_value": "not damaging"}
]

DIMS_TWO = DIMS_ONE + [
    {"name": "intent", "positive_value": "bad faith", "negative_value": "good faith"}
]


def lv(dimension: str, choice: str, confidence: str = "high") -> LabelValue:
    return LabelValue(dimension=dimension, choice=choice, confidence=Confidence(confidence))


class Harness:
    """In-memory workspace with service and engine handles plus counters."""

    def __init__(self, dims=None, storage=None):
        self.ws = Workspace(storage)
        self.service = CampaignService(self.ws)
        self.engine = LabelEngine(self.ws)
        self.campaign_id = self.service.create_campaign(
            "test-campaign", dims or DIMS_TWO, DATASHEET, "system"
        )
        self._ref = 0

    @property
    def campaign(self):
        return self.ws.campaign(self.campaign_id)

    def add_entity(self, user="u-adder", ref=None, snapshot="snapshot"):
        if ref is None:
            self._ref += 1
            ref = f"ref/{self._ref}"
        return self.service.add_entity(self.campaign_id, ref, snapshot, user)

    def submit(self, user, entity_id, choices, confidence="high", note=None):
        """choices: dict dim -> 'positive'/'negative' (str confidence for all)."""
        values = [lv(d, c, confidence) for d, c in choices.items()]
        return self.engine.submit_individual_label(user, entity_id, values, note)


@pytest.fixture
def harness():
    return Harness()


@pytest.fixture
def harness_one_dim():
    return Harness(dims=DIMS_ONE)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    passed = [
        r for r in terminalreporter.stats.get("passed", []) if "test_acceptance" in r.nodeid
    ]
    failed = [
        r for r in terminalreporter.stats.get("failed", []) if "test_acceptance" in r.nodeid
    ]
    skipped = [
        r
        for r in terminalreporter.stats.get("skipped", [])
        if "test_acceptance" in r.nodeid
    ]
    if not (passed or failed or skipped):
        return
    terminalreporter.section("acceptance criteria")
    for r in passed:
        terminalreporter.write_line(f"PASS  {r.nodeid.split('::')[-1]}")
    for r in skipped:
        terminalreporter.write_line(f"SKIP  {r.nodeid.split('::')[-1]}")
    for r in failed:
        terminalreporter.write_line(f"FAIL  {r.nodeid.split('::')[-1]}")
