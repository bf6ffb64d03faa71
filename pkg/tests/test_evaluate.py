from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colabel.errors import DegenerateLabels, ParseError, UnknownDimension, ValidationError
from colabel.evaluate import (
    PredictionSet,
    auc,
    best_accuracy_threshold,
    compare_models,
    confusion_at,
    parse_prediction_csv,
    parse_prediction_jsonl,
    roc,
)

from conftest import DIMS_ONE, Harness

P, N = "positive", "negative"


def pairwise_auc(labels: list[bool], scores: list[float]) -> float:
    pos = np.array([s for l, s in zip(labels, scores) if l])
    neg = np.array([s for l, s in zip(labels, scores) if not l])
    wins = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float((wins + 0.5 * ties) / (len(pos) * len(neg)))


def test_roc_hand_example():
    points = roc([P, N, P, N], [0.9, 0.8, 0.7, 0.1])
    assert [(p.fpr, p.tpr) for p in points] == [
        (0.0, 0.0),
        (0.0, 0.5),
        (0.5, 0.5),
        (0.5, 1.0),
        (1.0, 1.0),
    ]
    assert math.isinf(points[0].threshold)
    assert [p.threshold for p in points[1:]] == [0.9, 0.8, 0.7, 0.1]


def test_roc_perfect_separation_passes_corner():
    points = roc([P, P, N, N], [0.9, 0.8, 0.2, 0.1])
    assert (0.0, 1.0) in [(p.fpr, p.tpr) for p in points]
    assert auc([P, P, N, N], [0.9, 0.8, 0.2, 0.1]) == 1.0


def test_roc_monotone_endpoints():
    rng = random.Random(3)
    labels = [rng.choice([P, N]) for _ in range(50)] + [P, N]
    scores = [rng.choice([0.1, 0.25, 0.5, 0.75]) for _ in labels]
    points = roc(labels, scores)
    assert (points[0].fpr, points[0].tpr) == (0.0, 0.0)
    assert (points[-1].fpr, points[-1].tpr) == (1.0, 1.0)
    for a, b in zip(points, points[1:]):
        assert b.fpr >= a.fpr and b.tpr >= a.tpr


def test_roc_degenerate_raises():
    with pytest.raises(DegenerateLabels):
        roc([P, P, P], [0.1, 0.5, 0.9])
    with pytest.raises(DegenerateLabels):
        auc([N], [0.5])


def test_auc_hand_example():
    assert auc([P, N, P, N], [0.9, 0.8, 0.7, 0.1]) == 0.75


def test_auc_all_tied_scores():
    assert auc([P, N, P, N], [0.4, 0.4, 0.4, 0.4]) == 0.5


def test_auc_matches_pairwise_on_random_instances():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(2, 120)
        labels = [rng.random() < 0.5 for _ in range(n)]
        if all(labels) or not any(labels):
            labels[0] = not labels[0]
        if rng.random() < 0.5:
            scores = [rng.choice([0.0, 0.2, 0.4, 0.6, 0.8, 1.0]) for _ in range(n)]
        else:
            scores = [rng.random() for _ in range(n)]
        got = auc(labels, scores)
        assert abs(got - pairwise_auc(labels, scores)) <= 1e-9


# Scores drawn on a dyadic grid so that 1 - s and exp(2s) keep distinct
# inputs distinct in float arithmetic; the properties hold in exact math
# and the grid keeps the float evaluation exact too.
dyadic_scores = st.integers(min_value=0, max_value=256).map(lambda k: k / 256.0)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_auc_label_flip_symmetry(data):
    n = data.draw(st.integers(min_value=2, max_value=40))
    labels = data.draw(
        st.lists(st.booleans(), min_size=n, max_size=n).filter(
            lambda ls: any(ls) and not all(ls)
        )
    )
    scores = data.draw(st.lists(dyadic_scores, min_size=n, max_size=n))
    flipped_labels = [not l for l in labels]
    flipped_scores = [1.0 - s for s in scores]
    assert auc(labels, scores) == pytest.approx(auc(flipped_labels, flipped_scores), abs=1e-12)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_auc_invariant_under_monotone_transform(data):
    n = data.draw(st.integers(min_value=2, max_value=40))
    labels = data.draw(
        st.lists(st.booleans(), min_size=n, max_size=n).filter(
            lambda ls: any(ls) and not all(ls)
        )
    )
    scores = data.draw(st.lists(dyadic_scores, min_size=n, max_size=n))
    # AUC depends only on score order, so any increasing transform works
    transformed = [math.exp(2.0 * s) for s in scores]
    assert auc(labels, scores) == pytest.approx(auc(labels, transformed), abs=1e-12)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_best_accuracy_invariant_under_range_preserving_transform(data):
    # Accuracy invariance needs the transform to keep scores strictly
    # inside (0, 1): a score of exactly 1.0 is positive at every threshold
    # in [0, 1], so transforms that move scores onto or off that boundary
    # legitimately change the achievable classifications.
    n = data.draw(st.integers(min_value=1, max_value=40))
    labels = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
    scores = data.draw(
        st.lists(
            st.integers(min_value=1, max_value=255).map(lambda k: k / 256.0),
            min_size=n,
            max_size=n,
        )
    )
    transformed = [0.125 + 0.75 * s for s in scores]
    thr_raw, acc_raw = best_accuracy_threshold(labels, scores)
    thr_t, acc_t = best_accuracy_threshold(labels, transformed)
    assert acc_raw == pytest.approx(acc_t, abs=1e-12)


def test_best_threshold_hand_example():
    assert best_accuracy_threshold([P, P, N], [0.9, 0.6, 0.2]) == (0.4, 1.0)


def test_best_threshold_single_sample():
    assert best_accuracy_threshold([P], [0.7]) == (0.0, 1.0)


def test_best_threshold_anticorrelated_scores():
    # scores point the wrong way: best is to classify everything negative
    thr, acc = best_accuracy_threshold([P, P, P, N], [0.1, 0.2, 0.3, 0.9])
    sweep_best = max(
        sum(1 for l, s in zip([True, True, True, False], [0.1, 0.2, 0.3, 0.9]) if (s >= t) == l)
        / 4.0
        for t in np.linspace(0, 1, 10001)
    )
    assert acc >= sweep_best


def test_best_threshold_tie_break_smallest():
    # both midpoint candidates give the same accuracy; smallest wins
    thr, acc = best_accuracy_threshold([P, N], [0.8, 0.2])
    assert thr == 0.5
    assert acc == 1.0
    thr2, acc2 = best_accuracy_threshold([P, P], [0.8, 0.2])
    assert (thr2, acc2) == (0.0, 1.0)


def test_best_threshold_empty_raises():
    with pytest.raises(DegenerateLabels):
        best_accuracy_threshold([], [])


def test_best_threshold_optimal_against_dense_sweep():
    rng = random.Random(5)
    thresholds = np.linspace(0.0, 1.0, 2001)
    for _ in range(100):
        n = rng.randint(1, 50)
        labels = [rng.random() < 0.5 for _ in range(n)]
        scores = [round(rng.random(), 2) for _ in range(n)]
        _, acc = best_accuracy_threshold(labels, scores)
        score_arr = np.array(scores)
        label_arr = np.array(labels)
        sweep = ((score_arr[None, :] >= thresholds[:, None]) == label_arr[None, :]).mean(axis=1)
        assert acc >= sweep.max() - 1e-15


def test_confusion_counts():
    labels = [True, True, False, False]
    scores = [0.9, 0.2, 0.8, 0.1]
    assert confusion_at(labels, scores, 0.5) == {"tp": 1, "fp": 1, "tn": 1, "fn": 1}


def test_prediction_set_validates_range():
    with pytest.raises(ValidationError):
        PredictionSet("m", "damage", "damaging", {"r": 1.5})


def test_parse_prediction_jsonl():
    text = "\n".join(
        [
            '{"model": "scorer", "dimension": "damage", "positive_means": "damaging"}',
            '{"ref": "a", "score": 0.25}',
            '{"ref": "b", "score": 0.75}',
        ]
    )
    ps = parse_prediction_jsonl(text)
    assert ps.model == "scorer"
    assert ps.scores == {"a": 0.25, "b": 0.75}


def test_parse_prediction_jsonl_errors_carry_line():
    with pytest.raises(ParseError) as err:
        parse_prediction_jsonl('{"model": "m", "dimension": "d", "positive_means": "x"}\nnot json')
    assert err.value.line == 2
    with pytest.raises(ParseError) as err:
        parse_prediction_jsonl('{"model": "m"}')
    assert err.value.line == 1


def test_parse_prediction_csv():
    ps = parse_prediction_csv("ref,score\na,0.5\nb,0.25\n", "m", "damage", "damaging")
    assert ps.scores == {"a": 0.5, "b": 0.25}
    with pytest.raises(ParseError):
        parse_prediction_csv("ref,score\na,notanumber\n", "m", "damage", "damaging")


def _scored_campaign(n=12, seed=9):
    """Campaign with n labeled entities and two models, one dominating."""
    h = Harness(dims=DIMS_ONE)
    rng = random.Random(seed)
    refs, truths = [], []
    for i in range(n):
        entity = h.add_entity(ref=f"r/{i}")
        choice = "positive" if i % 2 == 0 else "negative"
        h.submit("u1", entity, {"damage": choice})
        h.submit("u2", entity, {"damage": choice if rng.random() < 0.8 else ("negative" if choice == "positive" else "positive")})
        refs.append(f"r/{i}")
        truths.append(choice == "positive")
    # strong model separates perfectly; weak swaps one positive with one
    # negative, creating discordant pairs so its ROC is strictly dominated
    strong = {r: (0.8 + 0.002 * i if t else 0.2 - 0.001 * i) for i, (r, t) in enumerate(zip(refs, truths))}
    weak = dict(strong)
    first_pos = next(r for r, t in zip(refs, truths) if t)
    first_neg = next(r for r, t in zip(refs, truths) if not t)
    weak[first_pos], weak[first_neg] = weak[first_neg], weak[first_pos]
    ps_strong = PredictionSet("strong", "damage", "damaging", strong)
    ps_weak = PredictionSet("weak", "damage", "damaging", weak)
    return h, refs, ps_strong, ps_weak


def test_compare_models_shared_entity_set():
    h, refs, strong, weak = _scored_campaign()
    cmp_ = compare_models(h.campaign, "damage", [strong, weak])
    assert len(cmp_.reports) == 2
    assert cmp_.reports[0].n == cmp_.reports[1].n == len(refs)
    assert [a.external_ref for a in cmp_.entities] == sorted(refs)


def test_compare_models_dominating_model_has_higher_auc():
    h, refs, strong, weak = _scored_campaign()
    cmp_ = compare_models(h.campaign, "damage", [strong, weak])
    by_model = {r.model: r for r in cmp_.reports}
    assert by_model["strong"].auc == 1.0
    assert by_model["strong"].auc > by_model["weak"].auc


def test_compare_models_missing_refs_shrink_n_and_report_skipped():
    h, refs, strong, weak = _scored_campaign()
    partial = PredictionSet("partial", "damage", "damaging",
                            {r: s for r, s in strong.scores.items() if r not in refs[:3]})
    cmp_ = compare_models(h.campaign, "damage", [partial, weak])
    for report in cmp_.reports:
        assert report.n == len(refs) - 3
        assert sorted(report.skipped_refs) == sorted(refs[:3])


def test_compare_models_unresolved_refs_reported():
    h, refs, strong, _ = _scored_campaign()
    scores = dict(strong.scores)
    scores["ghost/1"] = 0.5
    ps = PredictionSet("strong", "damage", "damaging", scores)
    cmp_ = compare_models(h.campaign, "damage", [ps])
    assert cmp_.reports[0].unresolved_refs == ["ghost/1"]
    assert cmp_.reports[0].n == len(refs)


def test_compare_models_excluded_entities_dropped():
    h, refs, strong, weak = _scored_campaign()
    drop = h.campaign.ref_index[refs[0]]
    h.service.exclude_entity(h.campaign_id, drop, "u1", "gone")
    cmp_ = compare_models(h.campaign, "damage", [strong])
    assert cmp_.reports[0].n == len(refs) - 1
    assert refs[0] not in [a.external_ref for a in cmp_.entities]


def test_compare_models_flips_scores_for_negative_semantics():
    h, refs, strong, _ = _scored_campaign()
    flipped = PredictionSet(
        "flipped", "damage", "not damaging", {r: 1.0 - s for r, s in strong.scores.items()}
    )
    cmp_ = compare_models(h.campaign, "damage", [strong, flipped])
    a, b = cmp_.reports
    assert a.auc == pytest.approx(b.auc, abs=1e-12)
    with pytest.raises(ValidationError):
        compare_models(
            h.campaign,
            "damage",
            [PredictionSet("bad", "damage", "unrelated", dict(strong.scores))],
        )


def test_compare_models_unknown_dimension():
    h, _, strong, _ = _scored_campaign()
    with pytest.raises(UnknownDimension):
        compare_models(h.campaign, "bogus", [strong])


def test_compare_models_degenerate_labels_flagged_not_raised():
    h = Harness(dims=DIMS_ONE)
    refs = []
    for i in range(4):
        entity = h.add_entity(ref=f"r/{i}")
        h.submit("u1", entity, {"damage": "positive"})
        refs.append(f"r/{i}")
    ps = PredictionSet("m", "damage", "damaging", {r: 0.5 for r in refs})
    cmp_ = compare_models(h.campaign, "damage", [ps])
    report = cmp_.reports[0]
    assert report.auc is None
    assert not report.auc_defined
    assert report.n == 4
    assert report.best_accuracy == 1.0  # all-positive labels are still classifiable


def test_compare_models_quadrant_breakdown_totals():
    h, refs, strong, weak = _scored_campaign()
    cmp_ = compare_models(h.campaign, "damage", [strong])
    report = cmp_.reports[0]
    assert sum(q.n for q in report.quadrant_breakdown) == report.n
    confusion = report.confusion
    errors = confusion["fp"] + confusion["fn"]
    assert sum(q.errors for q in report.quadrant_breakdown) == errors


def test_compare_models_consensus_weighting():
    h, refs, strong, weak = _scored_campaign()
    cmp_ = compare_models(h.campaign, "damage", [weak], weighting="consensus")
    report = cmp_.reports[0]
    assert report.weighting == "consensus"
    assert report.weighted_accuracy is not None
    assert 0.0 <= report.weighted_accuracy <= 1.0
    with pytest.raises(ValidationError):
        compare_models(h.campaign, "damage", [weak], weighting="bogus")
