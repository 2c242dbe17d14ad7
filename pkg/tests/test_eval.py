import json
import math

import numpy as np
import pytest

from fontsense.corpus import LabelDistribution
from fontsense.evaluation import (
    EvalReport,
    MajorityBaseline,
    evaluate,
    f1_weighted_topk,
    font_recall,
    majority_baseline,
    paired_ttest,
    per_font_recalls,
    per_instance_topk_hits,
    student_t_two_sided_p,
    topk_with_ties,
)

from conftest import dist, linst


def brute_force_f1(truth_sets, pred_sets, n_fonts):
    """Naive confusion-matrix weighted F1, independent of the implementation."""
    per_font = {}
    for font in range(n_fonts):
        tp = fp = fn = 0
        for t, p in zip(truth_sets, pred_sets):
            if font in t and font in p:
                tp += 1
            elif font in p:
                fp += 1
            elif font in t:
                fn += 1
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_font[font] = (f1, tp + fn)
    total = sum(support for _, support in per_font.values())
    if total == 0:
        return 0.0
    return 100.0 * sum(f1 * support for f1, support in per_font.values()) / total


def brute_force_recalls(truth_sets, pred_sets, n_fonts):
    out = []
    for font in range(n_fonts):
        in_truth = [i for i, t in enumerate(truth_sets) if font in t]
        if not in_truth:
            out.append(0.0)
            continue
        hits = sum(1 for i in in_truth if font in pred_sets[i])
        out.append(hits / len(in_truth))
    return out


def random_tied_dist(rng, n_fonts):
    # integer scores make exact ties common, like rank-weight aggregation
    scores = rng.integers(0, 4, n_fonts).astype(float)
    if scores.sum() == 0:
        scores[rng.integers(0, n_fonts)] = 1.0
    return LabelDistribution(scores / scores.sum())


class TestTopkWithTies:
    def test_strict_ordering(self):
        d = dist([0.5, 0.3, 0.2, 0, 0, 0, 0, 0, 0, 0])
        assert topk_with_ties(d, 1) == {0}

    def test_boundary_tie_expands(self):
        d = dist([0.4, 0.4, 0.2, 0, 0, 0, 0, 0, 0, 0])
        assert topk_with_ties(d, 1) == {0, 1}

    def test_uniform_returns_all(self):
        assert topk_with_ties(dist(np.ones(10)), 3) == set(range(10))

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            topk_with_ties(dist(np.ones(10)), 0)
        with pytest.raises(ValueError):
            topk_with_ties(dist(np.ones(10)), 11)

    def test_contains_everything_strictly_above_kth(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            d = random_tied_dist(rng, 6)
            k = int(rng.integers(1, 7))
            chosen = topk_with_ties(d, k)
            assert len(chosen) >= k
            kth = np.sort(d.probs)[-k]
            for font in range(6):
                if d.probs[font] > kth + 1e-9:
                    assert font in chosen


class TestFontRecall:
    def test_constant_majority_prediction(self):
        # fonts 0-2 in every truth set; fonts 3-9 each appear somewhere
        truth_sets = []
        for i in range(14):
            extra = 3 + (i % 7)
            truth_sets.append({0, 1, 2, extra})
        pred_sets = [{0, 1, 2}] * len(truth_sets)
        assert font_recall(truth_sets, pred_sets, 10) == pytest.approx(30.0, abs=1e-12)

    def test_top5_analog(self):
        truth_sets = []
        for i in range(10):
            extra = 5 + (i % 5)
            truth_sets.append({0, 1, 2, 3, 4, extra})
        pred_sets = [{0, 1, 2, 3, 4}] * len(truth_sets)
        assert font_recall(truth_sets, pred_sets, 10) == pytest.approx(50.0, abs=1e-12)

    def test_perfect(self):
        # every font appears in some truth set, so nothing is pinned at 0
        sets = [{0, 3}, {1, 2}, {5, 9}, {4, 6}, {7, 8}]
        assert font_recall(sets, sets, 10) == pytest.approx(100.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            font_recall([{0}], [{0}, {1}], 10)


class TestF1WeightedTopk:
    def test_identical_is_100(self):
        rng = np.random.default_rng(1)
        dists = [random_tied_dist(rng, 10) for _ in range(12)]
        assert f1_weighted_topk(dists, dists, 3) == pytest.approx(100.0)

    def test_disjoint_is_0(self):
        truths = [dist([1, 0, 0, 0]) for _ in range(5)]
        preds = [dist([0, 0, 0, 1]) for _ in range(5)]
        assert f1_weighted_topk(truths, preds, 1) == 0.0

    def test_hand_counted_case(self):
        # truths {A},{B}; preds {A},{A} at k=1 over 3 fonts
        truths = [dist([1, 0, 0]), dist([0, 1, 0])]
        preds = [dist([1, 0, 0]), dist([1, 0, 0])]
        assert f1_weighted_topk(truths, preds, 1) == pytest.approx(100.0 / 3.0, abs=1e-9)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            n = int(rng.integers(1, 7))
            k = int(rng.integers(1, 4))
            truths = [random_tied_dist(rng, 4) for _ in range(n)]
            preds = [random_tied_dist(rng, 4) for _ in range(n)]
            truth_sets = [topk_with_ties(t, k) for t in truths]
            pred_sets = [topk_with_ties(p, k) for p in preds]
            assert f1_weighted_topk(truths, preds, k) == pytest.approx(
                brute_force_f1(truth_sets, pred_sets, 4), abs=1e-12
            )
            assert per_font_recalls(truth_sets, pred_sets, 4) == pytest.approx(
                brute_force_recalls(truth_sets, pred_sets, 4)
            )


class TestPerInstanceHits:
    def test_tie_counts_as_hit(self):
        truth = dist([0.4, 0.4, 0.2])  # tie-expanded top-1 is {0, 1}
        pred = dist([0.1, 0.8, 0.1])
        assert per_instance_topk_hits([truth], [pred], 1) == [1.0]

    def test_miss(self):
        truth = dist([1, 0, 0])
        pred = dist([0, 0, 1])
        assert per_instance_topk_hits([truth], [pred], 1) == [0.0]

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            per_instance_topk_hits([dist([1, 0])], [], 1)


class TestMajorityBaseline:
    def test_constant_prediction(self):
        train = [linst(f"s{i}", "x", np.arange(1, 11)) for i in range(5)]
        baseline = majority_baseline(train)
        a = baseline.predict_dist(train[0])
        b = baseline.predict_dist(train[3])
        np.testing.assert_array_equal(a.probs, b.probs)
        assert topk_with_ties(a, 3) == topk_with_ties(b, 3)

    def test_single_instance_train(self):
        train = [linst("only", "x", [1, 2, 3, 4, 0, 0, 0, 0, 0, 0])]
        np.testing.assert_allclose(
            majority_baseline(train).predict_dist(train[0]).probs, train[0].target.probs
        )

    def test_empty_train_rejected(self):
        with pytest.raises(ValueError):
            majority_baseline([])


class TestPairedTTest:
    def test_identical_scores(self):
        assert paired_ttest([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == (0.0, 1.0)

    def test_constant_nonzero_difference(self):
        t, p = paired_ttest([2.0, 3.0, 4.0, 5.0], [1.0, 2.0, 3.0, 4.0])
        assert math.isinf(t) and t > 0
        assert p == 0.0

    def test_fixture_differences_one_to_five(self):
        t, p = paired_ttest([2.0, 4.0, 6.0, 8.0, 10.0], [1.0, 2.0, 3.0, 4.0, 5.0])
        assert t == pytest.approx(4.242640687119285, abs=1e-9)
        assert p == pytest.approx(0.013235599563682695, abs=1e-9)

    def test_against_scipy_oracle(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(3, 30))
            a = rng.normal(size=n)
            b = a + rng.normal(scale=0.5, size=n)
            t, p = paired_ttest(a, b)
            ref = scipy_stats.ttest_rel(a, b)
            assert t == pytest.approx(ref.statistic, abs=1e-10)
            assert p == pytest.approx(ref.pvalue, abs=1e-10)

    def test_t_cdf_tail_against_scipy(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        for df in (1, 2, 5, 30, 200):
            for t in (0.0, 0.5, 2.0, 7.5):
                mine = student_t_two_sided_p(t, df)
                ref = 2 * scipy_stats.t.sf(abs(t), df)
                assert mine == pytest.approx(ref, abs=1e-12)

    def test_degenerate_inputs(self):
        with pytest.raises(ValueError):
            paired_ttest([1.0], [2.0])
        with pytest.raises(ValueError):
            paired_ttest([1.0, 2.0], [1.0, 2.0, 3.0])


class TestEvaluate:
    class _Echo:
        def predict_dist(self, instance):
            return instance.target

    def test_perfect_predictor_scores_100(self):
        rng = np.random.default_rng(2)
        test = [linst(f"s{i}", "x", rng.uniform(0.1, 1, 10)) for i in range(8)]
        report = evaluate(self._Echo(), test)
        assert report.as_row() == pytest.approx((100.0,) * 5)
        assert all(r == pytest.approx(100.0) for r in report.per_font_recall[3].values())

    def test_reorder_invariance(self):
        rng = np.random.default_rng(3)
        test = [linst(f"s{i}", "x", rng.uniform(0.1, 1, 10)) for i in range(10)]
        baseline = MajorityBaseline(dist(np.arange(1, 11)))
        a = evaluate(baseline, test)
        b = evaluate(baseline, list(reversed(test)))
        assert a.as_row() == pytest.approx(b.as_row())

    def test_empty_test_rejected(self):
        with pytest.raises(ValueError):
            evaluate(self._Echo(), [])

    def test_metrics_within_bounds(self):
        rng = np.random.default_rng(4)
        test = [linst(f"s{i}", "x", rng.uniform(0.1, 1, 10)) for i in range(15)]
        baseline = MajorityBaseline(dist(rng.uniform(0.1, 1, 10)))
        report = evaluate(baseline, test)
        for value in report.as_row():
            assert 0.0 <= value <= 100.0


class TestReportFormats:
    def _report(self):
        return EvalReport(30.0, 50.0, 12.44, 43.72, 62.24, {3: {0: 100.0}, 5: {0: 100.0}})

    def test_table_has_columns(self):
        table = self._report().to_table("majority")
        assert "FR Top3" in table and "F-Top5" in table
        assert "majority" in table and "30.00" in table

    def test_json_round_trip(self):
        payload = json.loads(self._report().to_json())
        assert payload["fr_top3"] == 30.0
        assert payload["per_font_recall"]["3"]["0"] == 100.0

    def test_csv_shape(self):
        lines = self._report().to_csv("majority").strip().splitlines()
        assert len(lines) == 2
        assert lines[0].split(",")[1] == "FR Top3"
