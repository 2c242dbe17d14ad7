"""Tie-aware top-k metrics, the majority baseline, and significance testing.

Annotation-derived distributions frequently contain exact ties, so a top-k
"set" here includes every font whose probability reaches the k-th largest
value; equally probable fonts are interchangeable as correct answers. Both
truth and prediction sides are expanded the same way before recall and F1
are counted.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .corpus import LabelDistribution, LabeledInstance, average_distribution

__all__ = [
    "EvalReport",
    "topk_with_ties",
    "per_font_recalls",
    "font_recall",
    "f1_weighted_topk",
    "per_instance_topk_hits",
    "MajorityBaseline",
    "ModelPredictor",
    "majority_baseline",
    "paired_ttest",
    "student_t_two_sided_p",
    "evaluate",
]

_TIE_TOL = 1e-9

REPORT_COLUMNS = ("FR Top3", "FR Top5", "F-Top1", "F-Top3", "F-Top5")


def topk_with_ties(dist, k: int) -> set[int]:
    """Fonts whose probability reaches the k-th largest value.

    Boundary ties expand the set, so the result holds between k and all
    fonts. Probabilities are compared at tolerance 1e-9.
    """
    probs = np.asarray(getattr(dist, "probs", dist), dtype=np.float64)
    if not 1 <= k <= len(probs):
        raise ValueError(f"k must be in 1..{len(probs)}, got {k}")
    kth = np.sort(probs)[-k]
    return {int(i) for i in np.flatnonzero(probs >= kth - _TIE_TOL)}


def per_font_recalls(
    truth_sets: list[set[int]], pred_sets: list[set[int]], n_fonts: int
) -> list[float]:
    """Recall per font over tie-expanded sets; fonts never in truth score 0."""
    if len(truth_sets) != len(pred_sets):
        raise ValueError(f"length mismatch: {len(truth_sets)} vs {len(pred_sets)}")
    recalls = []
    for font in range(n_fonts):
        relevant = sum(1 for t in truth_sets if font in t)
        hit = sum(1 for t, p in zip(truth_sets, pred_sets) if font in t and font in p)
        recalls.append(hit / relevant if relevant else 0.0)
    return recalls


def font_recall(truth_sets: list[set[int]], pred_sets: list[set[int]], n_fonts: int) -> float:
    """Mean of per-font recalls, as a percentage."""
    return 100.0 * float(np.mean(per_font_recalls(truth_sets, pred_sets, n_fonts)))


def f1_weighted_topk(truth_dists, pred_dists, k: int) -> float:
    """Support-weighted mean of per-font F1 over tie-expanded top-k sets.

    Per font, TP / FP / FN are counted across instances by set membership;
    weights are the per-font truth-set membership counts. Returned as a
    percentage.
    """
    if len(truth_dists) != len(pred_dists):
        raise ValueError(f"length mismatch: {len(truth_dists)} vs {len(pred_dists)}")
    truth_sets = [topk_with_ties(t, k) for t in truth_dists]
    pred_sets = [topk_with_ties(p, k) for p in pred_dists]
    n_fonts = len(np.asarray(getattr(truth_dists[0], "probs", truth_dists[0])))

    weighted = 0.0
    total_support = 0
    for font in range(n_fonts):
        tp = sum(1 for t, p in zip(truth_sets, pred_sets) if font in t and font in p)
        fp = sum(1 for t, p in zip(truth_sets, pred_sets) if font not in t and font in p)
        fn = sum(1 for t, p in zip(truth_sets, pred_sets) if font in t and font not in p)
        support = tp + fn
        f1 = 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) else 0.0
        weighted += support * f1
        total_support += support
    return 100.0 * weighted / total_support if total_support else 0.0


def per_instance_topk_hits(truth_dists, pred_dists, k: int) -> list[float]:
    """1.0 where the tie-expanded top-k sets intersect, else 0.0, per instance.

    Equally probable fonts are interchangeable, so predicting any member of
    the truth set counts as a hit. This is the pairing unit fed to
    ``paired_ttest`` when comparing two predictors.
    """
    if len(truth_dists) != len(pred_dists):
        raise ValueError(f"length mismatch: {len(truth_dists)} vs {len(pred_dists)}")
    return [
        1.0 if topk_with_ties(t, k) & topk_with_ties(p, k) else 0.0
        for t, p in zip(truth_dists, pred_dists)
    ]


@dataclass(frozen=True)
class MajorityBaseline:
    """Constant predictor: the training set's average distribution, always."""

    distribution: LabelDistribution

    def predict_dist(self, instance: LabeledInstance) -> LabelDistribution:
        return self.distribution


def majority_baseline(train: list[LabeledInstance]) -> MajorityBaseline:
    if not train:
        raise ValueError("cannot build a majority baseline from an empty training set")
    return MajorityBaseline(average_distribution(train))


class ModelPredictor:
    """Adapts a trained model + featurizer to the predictor interface."""

    def __init__(self, model, featurizer):
        if model.featurizer_name and featurizer.name != model.featurizer_name:
            raise ValueError(
                f"model expects featurizer {model.featurizer_name!r}, got {featurizer.name!r}"
            )
        self.model = model
        self.featurizer = featurizer

    def predict_dist(self, instance: LabeledInstance) -> LabelDistribution:
        from .model import forward  # local import to keep module layering acyclic

        return forward(self.model, self.featurizer.featurize_instance(instance).values)


@dataclass(frozen=True)
class EvalReport:
    fr_top3: float
    fr_top5: float
    f_top1: float
    f_top3: float
    f_top5: float
    per_font_recall: dict[int, dict[int, float]]  # k -> font_id -> recall %

    def as_row(self) -> tuple[float, float, float, float, float]:
        return (self.fr_top3, self.fr_top5, self.f_top1, self.f_top3, self.f_top5)

    def to_dict(self) -> dict:
        return {
            "fr_top3": self.fr_top3,
            "fr_top5": self.fr_top5,
            "f_top1": self.f_top1,
            "f_top3": self.f_top3,
            "f_top5": self.f_top5,
            "per_font_recall": {
                str(k): {str(f): r for f, r in fonts.items()}
                for k, fonts in self.per_font_recall.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_table(self, name: str = "model") -> str:
        header = ["Model/Evals", *REPORT_COLUMNS]
        row = [name, *(f"{v:.2f}" for v in self.as_row())]
        widths = [max(len(h), len(r)) for h, r in zip(header, row)]
        lines = [
            " | ".join(h.ljust(w) for h, w in zip(header, widths)),
            "-+-".join("-" * w for w in widths),
            " | ".join(r.ljust(w) for r, w in zip(row, widths)),
        ]
        return "\n".join(lines)

    def to_csv(self, name: str = "model") -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["model", *REPORT_COLUMNS])
        writer.writerow([name, *(f"{v:.4f}" for v in self.as_row())])
        return buf.getvalue()


def evaluate(predictor, test: list[LabeledInstance]) -> EvalReport:
    """All five headline metrics plus per-font recalls at k in {3, 5}."""
    if not test:
        raise ValueError("cannot evaluate on an empty test set")
    truth_dists = [inst.target for inst in test]
    pred_dists = [predictor.predict_dist(inst) for inst in test]
    n_fonts = len(truth_dists[0])

    recall_by_k: dict[int, dict[int, float]] = {}
    fr = {}
    for k in (3, 5):
        truth_sets = [topk_with_ties(t, k) for t in truth_dists]
        pred_sets = [topk_with_ties(p, k) for p in pred_dists]
        recalls = per_font_recalls(truth_sets, pred_sets, n_fonts)
        recall_by_k[k] = {f: 100.0 * r for f, r in enumerate(recalls)}
        fr[k] = 100.0 * float(np.mean(recalls))

    return EvalReport(
        fr_top3=fr[3],
        fr_top5=fr[5],
        f_top1=f1_weighted_topk(truth_dists, pred_dists, 1),
        f_top3=f1_weighted_topk(truth_dists, pred_dists, 3),
        f_top5=f1_weighted_topk(truth_dists, pred_dists, 5),
        per_font_recall=recall_by_k,
    )


def paired_ttest(scores_a, scores_b) -> tuple[float, float]:
    """Paired t statistic and two-sided p-value on per-instance scores.

    All-zero differences report (0, 1). Zero variance with a nonzero mean is
    the degenerate perfectly-consistent case: t is +/-inf and p is 0.
    """
    a = np.asarray(scores_a, dtype=np.float64)
    b = np.asarray(scores_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"inputs must be equal-length vectors, got {a.shape} vs {b.shape}")
    n = len(a)
    if n < 2:
        raise ValueError(f"need at least 2 pairs, got {n}")
    diff = a - b
    if np.all(diff == 0):
        return 0.0, 1.0
    sd = float(diff.std(ddof=1))
    mean = float(diff.mean())
    if sd == 0.0:
        return math.copysign(math.inf, mean), 0.0
    t = mean / (sd / math.sqrt(n))
    return t, student_t_two_sided_p(t, n - 1)


def student_t_two_sided_p(t: float, df: int) -> float:
    """P(|T_df| >= |t|) via the regularized incomplete beta function."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if math.isinf(t):
        return 0.0
    return _betainc_reg(df / 2.0, 0.5, df / (df + t * t))


def _betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) by continued fraction."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # the continued fraction converges fastest below the distribution mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _betacf(a: float, b: float, x: float, max_iter: int = 300, eps: float = 1e-14) -> float:
    """Continued fraction for the incomplete beta (modified Lentz method)."""
    tiny = 1e-30
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")
