"""Load, validate, filter, aggregate, split, and summarize annotated text.

The raw corpus is a JSON-lines file where each line pairs a short text with
per-annotator top-3 ranked font choices. Aggregation turns those rankings
into a label distribution per instance (rank weights 1.0 / 0.6 / 0.3,
normalized to sum to 1), which is what the model trains against.

All operations here are pure functions over immutable inputs.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "AnnotatorRanking",
    "RawInstance",
    "LabelDistribution",
    "LabeledInstance",
    "SplitCorpus",
    "LineError",
    "LoadReport",
    "DEFAULT_RANK_WEIGHTS",
    "load_corpus",
    "save_labeled",
    "load_labeled",
    "filter_annotators",
    "aggregate_distribution",
    "aggregate_corpus",
    "split_corpus",
    "fleiss_kappa",
    "kappa_from_counts",
    "average_distribution",
]

DEFAULT_RANK_WEIGHTS = (1.0, 0.6, 0.3)

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class AnnotatorRanking:
    """One annotator's top-3 font choices for one instance."""

    annotator_id: str
    first: int
    second: int
    third: int

    def __post_init__(self) -> None:
        choices = (self.first, self.second, self.third)
        if len(set(choices)) != 3:
            raise ValueError(f"ranked fonts must be distinct, got {choices}")
        if any(c < 0 for c in choices):
            raise ValueError(f"font ids must be non-negative, got {choices}")

    @property
    def choices(self) -> tuple[int, int, int]:
        return (self.first, self.second, self.third)


@dataclass(frozen=True)
class RawInstance:
    instance_id: str
    text: str
    annotations: tuple[AnnotatorRanking, ...]

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError(f"instance {self.instance_id!r} has empty text")
        ids = [a.annotator_id for a in self.annotations]
        if len(set(ids)) != len(ids):
            raise ValueError(f"instance {self.instance_id!r} has duplicate annotator ids")


@dataclass(frozen=True, eq=False)
class LabelDistribution:
    """Per-font membership degrees: non-negative, summing to 1."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1:
            raise ValueError(f"distribution must be a vector, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise ValueError("distribution entries must be finite")
        if np.any(probs < 0):
            raise ValueError("distribution entries must be non-negative")
        if abs(float(probs.sum()) - 1.0) > _SUM_TOL:
            raise ValueError(f"distribution must sum to 1, got {probs.sum()!r}")
        probs = probs.copy()
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    def __len__(self) -> int:
        return len(self.probs)

    @classmethod
    def from_scores(cls, scores: np.ndarray) -> "LabelDistribution":
        scores = np.asarray(scores, dtype=np.float64)
        total = float(scores.sum())
        if total <= 0:
            raise ValueError("scores must have positive total mass")
        return cls(scores / total)

    @classmethod
    def uniform(cls, n: int) -> "LabelDistribution":
        return cls(np.full(n, 1.0 / n))


@dataclass(frozen=True)
class LabeledInstance:
    instance_id: str
    text: str
    target: LabelDistribution


@dataclass(frozen=True)
class SplitCorpus:
    train: tuple[LabeledInstance, ...]
    dev: tuple[LabeledInstance, ...]
    test: tuple[LabeledInstance, ...]
    split_seed: int


@dataclass(frozen=True)
class LineError:
    line_no: int
    instance_id: str | None
    message: str


@dataclass(frozen=True)
class LoadReport:
    instances: tuple[RawInstance, ...]
    errors: tuple[LineError, ...] = field(default_factory=tuple)


def _parse_raw_line(obj: dict, n_fonts: int) -> RawInstance:
    annotations = []
    for ann in obj.get("annotations", []):
        ranks = ann["ranks"]
        if len(ranks) != 3:
            raise ValueError(f"expected 3 ranks, got {len(ranks)}")
        ranking = AnnotatorRanking(str(ann["annotator"]), int(ranks[0]), int(ranks[1]), int(ranks[2]))
        if any(c >= n_fonts for c in ranking.choices):
            raise ValueError(f"font id out of range 0..{n_fonts - 1}: {ranking.choices}")
        annotations.append(ranking)
    return RawInstance(str(obj["id"]), str(obj["text"]), tuple(annotations))


def load_corpus(path: str | Path, n_fonts: int = 10) -> LoadReport:
    """Parse a JSON-lines annotation file.

    Lines that fail to parse or violate instance invariants are skipped and
    reported per line; the surviving instances keep file order. Crowd data
    is dirty, so a bad line is never fatal.
    """
    path = Path(path)
    instances: list[RawInstance] = []
    errors: list[LineError] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            instance_id = None
            try:
                obj = json.loads(line)
                instance_id = str(obj.get("id")) if isinstance(obj, dict) else None
                instances.append(_parse_raw_line(obj, n_fonts))
            except (ValueError, KeyError, TypeError) as exc:
                errors.append(LineError(line_no, instance_id, str(exc)))
    return LoadReport(tuple(instances), tuple(errors))


def save_labeled(instances: list[LabeledInstance], path: str | Path) -> None:
    """Write aggregated instances as JSON-lines ``{"id", "text", "dist"}``."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for inst in instances:
            row = {
                "id": inst.instance_id,
                "text": inst.text,
                "dist": [float(p) for p in inst.target.probs],
            }
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def load_labeled(path: str | Path) -> list[LabeledInstance]:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                out.append(
                    LabeledInstance(
                        str(obj["id"]),
                        str(obj["text"]),
                        LabelDistribution(np.asarray(obj["dist"], dtype=np.float64)),
                    )
                )
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{line_no}: {exc}") from exc
    return out


def filter_annotators(
    instances: list[RawInstance],
    same_choice_threshold: float = 0.9,
    min_annotations: int = 6,
    rank_slot: str = "first",
) -> list[RawInstance]:
    """Drop low-effort annotators, then under-annotated instances.

    An annotator is dropped when the fraction of their choices (at
    ``rank_slot``, across all instances) equal to their modal choice is
    strictly above ``same_choice_threshold``. Instances left with fewer than
    ``min_annotations`` rankings are dropped afterwards.

    ``rank_slot`` is ``"first"`` (default), ``"second"``, ``"third"``, or
    ``"all"`` (pool all three choices).
    """
    if not 0 < same_choice_threshold <= 1:
        raise ValueError(f"same_choice_threshold must be in (0, 1], got {same_choice_threshold}")
    if min_annotations < 1:
        raise ValueError(f"min_annotations must be >= 1, got {min_annotations}")
    slots = {"first": (0,), "second": (1,), "third": (2,), "all": (0, 1, 2)}
    if rank_slot not in slots:
        raise ValueError(f"rank_slot must be one of {sorted(slots)}, got {rank_slot!r}")
    slot_idx = slots[rank_slot]

    picks: dict[str, Counter] = {}
    for inst in instances:
        for ann in inst.annotations:
            counter = picks.setdefault(ann.annotator_id, Counter())
            for s in slot_idx:
                counter[ann.choices[s]] += 1

    dropped = {
        annotator
        for annotator, counter in picks.items()
        if max(counter.values()) / sum(counter.values()) > same_choice_threshold
    }

    kept: list[RawInstance] = []
    for inst in instances:
        remaining = tuple(a for a in inst.annotations if a.annotator_id not in dropped)
        if len(remaining) >= min_annotations:
            kept.append(RawInstance(inst.instance_id, inst.text, remaining))
    return kept


def aggregate_distribution(
    annotations: list[AnnotatorRanking] | tuple[AnnotatorRanking, ...],
    weights: tuple[float, float, float] = DEFAULT_RANK_WEIGHTS,
    n_fonts: int = 10,
) -> LabelDistribution:
    """Fold ranked choices into one normalized distribution.

    Each ranking contributes ``weights[0]`` to its first choice, ``weights[1]``
    to its second and ``weights[2]`` to its third; scores are then normalized
    so the result sums to 1.
    """
    if not annotations:
        raise ValueError("no annotations")
    scores = np.zeros(n_fonts, dtype=np.float64)
    for ann in annotations:
        for weight, choice in zip(weights, ann.choices):
            scores[choice] += weight
    return LabelDistribution.from_scores(scores)


def aggregate_corpus(
    instances: list[RawInstance],
    weights: tuple[float, float, float] = DEFAULT_RANK_WEIGHTS,
    n_fonts: int = 10,
) -> list[LabeledInstance]:
    return [
        LabeledInstance(i.instance_id, i.text, aggregate_distribution(i.annotations, weights, n_fonts))
        for i in instances
    ]


def split_corpus(
    instances: list[LabeledInstance],
    ratios: tuple[float, float, float] = (0.7, 0.1, 0.2),
    seed: int = 0,
) -> SplitCorpus:
    """Shuffle with ``seed`` and cut into train/dev/test.

    Sizes are ``floor(ratio * N)`` for train and dev; test takes the
    remainder. Deterministic for a fixed seed.
    """
    if any(r <= 0 for r in ratios):
        raise ValueError(f"ratios must be positive, got {ratios}")
    if abs(sum(ratios) - 1.0) > _SUM_TOL:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    n = len(instances)
    if n < 3:
        raise ValueError(f"need at least 3 instances to split, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    shuffled = [instances[i] for i in order]
    # tiny epsilon guards against 0.7 * N landing just below an exact integer
    n_train = math.floor(ratios[0] * n + 1e-9)
    n_dev = math.floor(ratios[1] * n + 1e-9)
    return SplitCorpus(
        train=tuple(shuffled[:n_train]),
        dev=tuple(shuffled[n_train : n_train + n_dev]),
        test=tuple(shuffled[n_train + n_dev :]),
        split_seed=seed,
    )


def kappa_from_counts(counts: np.ndarray, n_raters: int) -> float:
    """Chance-corrected agreement over an instances x categories count matrix.

    Each of ``n_raters`` raters contributes 3 assignments per instance (their
    three ranked choices), so every row sums to ``3 * n_raters``. Because a
    rater's own three choices are distinct, observed agreement can never reach
    the single-assignment ceiling; agreement is therefore normalized against
    the maximum attainable under that constraint (all raters choosing an
    identical triple), which restores kappa = 1 for perfect agreement.
    """
    counts = np.asarray(counts, dtype=np.float64)
    n_items = counts.shape[0]
    if n_items < 2:
        raise ValueError(f"need at least 2 instances, got {n_items}")
    if n_raters < 2:
        raise ValueError(f"need at least 2 raters, got {n_raters}")
    m = 3 * n_raters
    if not np.allclose(counts.sum(axis=1), m):
        raise ValueError(f"every row must sum to 3 * n_raters = {m}")

    p_observed = float(np.mean(((counts**2).sum(axis=1) - m) / (m * (m - 1))))
    share = counts.sum(axis=0) / counts.sum()
    p_chance = float((share**2).sum())
    p_max = (n_raters - 1) / (3 * n_raters - 1)

    numerator = p_observed - p_chance
    denominator = p_max - p_chance
    if abs(denominator) < 1e-12:
        return 1.0 if abs(numerator) < 1e-12 else 0.0
    return numerator / denominator


def fleiss_kappa(instances: list[RawInstance]) -> float:
    """Inter-annotator agreement over ranked triples.

    Annotation counts vary per instance, so each instance is deterministically
    truncated to the corpus-wide minimum number of rankings (stored order)
    before building the count matrix.
    """
    if len(instances) < 2:
        raise ValueError(f"need at least 2 instances, got {len(instances)}")
    if any(not inst.annotations for inst in instances):
        raise ValueError("every instance needs at least one ranking")
    n_raters = min(len(inst.annotations) for inst in instances)
    if n_raters < 2:
        raise ValueError(f"need at least 2 raters per instance, got {n_raters}")
    n_fonts = 1 + max(c for inst in instances for a in inst.annotations for c in a.choices)
    n_fonts = max(n_fonts, 10)

    counts = np.zeros((len(instances), n_fonts), dtype=np.float64)
    for row, inst in enumerate(instances):
        for ann in inst.annotations[:n_raters]:
            for choice in ann.choices:
                counts[row, choice] += 1
    return kappa_from_counts(counts, n_raters)


def average_distribution(instances: list[LabeledInstance]) -> LabelDistribution:
    """Arithmetic mean of target distributions."""
    if not instances:
        raise ValueError("cannot average an empty corpus")
    stacked = np.stack([inst.target.probs for inst in instances])
    return LabelDistribution.from_scores(stacked.mean(axis=0))
