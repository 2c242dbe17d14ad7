"""Correlation between font label mass and feature dimensions.

Builds a fonts x feature-dims matrix of Pearson coefficients across a
corpus, so one can ask which feature dimensions move with which fonts.
Cells where either column is constant are undefined and reported as
explicit nulls, never silently zeroed.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .corpus import LabeledInstance

__all__ = ["pearson", "correlation_matrix", "correlation_csv", "write_correlation_csv"]

CSV_NULL = "NA"


def pearson(x, y) -> float:
    """Sample Pearson correlation; raises on constant input rather than NaN."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"inputs must be equal-length vectors, got {x.shape} vs {y.shape}")
    if len(x) < 2:
        raise ValueError(f"need at least 2 points, got {len(x)}")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation is undefined for constant input")
    r = float((dx * dy).sum() / (sx * sy))
    return max(-1.0, min(1.0, r))


def correlation_matrix(
    instances: list[LabeledInstance], feature_provider
) -> list[list[float | None]]:
    """fonts x feature-dims Pearson matrix; None marks undefined cells."""
    if len(instances) < 2:
        raise ValueError(f"need at least 2 instances, got {len(instances)}")
    rows = []
    for inst in instances:
        try:
            rows.append(feature_provider.featurize_instance(inst).values)
        except Exception as exc:
            raise RuntimeError(f"feature provider failed on instance {inst.instance_id!r}: {exc}") from exc
    features = np.stack(rows)
    targets = np.stack([inst.target.probs for inst in instances])
    n_fonts = targets.shape[1]

    matrix: list[list[float | None]] = []
    for font in range(n_fonts):
        row: list[float | None] = []
        for dim in range(features.shape[1]):
            try:
                row.append(pearson(targets[:, font], features[:, dim]))
            except ValueError:
                row.append(None)
        matrix.append(row)
    return matrix


def correlation_csv(
    matrix: list[list[float | None]],
    font_names: list[str],
    feature_labels: list[str],
) -> str:
    """CSV with font names as rows and feature dim labels as the header."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["font", *feature_labels])
    for name, row in zip(font_names, matrix):
        writer.writerow([name, *(CSV_NULL if c is None else f"{c:.6f}" for c in row)])
    return buf.getvalue()


def write_correlation_csv(
    matrix: list[list[float | None]],
    font_names: list[str],
    feature_labels: list[str],
    path: str | Path,
) -> None:
    Path(path).write_text(correlation_csv(matrix, font_names, feature_labels), encoding="utf-8")
