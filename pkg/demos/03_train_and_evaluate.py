"""Train the predictor over four seeds and compare against the baseline.

Reproduces the headline evaluation: tie-aware Font Recall at k in {3, 5} and
weighted F1 at k in {1, 3, 5}, averaged over seeds, plus a paired t-test of
per-instance top-1 hits against the majority baseline.
"""

import tempfile
from pathlib import Path

import numpy as np

from fontsense.corpus import aggregate_corpus, filter_annotators, split_corpus
from fontsense.evaluation import (
    REPORT_COLUMNS,
    evaluate,
    majority_baseline,
    ModelPredictor,
    paired_ttest,
    per_instance_topk_hits,
)
from fontsense.features import EmotionLexicon, IntensityLexicon, NrcFeaturizer, SynonymTable, VadLexicon
from fontsense.model import TrainConfig, train
from fontsense.synthetic import generate_raw_corpus, write_lexicon_files


def main():
    workspace = Path(tempfile.mkdtemp(prefix="fontsense-demo-"))
    lex = write_lexicon_files(workspace / "lexicons")
    nrc = NrcFeaturizer(
        EmotionLexicon.load(lex["emotion"]),
        IntensityLexicon.load(lex["intensity"]),
        VadLexicon.load(lex["vad"]),
        SynonymTable.load(lex["synonyms"]),
    )

    print("preparing corpus...")
    labeled = aggregate_corpus(filter_annotators(generate_raw_corpus(n_instances=1309, seed=7)))
    split = split_corpus(labeled, seed=42)
    test = list(split.test)

    baseline = majority_baseline(list(split.train))
    base_report = evaluate(baseline, test)

    config = TrainConfig(epochs=60, batch_size=16, hidden_dim=64, seeds=(0, 1, 2, 3))
    print(f"training {len(config.seeds)} seeds x {config.epochs} epochs...")
    result = train(split, nrc, config)

    per_seed = []
    for run in result.runs:
        report = evaluate(ModelPredictor(run.model, nrc), test)
        per_seed.append(report.as_row())
        print(f"  seed {run.seed}: best dev F@1 {run.best_dev_f1:.2f} "
              f"at epoch {run.best_epoch}")
    mean = np.mean(per_seed, axis=0)

    print("\nModel/Evals        " + "  ".join(f"{c:>8}" for c in REPORT_COLUMNS))
    print("majority baseline  " + "  ".join(f"{v:8.2f}" for v in base_report.as_row()))
    print("emotion features   " + "  ".join(f"{v:8.2f}" for v in mean))

    truth = [inst.target for inst in test]
    best_preds = [ModelPredictor(result.best, nrc).predict_dist(inst) for inst in test]
    base_preds = [baseline.predict_dist(inst) for inst in test]
    t, p = paired_ttest(
        per_instance_topk_hits(truth, best_preds, 1),
        per_instance_topk_hits(truth, base_preds, 1),
    )
    verdict = "significant" if p < 0.05 else "not significant"
    print(f"\npaired t-test on top-1 hits: t = {t:.2f}, p = {p:.2e} ({verdict} at 95%)")


if __name__ == "__main__":
    main()
