"""Walk the annotation corpus from raw rankings to a labeled, split dataset.

Generates the bundled synthetic corpus (the released annotations are an
external download), then runs validation, annotator filtering, rank-weighted
aggregation, agreement statistics, and the 70/10/20 split.
"""

import numpy as np

from fontsense.catalog import default_catalog
from fontsense.corpus import (
    aggregate_corpus,
    aggregate_distribution,
    average_distribution,
    filter_annotators,
    fleiss_kappa,
    split_corpus,
)
from fontsense.synthetic import generate_raw_corpus


def main():
    catalog = default_catalog()
    print("=== 1. Raw annotations ===")
    raw = generate_raw_corpus(n_instances=1309, seed=7)
    n_raters = {a.annotator_id for inst in raw for a in inst.annotations}
    print(f"{len(raw)} instances, {len(n_raters)} annotators, "
          f"{sum(len(i.annotations) for i in raw)} ranked triples")
    sample = raw[0]
    print(f"example: {sample.instance_id!r} text={sample.text!r}")
    first = sample.annotations[0]
    print(f"  one ranking: annotator {first.annotator_id} chose "
          f"{[catalog.font(c).name for c in first.choices]}")

    print("\n=== 2. Annotator filtering ===")
    filtered = filter_annotators(raw, same_choice_threshold=0.9, min_annotations=6)
    kept_raters = {a.annotator_id for inst in filtered for a in inst.annotations}
    print(f"kept {len(filtered)} instances; dropped annotators: "
          f"{sorted(n_raters - kept_raters)}")
    counts = [len(i.annotations) for i in filtered]
    print(f"annotations per instance now range {min(counts)}..{max(counts)}")

    print("\n=== 3. Rank-weighted aggregation (1.0 / 0.6 / 0.3) ===")
    example = filtered[0]
    target = aggregate_distribution(example.annotations)
    print(f"{example.text!r} ->")
    for font, p in sorted(enumerate(target.probs), key=lambda fp: -fp[1])[:4]:
        print(f"  {catalog.font(font).name:<24} {p:.3f}")
    print(f"  (sums to {target.probs.sum():.9f})")

    print("\n=== 4. Corpus statistics ===")
    labeled = aggregate_corpus(filtered)
    kappa = fleiss_kappa(filtered)
    print(f"agreement (all three choices): kappa = {kappa:.3f}")
    avg = average_distribution(labeled).probs
    order = np.argsort(-avg)
    print("fonts by average label mass:")
    for font in order:
        bar = "#" * int(round(200 * avg[font]))
        print(f"  F{font} {catalog.font(int(font)).name:<24} {avg[font]:.3f} {bar}")

    print("\n=== 5. 70/10/20 split ===")
    split = split_corpus(labeled, seed=42)
    print(f"train {len(split.train)}, dev {len(split.dev)}, test {len(split.test)} "
          f"(seed {split.split_seed}; rerunning reproduces this exactly)")


if __name__ == "__main__":
    main()
