"""Rebalance a skewed training set with back-translation oversampling.

Instances leaning on rare fonts are round-tripped through pivot languages
(the offline mock provider stands in for a real translation service), then
the instances leaning hardest on the most popular font are removed.
"""

import numpy as np

from fontsense.augment import AugmentConfig, RewordingTranslator, back_translate, rebalance
from fontsense.corpus import aggregate_corpus, average_distribution, filter_annotators, split_corpus
from fontsense.synthetic import generate_raw_corpus


def main():
    labeled = aggregate_corpus(filter_annotators(generate_raw_corpus(n_instances=400, seed=7)))
    train = list(split_corpus(labeled, seed=42).train)
    provider = RewordingTranslator()

    print("=== Back-translating one instance ===")
    popularity = average_distribution(train).probs
    rare_fonts = np.argsort(popularity)[:3]
    scored = sorted(train, key=lambda i: -sum(i.target.probs[f] for f in rare_fonts))
    candidate = next(i for i in scored if back_translate(i, provider, ("de", "fr", "es", "ja")))
    print(f"original : {candidate.instance_id!r} {candidate.text!r}")
    for new in back_translate(candidate, provider, ("de", "fr", "es", "ja")):
        print(f"  {new.instance_id:<18} {new.text!r}")
    print("(round-trips identical to the original after tokenization are dropped)")

    print("\n=== Rebalancing the training set ===")
    config = AugmentConfig(pivot_langs=("de", "fr", "es", "ja"),
                           rarity_threshold=0.25, oversample_cap=60, undersample_count=20)
    before = average_distribution(train).probs
    augmented = rebalance(train, config, provider)
    after = average_distribution(augmented).probs
    added = sum(1 for i in augmented if "-bt-" in i.instance_id)
    print(f"{len(train)} instances -> {len(augmented)} "
          f"(+{added} back-translations, -{len(train) + added - len(augmented)} popular-heavy)")
    print("\nfont   mass before  mass after")
    for f in range(10):
        marker = " <- rare" if f in rare_fonts else ""
        print(f"  F{f}      {before[f]:.3f}       {after[f]:.3f}{marker}")
    print("\n(dev and test sets are never touched by augmentation)")


if __name__ == "__main__":
    main()
