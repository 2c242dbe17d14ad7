"""Correlate font label mass with feature dimensions across the corpus.

The resulting fonts x dims matrix answers questions like "which emotional
signals move with script fonts?". Undefined cells (constant columns) are
reported as explicit nulls, and the matrix is written as CSV for plotting.
"""

import tempfile
from pathlib import Path

from fontsense.analysis import correlation_matrix, write_correlation_csv
from fontsense.catalog import default_catalog
from fontsense.corpus import aggregate_corpus, filter_annotators
from fontsense.features import EmotionLexicon, IntensityLexicon, NrcFeaturizer, SynonymTable, VadLexicon
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
    catalog = default_catalog()
    labeled = aggregate_corpus(filter_annotators(generate_raw_corpus(n_instances=600, seed=7)))

    matrix = correlation_matrix(labeled, nrc)
    labels = nrc.feature_labels()

    print("strongest feature correlations per font:")
    for font_id, row in enumerate(matrix):
        defined = [(r, d) for d, r in enumerate(row) if r is not None]
        top_pos = max(defined)
        top_neg = min(defined)
        print(f"  F{font_id} {catalog.font(font_id).name:<24} "
              f"+{top_pos[0]:.2f} {labels[top_pos[1]]:<22} "
              f"{top_neg[0]:.2f} {labels[top_neg[1]]}")

    undefined = sum(1 for row in matrix for cell in row if cell is None)
    print(f"\nundefined cells (constant columns): {undefined}")

    out = workspace / "correlations.csv"
    write_correlation_csv(matrix, catalog.names, labels, out)
    print(f"full matrix written to {out}")


if __name__ == "__main__":
    main()
