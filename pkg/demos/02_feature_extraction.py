"""Show the three featurizers side by side on the same texts.

Emotion-lexicon features (34 dims of pooled flags, intensities, and VAD),
mean-pooled word vectors, and externally precomputed sentence vectors all
produce the fixed-length inputs the predictor trains on.
"""

import tempfile
from pathlib import Path

import numpy as np

from fontsense.features import (
    EmotionLexicon,
    ExternalFeaturizer,
    IntensityLexicon,
    NrcFeaturizer,
    SynonymTable,
    VadLexicon,
    WordVecFeaturizer,
    load_embeddings,
    stem,
    tokenize,
)
from fontsense.synthetic import write_embeddings_file, write_lexicon_files

TEXTS = [
    "Happy Party Tonight!",
    "Quarterly report for trusted clients",
    "Forever in our hearts",
    "Danger: haunted warehouse tour",
]


def main():
    workspace = Path(tempfile.mkdtemp(prefix="fontsense-demo-"))
    lex = write_lexicon_files(workspace / "lexicons")
    nrc = NrcFeaturizer(
        EmotionLexicon.load(lex["emotion"]),
        IntensityLexicon.load(lex["intensity"]),
        VadLexicon.load(lex["vad"]),
        SynonymTable.load(lex["synonyms"]),
    )

    print("=== Tokenization and stemming ===")
    for text in ("Grand Opening!", "B2B  sales", "delights, joyful"):
        tokens = tokenize(text)
        print(f"{text!r} -> {tokens} -> stems {[stem(t) for t in tokens]}")

    print("\n=== Emotion-lexicon features (34 dims) ===")
    labels = nrc.feature_labels()
    for text in TEXTS:
        vec = nrc.featurize(text).values
        strongest = np.argsort(-vec)[:3]
        pretty = ", ".join(f"{labels[i]}={vec[i]:.2f}" for i in strongest)
        print(f"{text!r}\n  strongest dims: {pretty}")

    print("\nout-of-vocabulary fallbacks:")
    print(f"  'delights' resolves through its stem -> joy flag "
          f"{nrc.token_vector('delights')[4]:.0f}")
    print(f"  'joyous' resolves through a synonym -> joy flag "
          f"{nrc.token_vector('joyous')[4]:.0f}")
    print(f"  'zzzq' misses everywhere -> neutral VAD {nrc.token_vector('zzzq')[14:17]}")

    print("\n=== Word-vector features (mean pooling) ===")
    emb_path = write_embeddings_file(workspace / "vectors.txt", dim=16, seed=11)
    table, errors = load_embeddings(emb_path)
    wordvec = WordVecFeaturizer(table)
    print(f"loaded {len(table)} vectors of dim {table.dim} ({len(errors)} bad lines)")
    a = wordvec.featurize(TEXTS[0]).values
    b = wordvec.featurize(TEXTS[1]).values
    cos = float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
    print(f"cosine({TEXTS[0]!r}, {TEXTS[1]!r}) = {cos:.2f} (different themes)")

    print("\n=== External (precomputed) sentence vectors ===")
    ext_path = workspace / "external.jsonl"
    ext_path.write_text('{"id": "s0001", "vec": [0.9, -0.2, 0.4]}\n')
    from fontsense.features import load_external_vectors

    vectors, _ = load_external_vectors(ext_path)
    external = ExternalFeaturizer(vectors)
    print(f"vector for id 's0001': {external.vector_for_id('s0001')}")
    print("(vectors produced by any outside encoder plug in through this file format)")


if __name__ == "__main__":
    main()
