"""Deterministic synthetic corpus and miniature lexicons.

The released annotation corpus and the full emotion lexicons are external
downloads. This module generates a stand-in with the same shapes and file
formats: short texts drawn from three style themes (formal, casual,
script-leaning emotional), each theme biased toward different fonts, with
6-9 ranked annotations per instance including a couple of low-effort
annotators for the filtering stage to catch. Because the texts carry real
lexicon words, emotion features genuinely predict the synthetic labels,
which lets the whole pipeline run and be exercised offline.

Everything here is seeded and reproducible.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import AnnotatorRanking, RawInstance

__all__ = [
    "LEXICON_WORDS",
    "SYNONYMS",
    "write_lexicon_files",
    "write_embeddings_file",
    "generate_raw_corpus",
]

# word -> (emotion flags, intensities, vad)
# flags: subset of the 8 emotions + negative/positive sentiment
# intensities: {anger|fear|sadness|joy: value}
LEXICON_WORDS: dict[str, tuple[tuple[str, ...], dict[str, float], tuple[float, float, float]]] = {
    # joy / celebration
    "happy": (("joy", "positive"), {"joy": 0.85}, (0.92, 0.60, 0.65)),
    "fun": (("joy", "positive"), {"joy": 0.75}, (0.88, 0.70, 0.60)),
    "party": (("joy", "surprise", "positive"), {"joy": 0.70}, (0.85, 0.80, 0.55)),
    "celebrate": (("joy", "anticipation", "positive"), {"joy": 0.80}, (0.90, 0.75, 0.62)),
    "smile": (("joy", "positive"), {"joy": 0.65}, (0.87, 0.50, 0.58)),
    "delight": (("joy", "surprise", "positive"), {"joy": 0.78}, (0.89, 0.65, 0.60)),
    "cheerful": (("joy", "positive"), {"joy": 0.72}, (0.88, 0.62, 0.60)),
    "game": (("joy", "anticipation", "positive"), {"joy": 0.55}, (0.75, 0.65, 0.55)),
    # surprise
    "surprise": (("surprise",), {}, (0.65, 0.85, 0.40)),
    "wow": (("surprise", "joy", "positive"), {"joy": 0.60}, (0.80, 0.85, 0.45)),
    "amazing": (("surprise", "joy", "positive"), {"joy": 0.74}, (0.90, 0.78, 0.60)),
    "stunning": (("surprise", "positive"), {}, (0.85, 0.75, 0.55)),
    # anticipation / commerce
    "launch": (("anticipation",), {}, (0.65, 0.70, 0.60)),
    "soon": (("anticipation",), {}, (0.55, 0.55, 0.45)),
    "opening": (("anticipation", "positive"), {}, (0.70, 0.65, 0.55)),
    "countdown": (("anticipation", "surprise"), {}, (0.55, 0.75, 0.45)),
    "preview": (("anticipation",), {}, (0.60, 0.55, 0.50)),
    # trust / formal
    "trusted": (("trust", "positive"), {}, (0.78, 0.30, 0.70)),
    "reliable": (("trust", "positive"), {}, (0.75, 0.25, 0.68)),
    "professional": (("trust", "positive"), {}, (0.72, 0.35, 0.75)),
    "certified": (("trust",), {}, (0.68, 0.30, 0.70)),
    "secure": (("trust", "positive"), {}, (0.70, 0.28, 0.72)),
    "official": (("trust",), {}, (0.62, 0.32, 0.74)),
    "quarterly": (("trust", "anticipation"), {}, (0.55, 0.30, 0.62)),
    "conference": (("trust", "anticipation"), {}, (0.58, 0.40, 0.65)),
    # love / script-leaning
    "love": (("joy", "trust", "positive"), {"joy": 0.90}, (0.95, 0.65, 0.60)),
    "heart": (("joy", "trust", "positive"), {"joy": 0.70}, (0.88, 0.55, 0.55)),
    "sweet": (("joy", "positive"), {"joy": 0.62}, (0.85, 0.45, 0.52)),
    "beautiful": (("joy", "positive"), {"joy": 0.73}, (0.92, 0.50, 0.58)),
    "wedding": (("joy", "anticipation", "trust", "positive"), {"joy": 0.76}, (0.90, 0.66, 0.57)),
    "romance": (("joy", "anticipation", "positive"), {"joy": 0.72}, (0.89, 0.62, 0.53)),
    "dream": (("joy", "anticipation", "positive"), {"joy": 0.58}, (0.80, 0.45, 0.50)),
    "elegant": (("positive",), {}, (0.82, 0.35, 0.62)),
    "forever": (("trust", "positive"), {}, (0.72, 0.40, 0.55)),
    "anniversary": (("joy", "anticipation", "positive"), {"joy": 0.64}, (0.84, 0.55, 0.56)),
    # sadness
    "farewell": (("sadness",), {"sadness": 0.68}, (0.30, 0.40, 0.35)),
    "goodbye": (("sadness",), {"sadness": 0.60}, (0.32, 0.42, 0.36)),
    "memorial": (("sadness", "trust"), {"sadness": 0.72}, (0.28, 0.35, 0.40)),
    "sorrow": (("sadness", "negative"), {"sadness": 0.85}, (0.15, 0.45, 0.30)),
    "miss": (("sadness",), {"sadness": 0.55}, (0.35, 0.48, 0.38)),
    # fear
    "danger": (("fear", "negative"), {"fear": 0.82}, (0.15, 0.80, 0.30)),
    "warning": (("fear", "negative"), {"fear": 0.70}, (0.22, 0.75, 0.40)),
    "scary": (("fear", "negative"), {"fear": 0.78}, (0.18, 0.78, 0.28)),
    "spooky": (("fear", "surprise"), {"fear": 0.60}, (0.35, 0.72, 0.35)),
    "haunted": (("fear", "negative"), {"fear": 0.74}, (0.20, 0.70, 0.30)),
    # anger / disgust
    "furious": (("anger", "negative"), {"anger": 0.88}, (0.12, 0.85, 0.45)),
    "rage": (("anger", "negative"), {"anger": 0.92}, (0.10, 0.90, 0.48)),
    "protest": (("anger", "fear", "negative"), {"anger": 0.65}, (0.30, 0.70, 0.50)),
    "gross": (("disgust", "negative"), {}, (0.15, 0.55, 0.40)),
    "nasty": (("disgust", "anger", "negative"), {"anger": 0.55}, (0.12, 0.60, 0.42)),
}

SYNONYMS: dict[str, tuple[str, ...]] = {
    "joyous": ("happy", "cheerful"),
    "celebrating": ("celebrate", "party"),
    "automobile": ("car",),
    "car": ("automobile",),
    "bash": ("party",),
    "adore": ("love",),
    "dependable": ("reliable", "trusted"),
    "grand": ("amazing", "stunning"),
    "festive": ("party", "cheerful"),
    "glee": ("delights",),  # inflected synonym: resolves via its stem
}

# words that never appear in the lexicons; they dilute the signal like real text
_FILLERS = (
    "sale", "store", "event", "today", "menu", "coffee", "yoga", "class",
    "meeting", "annual", "report", "schedule", "weekend", "summer", "night",
    "friday", "market", "studio", "downtown", "shop", "hour", "deal",
)

_THEMES = {
    "formal": (
        ("trusted", "reliable", "professional", "certified", "secure", "official",
         "quarterly", "conference", "dependable"),
        np.array([0.26, 0.04, 0.34, 0.06, 0.01, 0.22, 0.03, 0.02, 0.01, 0.01]),
    ),
    "casual": (
        ("happy", "fun", "party", "celebrate", "smile", "delight", "cheerful",
         "wow", "amazing", "game", "launch", "opening", "countdown", "joyous",
         "festive", "bash"),
        np.array([0.04, 0.26, 0.03, 0.34, 0.005, 0.02, 0.12, 0.08, 0.10, 0.005]),
    ),
    "script": (
        ("love", "heart", "sweet", "beautiful", "wedding", "romance", "dream",
         "elegant", "forever", "anniversary", "farewell", "memorial", "adore"),
        np.array([0.02, 0.08, 0.03, 0.05, 0.26, 0.01, 0.01, 0.12, 0.18, 0.24]),
    ),
}

_THEME_PRIOR = {"formal": 0.33, "casual": 0.45, "script": 0.22}

# pluralizing these survives the suffix stemmer's round trip
_SAFE_PLURALS = ("delight", "warning", "heart", "dream", "deal", "report", "game")


def write_lexicon_files(directory: str | Path) -> dict[str, Path]:
    """Write the miniature lexicons in the published tab-separated layouts."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    emotions = ("anger", "anticipation", "disgust", "fear", "joy", "sadness",
                "surprise", "trust", "negative", "positive")

    emotion_path = directory / "emotion.tsv"
    with emotion_path.open("w", encoding="utf-8") as fh:
        for word, (flags, _, _) in sorted(LEXICON_WORDS.items()):
            for emotion in emotions:
                fh.write(f"{word}\t{emotion}\t{1 if emotion in flags else 0}\n")

    intensity_path = directory / "intensity.tsv"
    with intensity_path.open("w", encoding="utf-8") as fh:
        for word, (_, intensities, _) in sorted(LEXICON_WORDS.items()):
            for emotion, value in sorted(intensities.items()):
                fh.write(f"{word}\t{emotion}\t{value}\n")

    vad_path = directory / "vad.tsv"
    with vad_path.open("w", encoding="utf-8") as fh:
        for word, (_, _, vad) in sorted(LEXICON_WORDS.items()):
            fh.write(f"{word}\t{vad[0]}\t{vad[1]}\t{vad[2]}\n")

    synonyms_path = directory / "synonyms.tsv"
    with synonyms_path.open("w", encoding="utf-8") as fh:
        for word, syns in sorted(SYNONYMS.items()):
            fh.write(f"{word}\t{','.join(syns)}\n")

    return {
        "emotion": emotion_path,
        "intensity": intensity_path,
        "vad": vad_path,
        "synonyms": synonyms_path,
    }


def write_embeddings_file(path: str | Path, dim: int = 16, seed: int = 11) -> Path:
    """Write a small text-format embedding table covering the corpus vocabulary.

    Vectors cluster by theme (theme centroid + per-word noise) so mean
    pooling carries signal, mirroring how pretrained vectors behave.
    """
    rng = np.random.default_rng(seed)
    centroids = {name: rng.normal(0, 1, dim) for name in _THEMES}
    filler_centroid = rng.normal(0, 1, dim)

    vocab: dict[str, np.ndarray] = {}
    for theme, (words, _) in _THEMES.items():
        for word in words:
            vocab[word] = centroids[theme] + rng.normal(0, 0.35, dim)
    for word in LEXICON_WORDS:
        if word not in vocab:
            vocab[word] = filler_centroid + rng.normal(0, 0.8, dim)
    for word in _FILLERS:
        vocab[word] = filler_centroid + rng.normal(0, 0.5, dim)

    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for word in sorted(vocab):
            values = " ".join(f"{v:.5f}" for v in vocab[word])
            fh.write(f"{word} {values}\n")
    return path


def generate_raw_corpus(
    n_instances: int = 1309,
    seed: int = 7,
    n_annotators: int = 48,
    n_spammers: int = 2,
    annotations_per_instance: int = 9,
) -> list[RawInstance]:
    """Generate ranked annotations over theme-flavored short texts.

    Regular annotators rank three distinct fonts drawn from the instance
    theme's font affinity (with per-annotator noise); spammers always put
    the same font first and exist so annotator filtering has work to do.
    """
    rng = np.random.default_rng(seed)
    theme_names = list(_THEMES)
    theme_prior = np.array([_THEME_PRIOR[t] for t in theme_names])
    theme_prior = theme_prior / theme_prior.sum()

    annotator_bias = {
        f"a{idx:02d}": rng.normal(0, 0.08, 10) for idx in range(n_annotators)
    }
    spammer_ids = [f"spam{idx}" for idx in range(n_spammers)]

    instances = []
    for i in range(n_instances):
        theme = theme_names[rng.choice(len(theme_names), p=theme_prior)]
        words, affinity = _THEMES[theme]

        n_theme_words = int(rng.integers(2, 5))
        n_fillers = int(rng.integers(0, 4))
        chosen = list(rng.choice(words, size=min(n_theme_words, len(words)), replace=False))
        chosen += list(rng.choice(_FILLERS, size=n_fillers, replace=False))
        chosen = [
            w + "s" if w in _SAFE_PLURALS and rng.random() < 0.3 else w for w in chosen
        ]
        order = rng.permutation(len(chosen))
        text = " ".join(chosen[j] for j in order)
        if rng.random() < 0.15:
            text += "!"

        raters = [f"a{idx:02d}" for idx in rng.choice(n_annotators, size=annotations_per_instance, replace=False)]
        for spam_id in spammer_ids:
            if rng.random() < 0.5:
                raters[int(rng.integers(0, len(raters)))] = spam_id

        annotations = []
        for rater in raters:
            if rater.startswith("spam"):
                others = rng.choice([f for f in range(10) if f != 3], size=2, replace=False)
                annotations.append(AnnotatorRanking(rater, 3, int(others[0]), int(others[1])))
                continue
            weights = np.clip(affinity + annotator_bias[rater] + rng.normal(0, 0.05, 10), 1e-4, None)
            picks = []
            remaining = weights.copy()
            for _ in range(3):
                p = remaining / remaining.sum()
                pick = int(rng.choice(10, p=p))
                picks.append(pick)
                remaining[pick] = 0.0
            annotations.append(AnnotatorRanking(rater, *picks))
        instances.append(RawInstance(f"s{i:04d}", text, tuple(annotations)))
    return instances
