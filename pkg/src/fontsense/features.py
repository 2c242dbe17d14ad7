"""Turn short texts into fixed-length feature vectors.

Three featurizers are provided:

* ``NrcFeaturizer`` builds a 34-dim vector from word-emotion lexicons
  (binary emotion/sentiment flags, affect intensities, valence/arousal/
  dominance), pooled over tokens with mean ++ max.
* ``WordVecFeaturizer`` mean-pools pretrained word vectors loaded from the
  standard text format.
* ``ExternalFeaturizer`` ingests precomputed sentence vectors keyed by
  instance id, so embeddings produced by encoders run elsewhere can be
  plugged in without those models ever executing here.

Lexicon file layouts match the published tab-separated formats, so the real
lexicon releases load unmodified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, TypeVar

import numpy as np

from .corpus import LabeledInstance

__all__ = [
    "EMOTIONS",
    "SENTIMENTS",
    "INTENSITY_EMOTIONS",
    "FeatureVector",
    "EmotionLexicon",
    "IntensityLexicon",
    "VadLexicon",
    "SynonymTable",
    "EmbeddingTable",
    "tokenize",
    "stem",
    "lookup_with_fallback",
    "NrcFeaturizer",
    "WordVecFeaturizer",
    "ExternalFeaturizer",
    "load_embeddings",
    "load_external_vectors",
]

EMOTIONS = ("anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust")
SENTIMENTS = ("negative", "positive")
INTENSITY_EMOTIONS = ("anger", "fear", "sadness", "joy")

_VAD_NEUTRAL = 0.5

# longest first; a suffix is stripped only if at least 3 characters remain
_SUFFIXES = ("ness", "ing", "ful", "es", "ed", "ly", "s")

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class FeatureVector:
    featurizer_name: str
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError(f"feature vector must be 1-D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature vector entries must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, strip edge punctuation, drop empties."""
    tokens = []
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        if end > start:
            tokens.append(raw[start:end])
    return tokens


def stem(word: str) -> str:
    """Strip the longest matching suffix, keeping at least 3 characters."""
    for suffix in _SUFFIXES:
        if word.endswith(suffix) and len(word) - len(suffix) >= 3:
            return word[: -len(suffix)]
    return word


def lookup_with_fallback(
    word: str,
    get: Callable[[str], T | None],
    stemmer: Callable[[str], str] = stem,
    synonyms: "SynonymTable | None" = None,
) -> T | None:
    """Exact match, then stemmed match, then synonyms (exact, then stemmed)."""
    hit = get(word)
    if hit is not None:
        return hit
    stemmed = stemmer(word)
    if stemmed != word:
        hit = get(stemmed)
        if hit is not None:
            return hit
    if synonyms is not None:
        for syn in synonyms.synonyms_of(word):
            hit = get(syn)
            if hit is not None:
                return hit
            syn_stem = stemmer(syn)
            if syn_stem != syn:
                hit = get(syn_stem)
                if hit is not None:
                    return hit
    return None


@dataclass(frozen=True)
class EmotionLexicon:
    """word -> 10 binary flags (8 emotions + negative/positive sentiment)."""

    entries: dict[str, np.ndarray]

    def vector(self, word: str) -> np.ndarray | None:
        return self.entries.get(word)

    @classmethod
    def load(cls, path: str | Path) -> "EmotionLexicon":
        columns = {name: i for i, name in enumerate(EMOTIONS + SENTIMENTS)}
        entries: dict[str, np.ndarray] = {}
        for line_no, parts in _tsv_lines(path, 3):
            word, emotion, flag = parts
            if emotion not in columns:
                raise ValueError(f"{path}:{line_no}: unknown emotion {emotion!r}")
            if flag not in ("0", "1"):
                raise ValueError(f"{path}:{line_no}: flag must be 0 or 1, got {flag!r}")
            entries.setdefault(word, np.zeros(len(columns)))[columns[emotion]] = float(flag)
        return cls(entries)


@dataclass(frozen=True)
class IntensityLexicon:
    """(word, emotion) -> intensity in [0, 1] for anger/fear/sadness/joy."""

    entries: dict[tuple[str, str], float]

    def vector(self, word: str) -> np.ndarray | None:
        values = [self.entries.get((word, emo)) for emo in INTENSITY_EMOTIONS]
        if all(v is None for v in values):
            return None
        return np.array([0.0 if v is None else v for v in values])

    @classmethod
    def load(cls, path: str | Path) -> "IntensityLexicon":
        entries: dict[tuple[str, str], float] = {}
        for line_no, parts in _tsv_lines(path, 3):
            word, emotion, score = parts
            if emotion not in INTENSITY_EMOTIONS:
                raise ValueError(f"{path}:{line_no}: unknown emotion {emotion!r}")
            value = float(score)
            if not 0 <= value <= 1:
                raise ValueError(f"{path}:{line_no}: intensity must be in [0, 1], got {value}")
            entries[(word, emotion)] = value
        return cls(entries)


@dataclass(frozen=True)
class VadLexicon:
    """word -> (valence, arousal, dominance), each in [0, 1]."""

    entries: dict[str, np.ndarray]

    def vector(self, word: str) -> np.ndarray | None:
        return self.entries.get(word)

    @classmethod
    def load(cls, path: str | Path) -> "VadLexicon":
        entries: dict[str, np.ndarray] = {}
        for line_no, parts in _tsv_lines(path, 4):
            word, *scores = parts
            triple = np.array([float(s) for s in scores])
            if np.any(triple < 0) or np.any(triple > 1):
                raise ValueError(f"{path}:{line_no}: VAD values must be in [0, 1], got {triple}")
            entries[word] = triple
        return cls(entries)


@dataclass(frozen=True)
class SynonymTable:
    entries: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        for word, syns in self.entries.items():
            if word in syns:
                raise ValueError(f"word {word!r} may not be its own synonym")

    def synonyms_of(self, word: str) -> tuple[str, ...]:
        return self.entries.get(word, ())

    @classmethod
    def load(cls, path: str | Path) -> "SynonymTable":
        entries: dict[str, tuple[str, ...]] = {}
        for _line_no, parts in _tsv_lines(path, 2):
            word, syns = parts
            cleaned = tuple(s.strip() for s in syns.split(",") if s.strip() and s.strip() != word)
            if cleaned:
                entries[word] = cleaned
        return cls(entries)


def _tsv_lines(path: str | Path, n_fields: int):
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != n_fields:
                raise ValueError(f"{path}:{line_no}: expected {n_fields} tab-separated fields")
            yield line_no, parts


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    entries: dict[str, np.ndarray]

    def vector(self, token: str) -> np.ndarray | None:
        return self.entries.get(token)

    def __len__(self) -> int:
        return len(self.entries)


def load_embeddings(
    path: str | Path, expected_dim: int | None = None
) -> tuple[EmbeddingTable, list[str]]:
    """Load a text-format vector table (token, space, floats).

    The table dimension is ``expected_dim`` or, failing that, the arity of
    the first parseable line; later lines with a different arity are skipped
    and reported with their line numbers.
    """
    dim = expected_dim
    entries: dict[str, np.ndarray] = {}
    errors: list[str] = []
    seen_vector = False
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip().split(" ")
            if len(parts) < 2:
                if line.strip():
                    errors.append(f"line {line_no}: no vector values")
                continue
            token, values = parts[0], parts[1:]
            try:
                vector = np.array([float(v) for v in values])
            except ValueError:
                errors.append(f"line {line_no}: non-numeric vector value")
                continue
            if dim is None:
                dim = len(vector)
            if len(vector) != dim:
                if expected_dim is not None and not seen_vector:
                    raise ValueError(
                        f"{path}: expected {expected_dim}-dim vectors, file has {len(vector)}"
                    )
                errors.append(f"line {line_no}: expected {dim} values, got {len(vector)}")
                continue
            seen_vector = True
            if not np.all(np.isfinite(vector)):
                errors.append(f"line {line_no}: non-finite vector value")
                continue
            entries[token] = vector
    if dim is None:
        raise ValueError(f"{path}: no vectors found")
    return EmbeddingTable(dim, entries), errors


def load_external_vectors(path: str | Path) -> tuple[dict[str, np.ndarray], list[str]]:
    """Load precomputed sentence vectors from JSON-lines ``{"id", "vec"}``."""
    vectors: dict[str, np.ndarray] = {}
    errors: list[str] = []
    dim = None
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                vec = np.asarray(obj["vec"], dtype=np.float64)
            except (ValueError, KeyError, TypeError):
                errors.append(f"line {line_no}: malformed vector record")
                continue
            if vec.ndim != 1 or not np.all(np.isfinite(vec)):
                errors.append(f"line {line_no}: vector must be 1-D and finite")
                continue
            if dim is None:
                dim = len(vec)
            if len(vec) != dim:
                errors.append(f"line {line_no}: expected {dim} values, got {len(vec)}")
                continue
            vectors[str(obj["id"])] = vec
    return vectors, errors


class NrcFeaturizer:
    """34-dim emotional features: mean ++ max over 17-dim token vectors.

    Per token: 10 emotion/sentiment flags, 4 affect intensities (0 when
    absent), 3 VAD values (0.5 neutral default when absent). Out-of-
    vocabulary tokens fall back to stemmed and synonym forms.
    """

    name = "nrc"
    dim = 34

    token_dim = 17
    _vad_slice = slice(14, 17)

    def __init__(
        self,
        emotion: EmotionLexicon,
        intensity: IntensityLexicon,
        vad: VadLexicon,
        synonyms: SynonymTable | None = None,
    ):
        self.emotion = emotion
        self.intensity = intensity
        self.vad = vad
        self.synonyms = synonyms

    def token_vector(self, token: str) -> np.ndarray:
        flags = lookup_with_fallback(token, self.emotion.vector, synonyms=self.synonyms)
        intensities = lookup_with_fallback(token, self.intensity.vector, synonyms=self.synonyms)
        vad = lookup_with_fallback(token, self.vad.vector, synonyms=self.synonyms)
        out = np.zeros(self.token_dim)
        if flags is not None:
            out[0:10] = flags
        if intensities is not None:
            out[10:14] = intensities
        out[self._vad_slice] = _VAD_NEUTRAL if vad is None else vad
        return out

    def vector_from_tokens(self, tokens: list[str]) -> np.ndarray:
        if not tokens:
            empty = np.zeros(self.dim)
            empty[self._vad_slice] = _VAD_NEUTRAL
            return empty
        per_token = np.stack([self.token_vector(t) for t in tokens])
        return np.concatenate([per_token.mean(axis=0), per_token.max(axis=0)])

    def featurize(self, text: str) -> FeatureVector:
        return FeatureVector(self.name, self.vector_from_tokens(tokenize(text)))

    def featurize_instance(self, instance: LabeledInstance) -> FeatureVector:
        return self.featurize(instance.text)

    def feature_labels(self) -> list[str]:
        per_token = list(EMOTIONS + SENTIMENTS)
        per_token += [f"intensity_{e}" for e in INTENSITY_EMOTIONS]
        per_token += ["valence", "arousal", "dominance"]
        return [f"mean_{n}" for n in per_token] + [f"max_{n}" for n in per_token]


class WordVecFeaturizer:
    """Mean of in-vocabulary token vectors; zero vector when nothing matches."""

    name = "wordvec"

    def __init__(self, table: EmbeddingTable):
        self.table = table
        self.dim = table.dim

    def vector_from_tokens(self, tokens: list[str]) -> np.ndarray:
        hits = [v for v in (self.table.vector(t) for t in tokens) if v is not None]
        if not hits:
            return np.zeros(self.dim)
        return np.stack(hits).mean(axis=0)

    def featurize(self, text: str) -> FeatureVector:
        return FeatureVector(self.name, self.vector_from_tokens(tokenize(text)))

    def featurize_instance(self, instance: LabeledInstance) -> FeatureVector:
        return self.featurize(instance.text)

    def feature_labels(self) -> list[str]:
        return [f"{self.name}_{i}" for i in range(self.dim)]


class ExternalFeaturizer:
    """Precomputed sentence vectors keyed by instance id (ingestion only)."""

    name = "external"

    def __init__(self, vectors: dict[str, np.ndarray]):
        if not vectors:
            raise ValueError("external vector table is empty")
        dims = {len(v) for v in vectors.values()}
        if len(dims) != 1:
            raise ValueError(f"inconsistent external vector dimensions: {sorted(dims)}")
        self.vectors = vectors
        self.dim = dims.pop()

    def vector_for_id(self, instance_id: str) -> np.ndarray:
        try:
            return self.vectors[instance_id]
        except KeyError:
            raise KeyError(f"no external vector for instance id {instance_id!r}") from None

    def featurize(self, text: str) -> FeatureVector:
        raise ValueError("external featurizer has no text encoder; vectors are looked up by instance id")

    def featurize_instance(self, instance: LabeledInstance) -> FeatureVector:
        return FeatureVector(self.name, self.vector_for_id(instance.instance_id))

    def feature_labels(self) -> list[str]:
        return [f"{self.name}_{i}" for i in range(self.dim)]
