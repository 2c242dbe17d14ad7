"""Back-translation augmentation and class rebalancing.

Rare-class training instances are round-tripped through pivot languages to
produce paraphrases that inherit the original label distribution, then the
instances leaning hardest on the most popular font are removed. Translation
goes through a pluggable provider so the test suite and offline runs never
need a network: the HTTP client is one implementation, deterministic mocks
are another.
"""

from __future__ import annotations

import json
import logging
import os
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import Protocol

from .corpus import LabeledInstance, average_distribution
from .features import tokenize

__all__ = [
    "TranslationProvider",
    "IdentityTranslator",
    "UppercaseTranslator",
    "RewordingTranslator",
    "HttpTranslator",
    "AugmentConfig",
    "back_translate",
    "rebalance",
    "make_provider",
]

logger = logging.getLogger(__name__)

MT_URL_ENV = "FONTSENSE_MT_URL"
MT_KEY_ENV = "FONTSENSE_MT_KEY"


class TranslationProvider(Protocol):
    provider_name: str

    def translate(self, text: str, source_lang: str, target_lang: str) -> str: ...


@dataclass(frozen=True)
class IdentityTranslator:
    """Round-trips every text unchanged; useful to isolate undersampling."""

    provider_name: str = "identity"

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        return text


@dataclass(frozen=True)
class UppercaseTranslator:
    """Changes case only; round-trips are dropped by tokenized comparison."""

    provider_name: str = "uppercase"

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        return text.upper() if target_lang == "en" else text


_DEFAULT_REWORDS: dict[str, dict[str, str]] = {
    "de": {"big": "large", "sale": "sale event", "happy": "joyful"},
    "fr": {"sale": "bargain", "grand": "great", "party": "celebration"},
    "es": {"opening": "launch", "new": "brand new", "love": "adore"},
    "ja": {"fun": "delight", "now": "today", "free": "gratis"},
}


@dataclass(frozen=True)
class RewordingTranslator:
    """Deterministic word-substitution mock, distinct per pivot language.

    The pivot pass is the identity; the return pass applies the pivot
    language's substitution table word by word.
    """

    rules: dict[str, dict[str, str]] = field(default_factory=lambda: _DEFAULT_REWORDS)
    provider_name: str = "mock"

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        if target_lang != "en":
            return text
        table = self.rules.get(source_lang, {})
        words = [table.get(w.lower(), w) for w in text.split()]
        return " ".join(words)


class HttpTranslator:
    """Thin JSON-over-HTTP client for an external translation service.

    Reads the endpoint and API key from FONTSENSE_MT_URL / FONTSENSE_MT_KEY.
    Requests: ``{"text", "source", "target"}``; responses: ``{"text"}``.
    At most 2 retries with exponential backoff; no retry storms.
    """

    provider_name = "http"

    def __init__(self, url: str | None = None, api_key: str | None = None, timeout: float = 10.0):
        self.url = url or os.environ.get(MT_URL_ENV, "")
        self.api_key = api_key or os.environ.get(MT_KEY_ENV, "")
        self.timeout = timeout
        if not self.url:
            raise ValueError(f"translation endpoint missing; set {MT_URL_ENV}")

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        body = json.dumps({"text": text, "source": source_lang, "target": target_lang})
        request = urllib.request.Request(
            self.url,
            data=body.encode("utf-8"),
            headers={"Content-Type": "application/json", "Authorization": f"Bearer {self.api_key}"},
            method="POST",
        )
        last_error: Exception | None = None
        for attempt in range(3):  # initial try + 2 retries
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as response:
                    payload = json.loads(response.read().decode("utf-8"))
                    return str(payload["text"])
            except (urllib.error.URLError, KeyError, ValueError) as exc:
                last_error = exc
                if attempt < 2:
                    time.sleep(0.5 * 2**attempt)
        raise RuntimeError(f"translation failed after retries: {last_error}")


def make_provider(name: str) -> TranslationProvider:
    if name == "mock":
        return RewordingTranslator()
    if name == "identity":
        return IdentityTranslator()
    if name == "http":
        return HttpTranslator()
    raise ValueError(f"unknown provider {name!r} (expected mock, identity, or http)")


@dataclass(frozen=True)
class AugmentConfig:
    pivot_langs: tuple[str, ...] = ("de", "fr", "es", "ja")
    rarity_threshold: float = 0.25
    oversample_cap: int = 170
    undersample_count: int = 50

    def __post_init__(self) -> None:
        if not self.pivot_langs:
            raise ValueError("at least one pivot language is required")
        if self.oversample_cap < 0 or self.undersample_count < 0:
            raise ValueError("counts must be >= 0")


def back_translate(
    instance: LabeledInstance,
    provider: TranslationProvider,
    langs: tuple[str, ...],
) -> list[LabeledInstance]:
    """Round-trip the text through each pivot language.

    Results whose tokenized form matches the original are dropped; survivors
    copy the original target distribution with ids suffixed ``-bt-<lang>``.
    A provider failure for one language is logged and skipped.
    """
    original_tokens = tokenize(instance.text)
    out: list[LabeledInstance] = []
    for lang in langs:
        try:
            pivot = provider.translate(instance.text, "en", lang)
            round_trip = provider.translate(pivot, lang, "en")
        except Exception as exc:
            logger.warning("back-translation of %s via %s failed: %s", instance.instance_id, lang, exc)
            continue
        if tokenize(round_trip) == original_tokens:
            continue
        out.append(
            LabeledInstance(f"{instance.instance_id}-bt-{lang}", round_trip, instance.target)
        )
    return out


def rebalance(
    train: list[LabeledInstance],
    config: AugmentConfig,
    provider: TranslationProvider,
) -> list[LabeledInstance]:
    """Oversample rare-font instances by back-translation, then undersample.

    An instance's rarity score is its target mass on the ``|F| // 3`` least
    popular fonts (popularity = the training set's average distribution).
    Instances scoring strictly above ``rarity_threshold`` are back-translated
    (most rare first) until ``oversample_cap`` new instances exist or the
    candidates are exhausted. Afterwards the ``undersample_count`` original
    instances with the highest mass on the single most popular font are
    removed. Counts exceeding availability are clamped with a warning.
    """
    if not train:
        raise ValueError("training set is empty")
    popularity = average_distribution(train).probs
    n_fonts = len(popularity)
    n_rare = max(1, n_fonts // 3)
    rare_fonts = _least_popular(popularity, n_rare)
    top_font = int(max(range(n_fonts), key=lambda f: (popularity[f], -f)))

    def rarity(inst: LabeledInstance) -> float:
        return float(sum(inst.target.probs[f] for f in rare_fonts))

    candidates = sorted(
        (inst for inst in train if rarity(inst) > config.rarity_threshold),
        key=lambda inst: (-rarity(inst), inst.instance_id),
    )
    added: list[LabeledInstance] = []
    for candidate in candidates:
        if len(added) >= config.oversample_cap:
            break
        room = config.oversample_cap - len(added)
        added.extend(back_translate(candidate, provider, config.pivot_langs)[:room])
    if len(added) < config.oversample_cap and candidates:
        logger.warning(
            "oversample cap %d not reached: only %d distinct round-trips available",
            config.oversample_cap,
            len(added),
        )

    n_remove = config.undersample_count
    if n_remove > len(train):
        logger.warning("undersample count %d exceeds training size %d; clamping", n_remove, len(train))
        n_remove = len(train)
    by_top_mass = sorted(train, key=lambda inst: (-float(inst.target.probs[top_font]), inst.instance_id))
    removed_ids = {inst.instance_id for inst in by_top_mass[:n_remove]}

    kept = [inst for inst in train if inst.instance_id not in removed_ids]
    return kept + added


def _least_popular(popularity, n_rare: int) -> list[int]:
    # stable ascending sort keeps removal/oversampling deterministic on ties
    order = sorted(range(len(popularity)), key=lambda f: (popularity[f], f))
    return order[:n_rare]
