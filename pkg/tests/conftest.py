import numpy as np
import pytest

from fontsense.corpus import LabelDistribution, LabeledInstance
from fontsense.features import (
    EmotionLexicon,
    IntensityLexicon,
    NrcFeaturizer,
    SynonymTable,
    VadLexicon,
)
from fontsense.synthetic import write_lexicon_files


def dist(values) -> LabelDistribution:
    values = np.asarray(values, dtype=np.float64)
    return LabelDistribution(values / values.sum())


def linst(instance_id: str, text: str, values) -> LabeledInstance:
    return LabeledInstance(instance_id, text, dist(values))


@pytest.fixture(scope="session")
def lexicon_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("lexicons")
    write_lexicon_files(directory)
    return directory


@pytest.fixture(scope="session")
def nrc(lexicon_dir):
    return NrcFeaturizer(
        EmotionLexicon.load(lexicon_dir / "emotion.tsv"),
        IntensityLexicon.load(lexicon_dir / "intensity.tsv"),
        VadLexicon.load(lexicon_dir / "vad.tsv"),
        SynonymTable.load(lexicon_dir / "synonyms.tsv"),
    )
