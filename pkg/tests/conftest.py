"""Shared fixtures: tiny demo checkpoints and small synthetic corpora.

Everything is provisioned once per session into a shared temp directory;
nothing touches the network.
"""

from __future__ import annotations

import pytest

from picoscreen import synthdata
from picoscreen.corpus import Split, load_entity_corpus, load_sentence_corpus
from picoscreen.encoders import EncoderHandle


@pytest.fixture(scope="session")
def demo_cache(tmp_path_factory):
    """Encoder cache with tiny-base (random), tiny-sci (tuned), tiny-multi."""
    cache = tmp_path_factory.mktemp("encoder-cache")
    synthdata.build_random_checkpoint(cache, "tiny-base", seed=13)
    synthdata.build_random_checkpoint(cache, "tiny-multi", seed=14, cased=True)
    synthdata.build_tuned_checkpoint(cache, "tiny-sci", base="tiny-base", workdir=cache)
    synthdata.write_roles(
        cache,
        {"base-uncased": "tiny-base", "scientific": "tiny-sci", "multilingual-cased": "tiny-multi"},
    )
    return cache


@pytest.fixture(scope="session")
def base_encoder(demo_cache):
    return EncoderHandle.load("tiny-base", demo_cache)


@pytest.fixture(scope="session")
def sci_encoder(demo_cache):
    return EncoderHandle.load("tiny-sci", demo_cache)


@pytest.fixture(scope="session")
def small_corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpora") / "sentences.tsv"
    synthdata.generate_sentence_corpus(path, n_abstracts=400, seed=101)
    return path


@pytest.fixture(scope="session")
def small_corpus(small_corpus_file):
    return load_sentence_corpus(small_corpus_file)


@pytest.fixture(scope="session")
def small_entity_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpora") / "entity"
    synthdata.generate_entity_corpus(root, n_train=60, n_test=30, seed=102)
    return root


@pytest.fixture(scope="session")
def small_entity_corpus(small_entity_dir):
    return load_entity_corpus(small_entity_dir)


@pytest.fixture(scope="session")
def augmentation_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpora") / "augmentation.json"
    synthdata.generate_augmentation_squad(path, n_domains=442, seed=103)
    return path


@pytest.fixture(scope="session")
def quick_classifier(sci_encoder, small_corpus):
    """A small but genuinely trained classifier for service-level tests."""
    from picoscreen.classifier import TrainingConfig, train

    pairs = [
        (s, set(s.gold_labels))
        for a in small_corpus[:150]
        for s in a.sentences
    ]
    config = TrainingConfig(epochs=1, seed=7, learning_rate=5e-4)
    return train(pairs, config, sci_encoder)


@pytest.fixture(scope="session")
def quick_qa_model(sci_encoder, small_entity_corpus, augmentation_file):
    """A small trained P-span extractor for service and QA tests."""
    from picoscreen.labels import ClassLabel
    from picoscreen.qa import QATrainingConfig, train_qa
    from picoscreen.squadgen import (ConvertMode, QuestionTemplateSet, convert_corpus,
                                     load_squad, mix_augmentation)

    train_docs = [d for d in small_entity_corpus if d.split is Split.TRAIN]
    templates = QuestionTemplateSet.default(seed=5)
    ds = convert_corpus(train_docs, ClassLabel.P, templates, ConvertMode.TRAIN)
    ds = mix_augmentation(ds, load_squad(augmentation_file), 5, seed=6)
    config = QATrainingConfig(epochs=2, seed=7, learning_rate=5e-4)
    return train_qa(ds, config, sci_encoder, trained_class="P", augmentation_domains=5)
