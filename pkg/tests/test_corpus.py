import logging

import pytest

from picoscreen.corpus import (EntityAnnotation, Sentence, Split, coalesce_runs, count_sentences,
                               expand_runs, filter_pio_complete, load_entity_corpus,
                               load_sentence_corpus, split_train_test)
from picoscreen.errors import CorpusFormatError, ValidationError
from picoscreen.labels import ClassLabel, SubClass
from picoscreen.segmentation import SENTENCE_SEPARATOR


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadSentenceCorpus:
    def test_single_record(self, tmp_path):
        path = write(tmp_path / "c.tsv", "X\tA\tOur aim was to evaluate aspirin.\n")
        abstracts = load_sentence_corpus(path)
        assert len(abstracts) == 1
        ab = abstracts[0]
        assert ab.id == "X"
        assert len(ab.sentences) == 1
        assert ab.sentences[0].text == "Our aim was to evaluate aspirin."
        assert ab.sentences[0].gold_labels == frozenset({ClassLabel.A})
        assert ab.sentences[0].char_start == 0

    def test_empty_file(self, tmp_path):
        assert load_sentence_corpus(write(tmp_path / "c.tsv", "")) == []

    def test_blank_line_and_contiguous_grouping_agree(self, tmp_path):
        with_blank = "A\tP\tSome patients.\nA\tI\tSome drug.\n\nB\tO\tSome outcome.\n"
        without_blank = "A\tP\tSome patients.\nA\tI\tSome drug.\nB\tO\tSome outcome.\n"
        first = load_sentence_corpus(write(tmp_path / "a.tsv", with_blank))
        second = load_sentence_corpus(write(tmp_path / "b.tsv", without_blank))
        assert [(a.id, [s.text for s in a.sentences]) for a in first] == [
            (a.id, [s.text for s in a.sentences]) for a in second
        ]

    def test_malformed_record_carries_line_number(self, tmp_path):
        path = write(tmp_path / "c.tsv", "X\tA\tfine sentence.\nX\tbroken-line\n")
        with pytest.raises(CorpusFormatError) as err:
            load_sentence_corpus(path)
        assert err.value.line == 2

    def test_unknown_label_rejected(self, tmp_path):
        path = write(tmp_path / "c.tsv", "X\tZ\tthis label does not exist.\n")
        with pytest.raises(ValidationError, match="unknown class label"):
            load_sentence_corpus(path)

    def test_non_contiguous_id_rejected(self, tmp_path):
        path = write(tmp_path / "c.tsv", "X\tA\tone.\nY\tA\ttwo.\nX\tA\tthree.\n")
        with pytest.raises(CorpusFormatError, match="non-contiguous"):
            load_sentence_corpus(path)

    def test_empty_sentence_dropped_with_warning(self, tmp_path, caplog):
        path = write(tmp_path / "c.tsv", "X\tA\t   \nX\tP\tSixty patients.\n")
        with caplog.at_level(logging.WARNING):
            abstracts = load_sentence_corpus(path)
        assert len(abstracts[0].sentences) == 1
        assert any("empty sentence" in r.message for r in caplog.records)

    def test_abstract_with_no_usable_sentences_dropped(self, tmp_path, caplog):
        path = write(tmp_path / "c.tsv", "X\tA\t \n\nY\tA\tkept.\n")
        with caplog.at_level(logging.WARNING):
            abstracts = load_sentence_corpus(path)
        assert [a.id for a in abstracts] == ["Y"]

    def test_offsets_reconstruct_text(self, small_corpus):
        for ab in small_corpus[:50]:
            text = ab.text
            for s in ab.sentences:
                assert text[s.char_start : s.char_start + len(s.text)] == s.text
            assert SENTENCE_SEPARATOR.join(s.text for s in ab.sentences) == text


class TestFilterPioComplete:
    def _abstract(self, tmp_path, labels, name="A"):
        lines = "".join(f"{name}\t{l}\tsentence {i} text.\n" for i, l in enumerate(labels))
        return load_sentence_corpus(write(tmp_path / f"{name}.tsv", lines))

    def test_keeps_complete(self, tmp_path):
        abstracts = self._abstract(tmp_path, ["P", "I", "O", "C"])
        assert filter_pio_complete(abstracts) == abstracts

    def test_drops_amrc_only(self, tmp_path):
        abstracts = self._abstract(tmp_path, ["A", "M", "R", "C"])
        assert filter_pio_complete(abstracts) == []

    def test_drops_missing_o(self, tmp_path):
        abstracts = self._abstract(tmp_path, ["P", "I", "A"])
        assert filter_pio_complete(abstracts) == []

    def test_idempotent(self, small_corpus):
        once = filter_pio_complete(small_corpus)
        assert filter_pio_complete(once) == once


class TestSplitTrainTest:
    def test_deterministic(self, small_corpus):
        a = split_train_test(small_corpus, 0.9, seed=3)
        b = split_train_test(small_corpus, 0.9, seed=3)
        assert [x.id for x in a[0]] == [x.id for x in b[0]]
        assert [x.id for x in a[1]] == [x.id for x in b[1]]

    def test_partition(self, small_corpus):
        train, test = split_train_test(small_corpus, 0.9, seed=3)
        train_ids = {a.id for a in train}
        test_ids = {a.id for a in test}
        assert not train_ids & test_ids
        assert train_ids | test_ids == {a.id for a in small_corpus}

    def test_rounding(self, small_corpus):
        train, test = split_train_test(small_corpus[:10], 0.9, seed=0)
        assert (len(train), len(test)) == (9, 1)

    def test_ratio_validated(self, small_corpus):
        for ratio in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValidationError):
                split_train_test(small_corpus, ratio, seed=0)

    def test_sentence_counts_approximate_ratio(self, small_corpus):
        train, test = split_train_test(small_corpus, 0.9, seed=3)
        frac = count_sentences(train) / count_sentences(small_corpus)
        assert 0.85 <= frac <= 0.95


class TestEntityCorpus:
    def test_counts_and_splits(self, small_entity_corpus):
        train = [d for d in small_entity_corpus if d.split is Split.TRAIN]
        test = [d for d in small_entity_corpus if d.split is Split.EXPERT_TEST]
        assert len(train) == 60
        assert len(test) == 30

    def test_run_coalescing(self):
        assert coalesce_runs([0, 1, 1, 0]) == [(1, 3, 1)]
        assert coalesce_runs([1, 1, 2, 2, 0, 1]) == [(0, 2, 1), (2, 4, 2), (5, 6, 1)]
        assert coalesce_runs([0, 0]) == []

    def test_annotation_roundtrip(self, small_entity_corpus):
        # decoding coalesced annotations back to per-token labels must
        # reproduce the source sequence for every class stream
        for doc in small_entity_corpus:
            for cls in (ClassLabel.P, ClassLabel.I, ClassLabel.O):
                plain = [a for a in doc.annotations if a.pio_class is cls and a.subclass is None]
                runs = [(a.token_start, a.token_end, 1) for a in plain]
                decoded = expand_runs(runs, len(doc.tokens))
                assert coalesce_runs(decoded) == sorted(runs)

    def test_no_overlap_within_stream(self, small_entity_corpus):
        for doc in small_entity_corpus:
            for key in {(a.pio_class, a.subclass is None) for a in doc.annotations}:
                ranges = sorted(
                    (a.token_start, a.token_end)
                    for a in doc.annotations
                    if (a.pio_class, a.subclass is None) == key
                )
                for (s1, e1), (s2, e2) in zip(ranges, ranges[1:]):
                    assert e1 <= s2

    def test_length_mismatch_names_abstract(self, tmp_path):
        root = tmp_path / "ent"
        (root / "documents").mkdir(parents=True)
        (root / "annotations" / "participants" / "train").mkdir(parents=True)
        (root / "documents" / "doc1.tokens").write_text("a\nb\nc\n", encoding="utf-8")
        (root / "annotations" / "participants" / "train" / "doc1.ann").write_text(
            "0,1", encoding="utf-8"
        )
        with pytest.raises(ValidationError, match="doc1"):
            load_entity_corpus(root)

    def test_subclass_only_on_p(self):
        with pytest.raises(ValidationError):
            EntityAnnotation(ClassLabel.I, 0, 1, subclass=SubClass.AGE)

    def test_bad_range_rejected(self):
        with pytest.raises(ValidationError):
            EntityAnnotation(ClassLabel.P, 3, 3)


class TestSentenceType:
    def test_empty_text_rejected(self):
        with pytest.raises(ValidationError):
            Sentence(text="   ", char_start=0, gold_labels=frozenset({ClassLabel.A}))

    def test_empty_labels_rejected(self):
        with pytest.raises(ValidationError):
            Sentence(text="x.", char_start=0, gold_labels=frozenset())
