import json
import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from picoscreen.corpus import EntityAnnotation, Split, TokenizedAbstract
from picoscreen.errors import ValidationError
from picoscreen.labels import ClassLabel, SubClass
from picoscreen.squadgen import (ConvertMode, QuestionTemplateSet, convert_abstract,
                                 convert_corpus, detokenize_with_map, from_json_dict, load_squad,
                                 mix_augmentation, possible_fraction, save_squad, to_json_dict,
                                 validate_squad)

TEMPLATES = QuestionTemplateSet.default(seed=11)


def make_abstract(tokens, annotations, id="abs1", split=Split.TRAIN):
    return TokenizedAbstract(id=id, tokens=tokens, annotations=annotations, split=split)


class TestDetokenize:
    def test_simple_sentence(self):
        text, offsets = detokenize_with_map(["Aspirin", "works", "."])
        assert text == "Aspirin works."
        assert offsets == [(0, 7), (8, 13), (13, 14)]

    def test_single_token(self):
        assert detokenize_with_map(["x"]) == ("x", [(0, 1)])

    def test_punctuation_grouping(self):
        text, offsets = detokenize_with_map(["(", "n", "=", "60", ")"])
        assert text == "(n=60)"
        for tok, (s, e) in zip(["(", "n", "=", "60", ")"], offsets):
            assert text[s:e] == tok

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            detokenize_with_map([])

    @given(st.lists(st.sampled_from(
        ["Aspirin", "60", "patients", "(", ")", "[", "]", ".", ",", "=", "/", "-", "mg", "?!ok"]
    ), min_size=1, max_size=12))
    def test_offsets_always_slice_back(self, tokens):
        text, offsets = detokenize_with_map(tokens)
        assert len(offsets) == len(tokens)
        for tok, (s, e) in zip(tokens, offsets):
            assert text[s:e] == tok


class TestTemplates:
    def test_missing_class_rejected(self):
        with pytest.raises(ValidationError):
            QuestionTemplateSet(templates={"P": ["q?"], "I": ["q?"]})

    def test_empty_template_rejected(self):
        with pytest.raises(ValidationError):
            QuestionTemplateSet(templates={"P": ["q?"], "I": [" "], "O": ["q?"]})

    def test_file_roundtrip(self, tmp_path):
        path = tmp_path / "templates.json"
        path.write_text(json.dumps({"P": ["pq?"], "I": ["iq?"], "O": ["oq?"], "seed": 9}))
        ts = QuestionTemplateSet.from_file(path)
        assert ts.rng_seed == 9
        assert ts.pool_for(ClassLabel.P) == ["pq?"]

    def test_subclass_pool_falls_back(self):
        ts = QuestionTemplateSet(
            templates={"P": ["pq?"], "I": ["iq?"], "O": ["oq?"], "P.AGE": ["age?"]}
        )
        assert ts.pool_for(ClassLabel.P, SubClass.AGE) == ["age?"]
        assert ts.pool_for(ClassLabel.P, SubClass.GENDER) == ["pq?"]


class TestConvertAbstract:
    def test_possible_answer_text_matches_span(self):
        tokens = ["Patients", "received", "auditory", "integrative", "training", "."]
        ab = make_abstract(tokens, [EntityAnnotation(ClassLabel.I, 2, 5)])
        paragraphs = convert_abstract(ab, ClassLabel.I, TEMPLATES, ConvertMode.TRAIN)
        assert len(paragraphs) == 1
        qa = paragraphs[0].qas[0]
        assert not qa.is_impossible
        assert qa.answers[0].text == "auditory integrative training"
        ctx = paragraphs[0].context
        a = qa.answers[0]
        assert ctx[a.answer_start : a.answer_start + len(a.text)] == a.text

    def test_no_span_yields_impossible_at_zero(self):
        tokens = ["Nothing", "relevant", "here", "."]
        ab = make_abstract(tokens, [])
        (p,) = convert_abstract(ab, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        qa = p.qas[0]
        assert qa.is_impossible
        assert qa.answers == []
        assert qa.plausible_answers[0].answer_start == 0
        assert p.context.startswith(qa.plausible_answers[0].text)

    def test_one_paragraph_per_sentence(self):
        tokens = ["One", ".", "Two", ".", "Three", "."]
        ab = make_abstract(tokens, [])
        assert len(convert_abstract(ab, ClassLabel.O, TEMPLATES, ConvertMode.TRAIN)) == 3

    def test_train_mode_keeps_first_span_only(self):
        tokens = ["aspirin", "or", "placebo", "was", "given", "."]
        anns = [EntityAnnotation(ClassLabel.I, 0, 1), EntityAnnotation(ClassLabel.I, 2, 3)]
        ab = make_abstract(tokens, anns)
        (p,) = convert_abstract(ab, ClassLabel.I, TEMPLATES, ConvertMode.TRAIN)
        assert [a.text for a in p.qas[0].answers] == ["aspirin"]

    def test_test_mode_keeps_all_spans(self):
        tokens = ["aspirin", "or", "placebo", "was", "given", "."]
        anns = [EntityAnnotation(ClassLabel.I, 0, 1), EntityAnnotation(ClassLabel.I, 2, 3)]
        ab = make_abstract(tokens, anns)
        (p,) = convert_abstract(ab, ClassLabel.I, TEMPLATES, ConvertMode.TEST)
        assert [a.text for a in p.qas[0].answers] == ["aspirin", "placebo"]

    def test_span_crossing_boundary_clipped_with_warning(self, caplog):
        tokens = ["Sixty", "patients", ".", "They", "improved", "."]
        ab = make_abstract(tokens, [EntityAnnotation(ClassLabel.P, 1, 4)])
        with caplog.at_level(logging.WARNING):
            paragraphs = convert_abstract(ab, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        assert any("clipped" in r.message for r in caplog.records)
        first, second = paragraphs
        assert [a.text for a in first.qas[0].answers] == ["patients."]
        assert [a.text for a in second.qas[0].answers] == ["They"]

    def test_questions_deterministic_per_abstract(self):
        tokens = ["Sixty", "patients", "."] * 4
        ab = make_abstract(tokens, [])
        first = convert_abstract(ab, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        second = convert_abstract(ab, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        assert [p.qas[0].question for p in first] == [p.qas[0].question for p in second]

    def test_subclass_filter(self):
        tokens = ["60", "women", "aged", "18", "-", "65", "years", "with", "asthma", "."]
        anns = [
            EntityAnnotation(ClassLabel.P, 0, 9),
            EntityAnnotation(ClassLabel.P, 2, 7, subclass=SubClass.AGE),
            EntityAnnotation(ClassLabel.P, 1, 2, subclass=SubClass.GENDER),
        ]
        ab = make_abstract(tokens, anns)
        (p_plain,) = convert_abstract(ab, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        assert p_plain.qas[0].answers[0].text == "60 women aged 18-65 years with asthma"
        (p_age,) = convert_abstract(
            ab, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN, subclass_filter={SubClass.AGE}
        )
        assert p_age.qas[0].answers[0].text == "aged 18-65 years"

    def test_non_pio_class_rejected(self):
        ab = make_abstract(["x", "."], [])
        with pytest.raises(ValidationError):
            convert_abstract(ab, ClassLabel.A, TEMPLATES, ConvertMode.TRAIN)


class TestConvertCorpus:
    def test_coverage_counts(self, small_entity_corpus):
        for cls in (ClassLabel.P, ClassLabel.I, ClassLabel.O):
            ds = convert_corpus(small_entity_corpus, cls, TEMPLATES, ConvertMode.TRAIN)
            n_possible = sum(1 for _, qa in ds.qa_items() if not qa.is_impossible)
            n_total = ds.n_questions()

            from picoscreen.segmentation import split_token_stream

            expected_possible = 0
            expected_total = 0
            for doc in small_entity_corpus:
                for ts, te in split_token_stream(doc.tokens):
                    expected_total += 1
                    if any(
                        a.pio_class is cls and a.subclass is None
                        and a.token_start < te and a.token_end > ts
                        for a in doc.annotations
                    ):
                        expected_possible += 1
            assert n_total == expected_total
            assert n_possible == expected_possible

    def test_split_selection(self, small_entity_corpus):
        ds = convert_corpus(
            small_entity_corpus, ClassLabel.P, TEMPLATES, ConvertMode.TEST, split=Split.EXPERT_TEST
        )
        assert len(ds.domains) == 30

    def test_validates_clean(self, small_entity_corpus):
        ds = convert_corpus(small_entity_corpus, ClassLabel.I, TEMPLATES, ConvertMode.TRAIN)
        assert validate_squad(ds).ok


class TestMixAugmentation:
    def test_identity_at_zero(self, small_entity_corpus, augmentation_file):
        ds = convert_corpus(small_entity_corpus, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        src = load_squad(augmentation_file)
        mixed = mix_augmentation(ds, src, 0, seed=1)
        assert sorted(d.title for d in mixed.domains) == sorted(d.title for d in ds.domains)

    def test_deterministic_serialization(self, small_entity_corpus, augmentation_file, tmp_path):
        ds = convert_corpus(small_entity_corpus, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        src = load_squad(augmentation_file)
        for i in (1, 2):
            save_squad(mix_augmentation(ds, src, 25, seed=9), tmp_path / f"m{i}.json")
        assert (tmp_path / "m1.json").read_bytes() == (tmp_path / "m2.json").read_bytes()

    def test_too_many_domains_rejected(self, small_entity_corpus, augmentation_file):
        ds = convert_corpus(small_entity_corpus, ClassLabel.P, TEMPLATES, ConvertMode.TRAIN)
        src = load_squad(augmentation_file)
        with pytest.raises(ValidationError):
            mix_augmentation(ds, src, len(src.domains) + 1, seed=1)

    def test_converted_ids_preserved(self, small_entity_corpus, augmentation_file):
        ds = convert_corpus(small_entity_corpus, ClassLabel.O, TEMPLATES, ConvertMode.TRAIN)
        src = load_squad(augmentation_file)
        mixed = mix_augmentation(ds, src, 40, seed=2)
        original = sorted(qa.id for _, qa in ds.qa_items())
        mixed_ids = sorted(qa.id for _, qa in mixed.qa_items())
        assert set(original) <= set(mixed_ids)
        assert len(mixed_ids) == len(set(mixed_ids))

    def test_two_hundred_of_442_domains(self, small_entity_corpus, augmentation_file):
        # the heaviest augmentation configuration used in training runs
        ds = convert_corpus(small_entity_corpus, ClassLabel.I, TEMPLATES, ConvertMode.TRAIN)
        src = load_squad(augmentation_file)
        assert len(src.domains) == 442
        mixed = mix_augmentation(ds, src, 200, seed=7)
        assert len(mixed.domains) == len(ds.domains) + 200
        assert validate_squad(mixed).ok


class TestValidateSquad:
    def test_detects_broken_answer_start(self, small_entity_corpus):
        ds = convert_corpus(small_entity_corpus, ClassLabel.I, TEMPLATES, ConvertMode.TRAIN)
        for p, qa in ds.qa_items():
            if not qa.is_impossible:
                qa.answers[0].answer_start += 1
                break
        report = validate_squad(ds)
        assert [v.kind for v in report.violations] == ["substring-mismatch"]

    def test_detects_duplicate_id(self, small_entity_corpus):
        ds = convert_corpus(small_entity_corpus, ClassLabel.I, TEMPLATES, ConvertMode.TRAIN)
        items = [qa for _, qa in ds.qa_items()]
        items[1].id = items[0].id
        report = validate_squad(ds)
        assert any(v.kind == "duplicate-id" for v in report.violations)

    def test_detects_empty_context_and_misplaced_plausible(self):
        payload = {
            "version": "v2.0",
            "data": [{
                "title": "t",
                "paragraphs": [{
                    "context": "",
                    "qas": [{
                        "id": "q1", "question": "?", "answers": [],
                        "is_impossible": True,
                        "plausible_answers": [{"text": "x", "answer_start": 4}],
                    }],
                }],
            }],
        }
        report = validate_squad(from_json_dict(payload))
        kinds = {v.kind for v in report.violations}
        assert "empty-context" in kinds
        assert "plausible-start" in kinds


class TestSerialization:
    def test_roundtrip(self, small_entity_corpus, tmp_path):
        ds = convert_corpus(small_entity_corpus, ClassLabel.P, TEMPLATES, ConvertMode.TEST)
        path = tmp_path / "ds.json"
        save_squad(ds, path)
        loaded = load_squad(path)
        assert to_json_dict(loaded) == to_json_dict(ds)
        payload = json.loads(path.read_text())
        assert payload["version"] == "v2.0"
        item = payload["data"][0]["paragraphs"][0]["qas"][0]
        assert {"id", "question", "answers", "is_impossible"} <= set(item)

    def test_possible_fraction(self, small_entity_corpus):
        ds = convert_corpus(
            small_entity_corpus, ClassLabel.O, TEMPLATES, ConvertMode.TEST, split=Split.EXPERT_TEST
        )
        assert 0.5 <= possible_fraction(ds) <= 0.7
