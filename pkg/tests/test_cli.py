import csv
import json

import pytest

from picoscreen.cli import dispatch


@pytest.fixture(scope="module")
def classifier_dir(quick_classifier, tmp_path_factory):
    return str(quick_classifier.save(tmp_path_factory.mktemp("models") / "clf"))


@pytest.fixture(scope="module")
def qa_dir(quick_qa_model, tmp_path_factory):
    return str(quick_qa_model.save(tmp_path_factory.mktemp("models") / "qa"))


class TestDispatchBasics:
    def test_no_args_prints_usage_and_exits_2(self, capsys):
        assert dispatch([]) == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            dispatch(["frobnicate"])
        assert exc.value.code == 2

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            dispatch(["ingest", "--bogus-flag"])
        assert exc.value.code == 2

    def test_runtime_failure_exits_1(self, capsys, tmp_path):
        assert dispatch(["ingest", "--corpus", str(tmp_path / "missing.tsv")]) == 1
        assert "error" in capsys.readouterr().err


class TestDemoAndIngest:
    def test_make_demo_data(self, tmp_path, capsys):
        rc = dispatch([
            "make-demo-data", "--out", str(tmp_path / "demo"),
            "--sentence-abstracts", "30", "--entity-train", "8", "--entity-test", "4",
            "--squad-domains", "10", "--no-tuned",
        ])
        assert rc == 0
        assert (tmp_path / "demo" / "sentence_corpus.tsv").exists()
        assert (tmp_path / "demo" / "entity_corpus" / "documents").is_dir()
        assert (tmp_path / "demo" / "encoders" / "roles.json").exists()

    def test_ingest_stats_and_split(self, small_corpus_file, tmp_path, capsys):
        rc = dispatch([
            "ingest", "--corpus", str(small_corpus_file), "--filter-pio",
            "--split", "0.9", "--seed", "5",
            "--out-train", str(tmp_path / "train.tsv"),
            "--out-test", str(tmp_path / "test.tsv"),
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "abstracts\t400" in out
        assert "train_abstracts" in out
        assert (tmp_path / "train.tsv").exists()


class TestConvertCli:
    def test_convert_with_augmentation(self, small_entity_dir, augmentation_file, tmp_path, capsys):
        out = tmp_path / "p_train.json"
        rc = dispatch([
            "convert", "--entity-dir", str(small_entity_dir), "--class", "P",
            "--mode", "train", "--squad-file", str(augmentation_file),
            "--squad-domains", "7", "--seed", "3", "--out", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["version"] == "v2.0"
        assert len(payload["data"]) == 60 + 7

    def test_convert_subclasses(self, small_entity_dir, tmp_path):
        out = tmp_path / "p_age.json"
        rc = dispatch([
            "convert", "--entity-dir", str(small_entity_dir), "--class", "P",
            "--mode", "test", "--subclasses", "AGE,GENDER,CONDITION,SIZE",
            "--out", str(out),
        ])
        assert rc == 0
        assert json.loads(out.read_text())["data"]


class TestSentencePipelineCli:
    def test_train_predict_eval_sweep(self, demo_cache, tmp_path, capsys):
        corpus = tmp_path / "corpus.tsv"
        from picoscreen.synthdata import generate_sentence_corpus

        generate_sentence_corpus(corpus, n_abstracts=40, seed=21)
        model_dir = tmp_path / "model"
        rc = dispatch([
            "train-sentences", "--encoder", "tiny-sci", "--cache", str(demo_cache),
            "--corpus", str(corpus), "--epochs", "1", "--seed", "3",
            "--out", str(model_dir),
        ])
        assert rc == 0
        assert (model_dir / "run_manifest.json").exists()

        probs = tmp_path / "probs.tsv"
        gold = tmp_path / "gold.txt"
        rc = dispatch([
            "predict-sentences", "--model", str(model_dir), "--corpus", str(corpus),
            "--out", str(probs), "--gold-out", str(gold),
        ])
        assert rc == 0
        assert probs.read_text().startswith("sentence\tP\tI\tO\tA\tM\tR\tC")

        rc = dispatch(["eval-sentences", "--model", str(model_dir), "--corpus", str(corpus),
                       "--out-tsv", str(tmp_path / "eval.tsv")])
        assert rc == 0
        assert "class\tprecision" in capsys.readouterr().out

        out_csv = tmp_path / "sweep.csv"
        rc = dispatch(["sweep", "--probs", str(probs), "--gold", str(gold),
                       "--out-csv", str(out_csv)])
        assert rc == 0
        with out_csv.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["threshold", "class", "precision", "recall", "f1"]
        assert len(rows) == 1 + 50 * 7
        assert out_csv.with_suffix(".png").exists()  # figure lands next to the CSV
        assert out_csv.with_suffix(".manifest.json").exists()


class TestQaCli:
    def test_answer_command(self, qa_dir, capsys):
        rc = dispatch([
            "answer", "--model", qa_dir,
            "--question", "Which population was studied?",
            "--context", "A total of 60 patients with asthma were enrolled.",
        ])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert {"text", "is_no_answer", "span_score"} <= set(payload)

    def test_predict_and_eval_qa(self, qa_dir, small_entity_dir, tmp_path, capsys):
        test_json = tmp_path / "p_test.json"
        assert dispatch([
            "convert", "--entity-dir", str(small_entity_dir), "--class", "P",
            "--mode", "test", "--out", str(test_json),
        ]) == 0
        pred_json = tmp_path / "preds.json"
        assert dispatch([
            "predict-qa", "--model", qa_dir, "--in", str(test_json),
            "--out", str(pred_json),
        ]) == 0
        capsys.readouterr()
        rc = dispatch([
            "eval-qa", "--pred", str(pred_json), "--test", str(test_json),
            "--class", "P", "--out-json", str(tmp_path / "eval.json"),
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "overall_f1" in out
        assert "f1_impossible" in out
        report = json.loads((tmp_path / "eval.json").read_text())
        assert report["class"] == "P"

    def test_train_qa_cli(self, demo_cache, small_entity_dir, augmentation_file, tmp_path):
        data = tmp_path / "train.json"
        assert dispatch([
            "convert", "--entity-dir", str(small_entity_dir), "--class", "I",
            "--mode", "train", "--out", str(data),
        ]) == 0
        model_dir = tmp_path / "qa-i"
        rc = dispatch([
            "train-qa", "--encoder", "tiny-sci", "--cache", str(demo_cache),
            "--data", str(data), "--class", "I", "--squad-file", str(augmentation_file),
            "--squad-domains", "3", "--epochs", "1", "--seed", "4",
            "--out", str(model_dir),
        ])
        assert rc == 0
        manifest = json.loads((model_dir / "run_manifest.json").read_text())
        assert manifest["command"] == "train-qa"
        model_meta = json.loads((model_dir / "model.json").read_text())
        assert model_meta["trained_class"] == "I"
        assert model_meta["metadata"]["augmentation_domains"] == 3


class TestEmbedStudyCli:
    def test_embed_study_outputs(self, demo_cache, small_corpus_file, tmp_path, capsys):
        out_dir = tmp_path / "study"
        rc = dispatch([
            "embed-study", "--encoder", "tiny-base", "--cache", str(demo_cache),
            "--corpus", str(small_corpus_file), "--layers", "1;1,2",
            "--sample", "60", "--seed", "5", "--out-dir", str(out_dir),
        ])
        assert rc == 0
        assert (out_dir / "ari_summary.tsv").exists()
        assert (out_dir / "embedding_1.csv").exists()
        assert (out_dir / "embedding_1_2.csv").exists()
        assert (out_dir / "embedding.png").exists()  # figure next to the CSVs
        assert (out_dir / "run_manifest.json").exists()
        out = capsys.readouterr().out
        assert "best_ari" in out
        with (out_dir / "embedding_1.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "y", "gold_label", "cluster"]
        assert len(rows) == 61
