"""Command line entry point orchestrating all pipelines."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .errors import PicoscreenError, ValidationError
from .labels import CLASS_ORDER, PIO, ClassLabel, SubClass, parse_label

log = logging.getLogger("picoscreen")


def _add_make_demo_data(sub):
    p = sub.add_parser("make-demo-data", help="generate synthetic corpora and tiny checkpoints")
    p.add_argument("--out", required=True)
    p.add_argument("--sentence-abstracts", type=int, default=24668)
    p.add_argument("--entity-train", type=int, default=5000)
    p.add_argument("--entity-test", type=int, default=190)
    p.add_argument("--squad-domains", type=int, default=442)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--no-tuned", action="store_true", help="skip the fine-tuned demo checkpoint")


def _cmd_make_demo_data(args) -> int:
    from . import synthdata

    paths = synthdata.provision_demo(
        args.out,
        n_sentence_abstracts=args.sentence_abstracts,
        n_entity_train=args.entity_train,
        n_entity_test=args.entity_test,
        n_squad_domains=args.squad_domains,
        seed=args.seed,
        with_tuned=not args.no_tuned,
    )
    for key, value in paths.items():
        print(f"{key}\t{value}")
    return 0


def _add_ingest(sub):
    p = sub.add_parser("ingest", help="parse, filter and split the sentence corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--filter-pio", action="store_true")
    p.add_argument("--split", type=float, help="train fraction, e.g. 0.9")
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--out-train")
    p.add_argument("--out-test")


def _cmd_ingest(args) -> int:
    from .corpus import (count_sentences, filter_pio_complete, load_sentence_corpus,
                         save_sentence_corpus, split_train_test)

    abstracts = load_sentence_corpus(args.corpus)
    print(f"abstracts\t{len(abstracts)}")
    print(f"sentences\t{count_sentences(abstracts)}")
    if args.filter_pio:
        abstracts = filter_pio_complete(abstracts)
        print(f"abstracts_pio_complete\t{len(abstracts)}")
        print(f"sentences_pio_complete\t{count_sentences(abstracts)}")
    if args.split is not None:
        train, test = split_train_test(abstracts, args.split, args.seed)
        print(f"train_abstracts\t{len(train)}")
        print(f"train_sentences\t{count_sentences(train)}")
        print(f"test_abstracts\t{len(test)}")
        print(f"test_sentences\t{count_sentences(test)}")
        if args.out_train:
            save_sentence_corpus(train, args.out_train)
        if args.out_test:
            save_sentence_corpus(test, args.out_test)
    return 0


def _parse_subclasses(raw: str | None) -> set[SubClass] | None:
    if not raw:
        return None
    return {SubClass(part.strip().upper()) for part in raw.split(",") if part.strip()}


def _add_convert(sub):
    p = sub.add_parser("convert", help="convert the entity corpus to reading-comprehension JSON")
    p.add_argument("--entity-dir", required=True)
    p.add_argument("--class", dest="pio_class", required=True, choices=["P", "I", "O"])
    p.add_argument("--mode", required=True, choices=["train", "test"])
    p.add_argument("--split", choices=["train", "test"],
                   help="corpus partition to convert (defaults to --mode)")
    p.add_argument("--subclasses", help="comma-separated detail filter, e.g. AGE,GENDER")
    p.add_argument("--squad-file", help="source file for augmentation domains")
    p.add_argument("--squad-domains", type=int, default=0)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--templates", help="JSON file with per-class question pools")
    p.add_argument("--out", required=True)


def _cmd_convert(args) -> int:
    from .corpus import Split, load_entity_corpus
    from .squadgen import (ConvertMode, QuestionTemplateSet, convert_corpus, load_squad,
                           mix_augmentation, save_squad, validate_squad)

    templates = (
        QuestionTemplateSet.from_file(args.templates, seed=args.seed)
        if args.templates
        else QuestionTemplateSet.default(seed=args.seed)
    )
    mode = ConvertMode(args.mode)
    split = Split.TRAIN if (args.split or args.mode) == "train" else Split.EXPERT_TEST
    abstracts = load_entity_corpus(args.entity_dir)
    ds = convert_corpus(
        abstracts,
        ClassLabel(args.pio_class),
        templates,
        mode,
        split=split,
        subclass_filter=_parse_subclasses(args.subclasses),
    )
    if args.squad_domains:
        if not args.squad_file:
            raise ValidationError("--squad-domains requires --squad-file")
        ds = mix_augmentation(ds, load_squad(args.squad_file), args.squad_domains, args.seed)
    report = validate_squad(ds)
    if not report.ok:
        for v in report.violations[:20]:
            print(f"violation\t{v.kind}\t{v.where}\t{v.message}", file=sys.stderr)
        raise ValidationError(f"conversion produced {len(report.violations)} violations")
    save_squad(ds, args.out)
    print(f"domains\t{len(ds.domains)}")
    print(f"questions\t{ds.n_questions()}")
    return 0


def _training_config(path: str | None, overrides: dict):
    from .classifier import TrainingConfig

    base = json.loads(Path(path).read_text(encoding="utf-8")) if path else {}
    base.update({k: v for k, v in overrides.items() if v is not None})
    return TrainingConfig(**base)


def _add_train_sentences(sub):
    p = sub.add_parser("train-sentences", help="fine-tune the sentence classifier")
    p.add_argument("--encoder", required=True, help="checkpoint id, role name or path")
    p.add_argument("--cache", help="encoder cache directory (defaults to env)")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", help="JSON file with training-config fields")
    p.add_argument("--sample-fraction", type=float,
                   help="train on this fraction of abstracts (stratified by abstract)")
    p.add_argument("--split-ratio", type=float, default=0.9)
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--out", required=True)


def _load_encoder(ref: str, cache: str | None):
    from .encoders import EncoderHandle, ROLE_BASE, ROLE_MULTILINGUAL, ROLE_SCIENTIFIC

    if ref in (ROLE_BASE, ROLE_SCIENTIFIC, ROLE_MULTILINGUAL):
        return EncoderHandle.load_role(ref, cache)
    return EncoderHandle.load(ref, cache)


def _cmd_train_sentences(args) -> int:
    import random

    from .classifier import train
    from .corpus import filter_pio_complete, load_sentence_corpus, split_train_test
    from .manifest import ManifestTimer, RunManifest, file_hash

    config = _training_config(args.config, {"seed": args.seed, "epochs": args.epochs})
    encoder = _load_encoder(args.encoder, args.cache)
    abstracts = filter_pio_complete(load_sentence_corpus(args.corpus))
    train_abs, _ = split_train_test(abstracts, args.split_ratio, config.seed)
    if args.sample_fraction:
        k = max(1, round(args.sample_fraction * len(train_abs)))
        train_abs = random.Random(config.seed).sample(train_abs, k)
    pairs = [(s, set(s.gold_labels)) for a in train_abs for s in a.sentences]

    manifest = RunManifest(
        command="train-sentences",
        parameters={"encoder": args.encoder, "corpus": args.corpus,
                    "sample_fraction": args.sample_fraction, "split_ratio": args.split_ratio,
                    "config": vars(args).get("config"), "epochs": config.epochs},
        seeds={"training": config.seed},
        corpus_hashes={"sentence_corpus": file_hash(args.corpus)},
    )
    with ManifestTimer(manifest):
        model = train(pairs, config, encoder)
        out = model.save(args.out)
    manifest.artifacts = [str(out)]
    manifest.write(Path(args.out) / "run_manifest.json")
    print(f"model\t{out}")
    print(f"sentences\t{len(pairs)}")
    return 0


def _read_sentences_file(path: str) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip()]


def _add_predict_sentences(sub):
    p = sub.add_parser("predict-sentences", help="emit per-sentence class probabilities as TSV")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", help="plain text, one sentence per line")
    p.add_argument("--corpus", help="alternatively: a sentence-corpus file (also emits gold)")
    p.add_argument("--out", required=True)
    p.add_argument("--gold-out", help="with --corpus: write gold labels, one letter per line")


def _cmd_predict_sentences(args) -> int:
    from .classifier import ClassifierModel

    model = ClassifierModel.load(args.model)
    gold: list[str] = []
    if args.corpus:
        from .corpus import load_sentence_corpus

        sentences = []
        for a in load_sentence_corpus(args.corpus):
            for s in a.sentences:
                sentences.append(s.text)
                gold.append(sorted(s.gold_labels, key=lambda l: l.value)[0].value)
    elif args.infile:
        sentences = _read_sentences_file(args.infile)
    else:
        raise ValidationError("one of --in or --corpus is required")
    probs = model.predict(sentences)
    with Path(args.out).open("w", encoding="utf-8") as fh:
        fh.write("sentence\t" + "\t".join(c.value for c in CLASS_ORDER) + "\n")
        for text, p in zip(sentences, probs):
            fh.write(text + "\t" + "\t".join(f"{v:.6f}" for v in p.values) + "\n")
    if args.gold_out and gold:
        Path(args.gold_out).write_text("\n".join(gold) + "\n", encoding="utf-8")
    print(f"rows\t{len(sentences)}")
    return 0


def _add_eval_sentences(sub):
    p = sub.add_parser("eval-sentences", help="argmax precision/recall/F1 against a corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out-tsv")
    p.add_argument("--out-json")


def _cmd_eval_sentences(args) -> int:
    from .classifier import ARGMAX, ClassifierModel, assign_labels
    from .corpus import load_sentence_corpus
    from .manifest import ManifestTimer, RunManifest, file_hash
    from .metrics import prf_rows_json, prf_rows_tsv, prf_single_label, save_json_report

    model = ClassifierModel.load(args.model)
    texts: list[str] = []
    gold: list[ClassLabel] = []
    for a in load_sentence_corpus(args.corpus):
        for s in a.sentences:
            texts.append(s.text)
            gold.append(sorted(s.gold_labels, key=lambda l: l.value)[0])
    manifest = RunManifest(
        command="eval-sentences",
        parameters={"model": args.model, "corpus": args.corpus},
        corpus_hashes={"corpus": file_hash(args.corpus)},
    )
    with ManifestTimer(manifest):
        probs = model.predict(texts)
        preds = [next(iter(assign_labels(p, ARGMAX))) for p in probs]
        rows = prf_single_label(preds, gold)
    table = prf_rows_tsv(rows)
    print(table, end="")
    if args.out_tsv:
        Path(args.out_tsv).write_text(table, encoding="utf-8")
        manifest.artifacts.append(args.out_tsv)
    if args.out_json:
        save_json_report(prf_rows_json(rows), args.out_json)
        manifest.artifacts.append(args.out_json)
    target = Path(args.out_tsv or args.out_json or (args.corpus + ".eval"))
    manifest.write(target.with_suffix(target.suffix + ".manifest.json"))
    return 0


def _add_sweep(sub):
    p = sub.add_parser("sweep", help="50-threshold precision/recall/F1 sweep")
    p.add_argument("--probs", required=True, help="TSV from predict-sentences")
    p.add_argument("--gold", required=True, help="one gold label letter per line")
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-fig", help="figure path (defaults next to the CSV)")
    p.add_argument("--classes", help="comma-separated classes to plot (default P,I,O)")


def _read_probs_tsv(path: str) -> list[list[float]]:
    rows: list[list[float]] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter="\t")
        for i, row in enumerate(reader):
            if not row:
                continue
            if i == 0 and row[-1] == "C" and not _is_float(row[-1]):
                continue  # header
            values = row[-len(CLASS_ORDER):]
            rows.append([float(v) for v in values])
    return rows


def _is_float(v: str) -> bool:
    try:
        float(v)
        return True
    except ValueError:
        return False


def _cmd_sweep(args) -> int:
    from .manifest import ManifestTimer, RunManifest, file_hash
    from .metrics import sweep_thresholds, sweep_to_csv
    from .plots import render_sweep_figure

    probs = _read_probs_tsv(args.probs)
    gold = [parse_label(line) for line in _read_sentences_file(args.gold)]
    manifest = RunManifest(
        command="sweep",
        parameters={"probs": args.probs, "gold": args.gold},
        corpus_hashes={"probs": file_hash(args.probs), "gold": file_hash(args.gold)},
    )
    with ManifestTimer(manifest):
        sweep = sweep_thresholds(probs, gold)
        sweep_to_csv(sweep, args.out_csv)
        fig_path = args.out_fig or str(Path(args.out_csv).with_suffix(".png"))
        classes = args.classes.split(",") if args.classes else None
        render_sweep_figure(sweep, fig_path, classes)
    manifest.artifacts = [args.out_csv, fig_path]
    manifest.write(Path(args.out_csv).with_suffix(".manifest.json"))
    print(f"rows\t{len(sweep.thresholds) * len(CLASS_ORDER)}")
    print(f"figure\t{fig_path}")
    return 0


def _qa_config(path: str | None, overrides: dict):
    from .qa import QATrainingConfig

    base = json.loads(Path(path).read_text(encoding="utf-8")) if path else {}
    base.update({k: v for k, v in overrides.items() if v is not None})
    return QATrainingConfig(**base)


def _add_train_qa(sub):
    p = sub.add_parser("train-qa", help="fine-tune a span-extraction model")
    p.add_argument("--encoder", required=True)
    p.add_argument("--cache")
    p.add_argument("--data", required=True, help="converted reading-comprehension JSON")
    p.add_argument("--class", dest="pio_class", default="MIXED",
                   help="class this model extracts (P, I, O, a subclass tag, or MIXED)")
    p.add_argument("--squad-file", help="augmentation source; mixed in before training")
    p.add_argument("--squad-domains", type=int, default=0)
    p.add_argument("--config", help="JSON file with qa-training-config fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--out", required=True)


def _cmd_train_qa(args) -> int:
    from .manifest import ManifestTimer, RunManifest, file_hash
    from .qa import train_qa
    from .squadgen import load_squad, mix_augmentation

    config = _qa_config(args.config, {"seed": args.seed, "epochs": args.epochs})
    encoder = _load_encoder(args.encoder, args.cache)
    ds = load_squad(args.data)
    augmentation = None
    if args.squad_domains:
        if not args.squad_file:
            raise ValidationError("--squad-domains requires --squad-file")
        ds = mix_augmentation(ds, load_squad(args.squad_file), args.squad_domains, config.seed)
        augmentation = args.squad_domains
    manifest = RunManifest(
        command="train-qa",
        parameters={"encoder": args.encoder, "data": args.data, "class": args.pio_class,
                    "squad_domains": args.squad_domains},
        seeds={"training": config.seed},
        corpus_hashes={"data": file_hash(args.data)},
    )
    with ManifestTimer(manifest):
        model = train_qa(ds, config, encoder, trained_class=args.pio_class,
                         augmentation_domains=augmentation)
        out = model.save(args.out)
    manifest.artifacts = [str(out)]
    manifest.write(Path(args.out) / "run_manifest.json")
    print(f"model\t{out}")
    return 0


def _add_answer(sub):
    p = sub.add_parser("answer", help="answer one question against one context")
    p.add_argument("--model", required=True)
    p.add_argument("--question", required=True)
    p.add_argument("--context", required=True)
    p.add_argument("--null-threshold", type=float, default=0.0)


def _cmd_answer(args) -> int:
    from .qa import QAModel

    model = QAModel.load(args.model)
    pred = model.answer(args.question, args.context, null_threshold=args.null_threshold)
    print(json.dumps({
        "text": pred.text,
        "start_char": pred.start_char,
        "end_char": pred.end_char,
        "span_score": pred.span_score,
        "no_answer_score": pred.no_answer_score,
        "is_no_answer": pred.is_no_answer,
    }, indent=2))
    return 0


def _add_predict_qa(sub):
    p = sub.add_parser("predict-qa", help="batch predictions for a reading-comprehension file")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--null-threshold", type=float, default=0.0)


def _cmd_predict_qa(args) -> int:
    from .qa import QAModel
    from .squadgen import load_squad

    model = QAModel.load(args.model)
    ds = load_squad(args.infile)
    predictions = model.predict_dataset(ds, null_threshold=args.null_threshold)
    Path(args.out).write_text(json.dumps(predictions, indent=0, ensure_ascii=False),
                              encoding="utf-8")
    print(f"predictions\t{len(predictions)}")
    return 0


def _add_eval_qa(sub):
    p = sub.add_parser("eval-qa", help="token-level F1 with possible/impossible subgroups")
    p.add_argument("--pred", required=True, help="JSON map of qa id to answer string")
    p.add_argument("--test", required=True, help="reading-comprehension JSON with gold answers")
    p.add_argument("--class", dest="label", default="ALL")
    p.add_argument("--out-json")


def _cmd_eval_qa(args) -> int:
    from .manifest import ManifestTimer, RunManifest, file_hash
    from .metrics import evaluate_qa, save_json_report
    from .squadgen import load_squad

    predictions = json.loads(Path(args.pred).read_text(encoding="utf-8"))
    test = load_squad(args.test)
    manifest = RunManifest(
        command="eval-qa",
        parameters={"pred": args.pred, "test": args.test, "class": args.label},
        corpus_hashes={"pred": file_hash(args.pred), "test": file_hash(args.test)},
    )
    with ManifestTimer(manifest):
        result = evaluate_qa(predictions, test, label=args.label)
    sub = result.subgroups

    def fmt(v):
        return "NA" if v is None else f"{v:.4f}"

    print(f"overall_f1\t{result.overall_f1:.4f}")
    print(f"pct_possible\t{sub.pct_possible:.4f}")
    print(f"f1_possible\t{fmt(sub.f1_possible)}")
    print(f"f1_impossible\t{fmt(sub.f1_impossible)}")
    if args.out_json:
        save_json_report(result.to_json_dict(), args.out_json)
        manifest.artifacts.append(args.out_json)
        manifest.write(Path(args.out_json).with_suffix(".manifest.json"))
    else:
        manifest.write(Path(args.pred).with_suffix(".eval.manifest.json"))
    return 0


def _add_embed_study(sub):
    p = sub.add_parser("embed-study", help="layer-wise clustering quality study")
    p.add_argument("--encoder", required=True)
    p.add_argument("--cache")
    p.add_argument("--corpus", required=True, help="sentence corpus supplying labelled P/I/O text")
    p.add_argument("--layers", help='e.g. "3;2,3" (default: all singles + adjacent pairs)')
    p.add_argument("--sample", type=int, default=3000)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--no-tsne", action="store_true")
    p.add_argument("--out-dir", required=True)


def _cmd_embed_study(args) -> int:
    from .corpus import load_sentence_corpus
    from .embedding_study import default_layer_specs, parse_layer_specs, run_study
    from .manifest import ManifestTimer, RunManifest, file_hash
    from .plots import render_embedding_figure

    encoder = _load_encoder(args.encoder, args.cache)
    specs = parse_layer_specs(args.layers) if args.layers else default_layer_specs(encoder.n_layers)
    sentences = []
    for a in load_sentence_corpus(args.corpus):
        for s in a.sentences:
            if len(s.gold_labels) == 1:
                label = next(iter(s.gold_labels))
                if label in PIO:
                    sentences.append((s.text, label))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        command="embed-study",
        parameters={"encoder": args.encoder, "layers": args.layers, "sample": args.sample},
        seeds={"study": args.seed},
        corpus_hashes={"corpus": file_hash(args.corpus)},
    )
    with ManifestTimer(manifest):
        study = run_study(sentences, encoder, specs, seed=args.seed,
                          sample_size=args.sample, with_tsne=not args.no_tsne)
        summary_path = out_dir / "ari_summary.tsv"
        with summary_path.open("w", encoding="utf-8") as fh:
            fh.write("layers\tari\n")
            for r in study.results:
                fh.write(f"{r.name}\t{r.ari:.4f}\n")
        for r in study.results:
            if r.coords is None:
                continue
            with (out_dir / f"embedding_{r.name.replace('+', '_')}.csv").open(
                "w", encoding="utf-8", newline=""
            ) as fh:
                writer = csv.writer(fh)
                writer.writerow(["x", "y", "gold_label", "cluster"])
                for i in range(len(study.texts)):
                    writer.writerow([f"{r.coords[i, 0]:.4f}", f"{r.coords[i, 1]:.4f}",
                                     study.gold[i].value, int(r.clusters[i])])
        if not args.no_tsne:
            render_embedding_figure(study, out_dir / "embedding.png")
    manifest.artifacts = [str(p) for p in sorted(out_dir.iterdir())]
    manifest.write(out_dir / "run_manifest.json")
    best = study.best()
    print(f"best_layers\t{best.name}")
    print(f"best_ari\t{best.ari:.4f}")
    return 0


def _add_serve(sub):
    p = sub.add_parser("serve", help="run the highlighting HTTP service")
    p.add_argument("--config", help="JSON service config file")
    p.add_argument("--classifier", help="sentence-classifier model directory")
    p.add_argument("--qa", action="append", default=[],
                   help="CLASS=DIR, repeatable (e.g. --qa P=models/qa-p)")
    p.add_argument("--templates", help="question template JSON for /extract defaults")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--cache-size", type=int)


def _cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import (DEFAULT_CACHE_SIZE, create_app, load_service_config,
                          registry_from_config)

    config = load_service_config(args.config or os.environ.get("PICOSCREEN_SERVICE_CONFIG"))
    if args.classifier:
        config["classifier_dir"] = args.classifier
    qa_dirs = dict(config.get("qa_dirs") or {})
    for pair in args.qa:
        letter, _, path = pair.partition("=")
        if not path:
            raise ValidationError(f"--qa expects CLASS=DIR, got {pair!r}")
        qa_dirs[letter.upper()] = path
    config["qa_dirs"] = qa_dirs
    if args.templates:
        config["templates_file"] = args.templates
    registry = registry_from_config(config)
    app = create_app(registry, cache_size=args.cache_size or config.get("cache_size", DEFAULT_CACHE_SIZE))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "make-demo-data": _cmd_make_demo_data,
    "ingest": _cmd_ingest,
    "convert": _cmd_convert,
    "train-sentences": _cmd_train_sentences,
    "predict-sentences": _cmd_predict_sentences,
    "eval-sentences": _cmd_eval_sentences,
    "sweep": _cmd_sweep,
    "train-qa": _cmd_train_qa,
    "answer": _cmd_answer,
    "predict-qa": _cmd_predict_qa,
    "eval-qa": _cmd_eval_qa,
    "embed-study": _cmd_embed_study,
    "serve": _cmd_serve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picoscreen",
        description="PICO sentence classification, span extraction and screening support",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")
    for adder in (_add_make_demo_data, _add_ingest, _add_convert, _add_train_sentences,
                  _add_predict_sentences, _add_eval_sentences, _add_sweep, _add_train_qa,
                  _add_answer, _add_predict_qa, _add_eval_qa, _add_embed_study, _add_serve):
        adder(sub)
    return parser


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except PicoscreenError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())
