"""Synthetic demo corpora and tiny local encoder checkpoints.

The real source corpora cannot be redistributed, so this module fabricates
structurally faithful stand-ins at the published scales: a labelled
sentence corpus, a token-annotated entity corpus (with per-class possible
fractions of roughly 30/53/60 percent and detailed population
annotations on 10 percent of sentences), and a 442-domain general
reading-comprehension file for augmentation. It also provisions seeded
tiny BERT-architecture checkpoints into the local encoder cache so every
pipeline runs offline.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .labels import ClassLabel
from .squadgen import detokenize_with_map

DEMO_SEED = 13

POSSIBLE_RATES = {ClassLabel.P: 0.30, ClassLabel.I: 0.53, ClassLabel.O: 0.60}
DETAILED_RATE = 0.10

CONDITIONS = [
    "diabetes", "asthma", "hypertension", "migraine", "osteoarthritis",
    "depression", "schizophrenia", "insomnia", "obesity", "eczema",
    "arthritis", "anxiety", "bronchitis", "psoriasis", "angina",
]
DRUGS = [
    "aspirin", "metformin", "sertraline", "ibuprofen", "quetiapine",
    "tiapride", "lisinopril", "melatonin", "naproxen", "fluoxetine",
    "acupuncture", "gabapentin", "omeprazole", "prednisone", "ramipril",
]
OUTCOMES = [
    "pain intensity", "blood pressure", "sleep quality", "symptom severity",
    "relapse rate", "quality of life", "joint function", "anxiety score",
    "body weight", "headache frequency", "lung function", "fasting glucose",
]
SCALES = ["visual analogue", "hamilton rating", "likert", "symptom checklist"]
POPULATIONS = ["patients", "adults", "children", "women", "men", "participants",
               "volunteers", "outpatients"]
GENDERED = ["women", "men"]
SITES = [["three", "clinics"], ["two", "hospitals"], ["four", "centres"],
         ["one", "outpatient", "department"]]
NUMBERS = ["20", "24", "30", "36", "40", "45", "48", "60", "64", "72", "80",
           "90", "96", "100", "120", "150", "180", "200", "240", "300"]
AGES = ["18", "21", "25", "30", "35", "40", "45", "50", "55", "60", "65", "70", "75", "80"]
SMALL = ["2", "3", "4", "5", "6", "8", "10", "12", "16", "24"]
PVALUES = ["0.001", "0.003", "0.01", "0.02", "0.03", "0.04", "0.05"]

# augmentation pools (general-knowledge flavour, disjoint from the clinical ones)
AUG_PLACES = ["arvania", "belmora", "cordoba", "dunwich", "eldoria", "farholm",
              "granvia", "halstead", "ironden", "jutland", "kelmarsh", "lorwick"]
AUG_THINGS = ["capital", "river", "anthem", "currency", "mountain", "harbour"]
AUG_VALUES = ["meridel", "ostrava", "quillon", "rivena", "selmore", "tavrin",
              "umbra", "velden", "wexford", "yarrow"]


def _choice(rng: random.Random, pool):
    return pool[rng.randrange(len(pool))]


def _outcome_tokens(rng: random.Random) -> list[str]:
    return _choice(rng, OUTCOMES).split()


# --- token-level sentence builders ------------------------------------------
# Each builder returns (tokens, spans) where spans maps a class (or a
# ("P", subclass-name) pair) to a list of half-open token ranges local to
# the sentence.


def _p_phrase(rng: random.Random, detailed: bool):
    n = _choice(rng, NUMBERS)
    cond = _choice(rng, CONDITIONS)
    if detailed:
        pop = _choice(rng, GENDERED)
        lo, hi = sorted(rng.sample(AGES, 2), key=int)
        tokens = [n, pop, "aged", lo, "-", hi, "years", "with", cond]
        spans = {
            "P": [(0, len(tokens))],
            ("P", "SIZE"): [(0, 1)],
            ("P", "GENDER"): [(1, 2)],
            ("P", "AGE"): [(2, 7)],
            ("P", "CONDITION"): [(8, 9)],
        }
    else:
        pop = _choice(rng, POPULATIONS)
        tokens = [n, pop, "with", cond]
        spans = {"P": [(0, len(tokens))]}
    return tokens, spans


def _i_phrase(rng: random.Random):
    drug = _choice(rng, DRUGS)
    roll = rng.random()
    if roll < 0.35:
        tokens = [drug, _choice(rng, NUMBERS), "mg"]
        spans = [(0, 3)]
    elif roll < 0.6:
        other = _choice(rng, [d for d in DRUGS if d != drug])
        tokens = [drug, "or", other]
        spans = [(0, 1), (2, 3)]  # two accepted answers in succession
    else:
        tokens = [drug]
        spans = [(0, 1)]
    return tokens, spans


def _o_phrase(rng: random.Random):
    if rng.random() < 0.3:
        tokens = _choice(rng, SCALES).split() + ["scores"]
    else:
        tokens = _outcome_tokens(rng)
    return tokens, [(0, len(tokens))]


def _shift(spans, offset):
    return [(s + offset, e + offset) for s, e in spans]


def _filler_sentence(rng: random.Random) -> list[str]:
    return _choice(
        rng,
        [
            ["The", "trial", "was", "registered", "prospectively", "."],
            ["Data", "were", "analysed", "using", "regression", "models", "."],
            ["Follow", "up", "lasted", _choice(rng, SMALL), "weeks", "."],
            ["No", "serious", "adverse", "events", "were", "reported", "."],
            ["Baseline", "characteristics", "were", "similar", "between", "groups", "."],
            ["Compliance", "was", "monitored", "at", "each", "visit", "."],
        ],
    )


def build_entity_sentence(rng: random.Random, kinds: set[ClassLabel], detailed: bool):
    """Assemble one tokenized sentence carrying spans for ``kinds``.

    Returns (tokens, spans) with spans keyed like the phrase builders.
    """
    spans: dict = {}
    tokens: list[str] = []

    def add(phrase_tokens, phrase_spans):
        offset = len(tokens)
        tokens.extend(phrase_tokens)
        for key, ranges in phrase_spans.items():
            spans.setdefault(key, []).extend(_shift(ranges, offset))

    has_p = ClassLabel.P in kinds
    has_i = ClassLabel.I in kinds
    has_o = ClassLabel.O in kinds

    if not (has_p or has_i or has_o):
        return _filler_sentence(rng), {}

    if has_p:
        lead = _choice(rng, [["A", "total", "of"], ["Overall", ","], ["In", "this", "study", ","]])
        tokens.extend(lead)
        p_tokens, p_spans = _p_phrase(rng, detailed)
        add(p_tokens, p_spans)
        if has_i:
            tokens.extend(_choice(rng, [["were", "randomly", "assigned", "to"],
                                        ["received"], ["were", "allocated", "to"]]))
            i_tokens, i_spans = _i_phrase(rng)
            offset = len(tokens)
            tokens.extend(i_tokens)
            spans.setdefault("I", []).extend(_shift(i_spans, offset))
            if has_o:
                tokens.extend(["and", "assessed", "for"])
                o_tokens, o_spans = _o_phrase(rng)
                offset = len(tokens)
                tokens.extend(o_tokens)
                spans.setdefault("O", []).extend(_shift(o_spans, offset))
        elif has_o:
            tokens.extend(_choice(rng, [["were", "assessed", "for"], ["were", "evaluated", "for"]]))
            o_tokens, o_spans = _o_phrase(rng)
            offset = len(tokens)
            tokens.extend(o_tokens)
            spans.setdefault("O", []).extend(_shift(o_spans, offset))
        else:
            tokens.extend(_choice(rng, [["were", "enrolled"], ["were", "recruited"],
                                        ["participated"]]))
    elif has_i:
        if has_o:
            tokens.extend(["The", "effect", "of"])
            i_tokens, i_spans = _i_phrase(rng)
            offset = len(tokens)
            tokens.extend(i_tokens)
            spans.setdefault("I", []).extend(_shift(i_spans, offset))
            tokens.append("on")
            o_tokens, o_spans = _o_phrase(rng)
            offset = len(tokens)
            tokens.extend(o_tokens)
            spans.setdefault("O", []).extend(_shift(o_spans, offset))
            tokens.extend(["was", "evaluated"])
        else:
            tokens.extend(_choice(rng, [["Participants", "received"],
                                        ["The", "intervention", "group", "was", "treated", "with"]]))
            i_tokens, i_spans = _i_phrase(rng)
            offset = len(tokens)
            tokens.extend(i_tokens)
            spans.setdefault("I", []).extend(_shift(i_spans, offset))
            if rng.random() < 0.5:
                tokens.extend(["daily", "for", _choice(rng, SMALL), "weeks"])
    else:  # O only
        if rng.random() < 0.5:
            tokens.extend(["The", "primary", "outcome", "was"])
            o_tokens, o_spans = _o_phrase(rng)
            offset = len(tokens)
            tokens.extend(o_tokens)
            spans.setdefault("O", []).extend(_shift(o_spans, offset))
            tokens.extend(["at", _choice(rng, SMALL), "weeks"])
        else:
            o_tokens, o_spans = _o_phrase(rng)
            offset = len(tokens)
            tokens.extend(o_tokens)
            spans.setdefault("O", []).extend(_shift(o_spans, offset))
            tokens.extend(["was", "measured", "at", "baseline"])
    tokens.append(".")
    return tokens, spans


def _plain_sentence(rng: random.Random, label: ClassLabel) -> list[str]:
    """Sentence-corpus text for the non-span classes."""
    drug = _choice(rng, DRUGS)
    cond = _choice(rng, CONDITIONS)
    outcome = _outcome_tokens(rng)
    if label is ClassLabel.A:
        return _choice(rng, [
            ["Our", "aim", "was", "to", "evaluate", drug, "for", cond, "."],
            ["The", "objective", "was", "to", "assess", "the", "effect", "of", drug, "on"] + outcome + ["."],
            ["We", "investigated", "whether", drug, "improves"] + outcome + ["in", "patients", "with", cond, "."],
        ])
    if label is ClassLabel.M:
        return _choice(rng, [
            ["This", "was", "a", "randomized", "double", "blind", "trial", "conducted", "at"] + _choice(rng, SITES) + ["."],
            ["Assessors", "were", "blinded", "to", "treatment", "allocation", "."],
            ["Randomization", "was", "stratified", "by", "centre", "and", cond, "duration", "."],
        ])
    if label is ClassLabel.R:
        return _choice(rng, [
            ["Mean"] + outcome + ["decreased", "by", _choice(rng, SMALL), "points", "in", "the", drug, "group", "."],
            outcome + ["improved", "significantly", "(", "p", "=", _choice(rng, PVALUES), ")", "."],
            ["Adverse", "events", "occurred", "in", _choice(rng, SMALL), "of", _choice(rng, NUMBERS), "participants", "."],
        ])
    if label is ClassLabel.C:
        return _choice(rng, [
            ["In", "conclusion", ",", drug, "was", "well", "tolerated", "."],
            ["These", "findings", "support", "the", "use", "of", drug, "for", cond, "."],
            ["Larger", "trials", "of", drug, "are", "warranted", "."],
        ])
    raise ValueError(f"no plain template for {label}")


def sentence_text(rng: random.Random, label: ClassLabel) -> str:
    """One sentence-corpus sentence of the requested class."""
    if label in (ClassLabel.P, ClassLabel.I, ClassLabel.O):
        tokens, _ = build_entity_sentence(rng, {label}, detailed=False)
    else:
        tokens = _plain_sentence(rng, label)
    return detokenize_with_map(tokens)[0]


def generate_sentence_corpus(
    path: str | Path,
    n_abstracts: int = 24668,
    seed: int = DEMO_SEED,
    pio_complete_rate: float = 0.87,
    mixed_topic_rate: float = 0.05,
) -> Path:
    """Write a sentence corpus file in the canonical record format.

    ``pio_complete_rate`` controls how many abstracts survive the
    P-and-I-and-O filter; ``mixed_topic_rate`` injects sentences whose text
    spans two topics but carries a single gold label (the ambiguity that
    motivates multi-label prediction).
    """
    rng = random.Random(seed)
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for i in range(n_abstracts):
            if i:
                fh.write("\n")
            abs_id = f"pm{1000000 + i}"
            plan: list[ClassLabel] = [ClassLabel.A]
            pio = [ClassLabel.P, ClassLabel.I, ClassLabel.O]
            if rng.random() >= pio_complete_rate:
                pio.remove(_choice(rng, pio))
            for cls in pio:
                plan.append(cls)
                if rng.random() < 0.15:
                    plan.append(cls)
            if rng.random() < 0.7:
                plan.insert(rng.randrange(1, len(plan) + 1), ClassLabel.M)
            plan.extend([ClassLabel.R] * rng.randint(1, 2))
            if rng.random() < 0.9:
                plan.append(ClassLabel.C)
            for label in plan:
                if label in POSSIBLE_RATES and rng.random() < mixed_topic_rate:
                    others = [c for c in (ClassLabel.P, ClassLabel.I, ClassLabel.O) if c is not label]
                    kinds = {label, _choice(rng, others)}
                    tokens, _ = build_entity_sentence(rng, kinds, detailed=False)
                    text = detokenize_with_map(tokens)[0]
                else:
                    text = sentence_text(rng, label)
                fh.write(f"{abs_id}\t{label.value}\t{text}\n")
    return path


# --- entity corpus -----------------------------------------------------------

_CLASS_DIR = {ClassLabel.P: "participants", ClassLabel.I: "interventions",
              ClassLabel.O: "outcomes"}
_SUBCLASS_CODE = {"AGE": 1, "GENDER": 2, "CONDITION": 3, "SIZE": 4}


def generate_entity_corpus(
    root: str | Path,
    n_train: int = 5000,
    n_test: int = 190,
    seed: int = DEMO_SEED + 1,
    possible_rates: dict[ClassLabel, float] | None = None,
    detailed_rate: float = DETAILED_RATE,
) -> Path:
    """Write a token-annotated corpus in the documented directory layout.

    Per split, the fraction of sentences carrying at least one span is
    exact (up to rounding) for each class, and ``detailed_rate`` of all
    sentences carry the four detailed population annotations.
    """
    rates = possible_rates or POSSIBLE_RATES
    root = Path(root)
    doc_dir = root / "documents"
    doc_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    for split_name, n_docs, base_id in (("train", n_train, 400000), ("test", n_test, 900000)):
        counts = [rng.randint(6, 10) for _ in range(n_docs)]
        total = sum(counts)
        flags: dict[ClassLabel, set[int]] = {}
        for cls, rate in rates.items():
            order = list(range(total))
            rng.shuffle(order)
            flags[cls] = set(order[: round(rate * total)])
        p_sorted = sorted(flags[ClassLabel.P])
        rng.shuffle(p_sorted)
        detailed = set(p_sorted[: round(detailed_rate * total)])

        for class_dir in list(_CLASS_DIR.values()) + ["participants_detailed"]:
            (root / "annotations" / class_dir / split_name).mkdir(parents=True, exist_ok=True)

        global_idx = 0
        for d, n_sent in enumerate(counts):
            abs_id = f"doc{base_id + d}"
            tokens: list[str] = []
            codes = {cls: [] for cls in rates}
            det_codes: list[int] = []
            for _ in range(n_sent):
                kinds = {cls for cls in rates if global_idx in flags[cls]}
                sent_tokens, spans = build_entity_sentence(
                    rng, kinds, detailed=global_idx in detailed
                )
                for cls in rates:
                    sent_codes = [0] * len(sent_tokens)
                    for s, e in spans.get(cls.value, []):
                        for t in range(s, e):
                            sent_codes[t] = 1
                    codes[cls].extend(sent_codes)
                sent_det = [0] * len(sent_tokens)
                for sub, code in _SUBCLASS_CODE.items():
                    for s, e in spans.get(("P", sub), []):
                        for t in range(s, e):
                            sent_det[t] = code
                det_codes.extend(sent_det)
                tokens.extend(sent_tokens)
                global_idx += 1

            (doc_dir / f"{abs_id}.tokens").write_text("\n".join(tokens) + "\n", encoding="utf-8")
            for cls, class_dir in _CLASS_DIR.items():
                ann_path = root / "annotations" / class_dir / split_name / f"{abs_id}.ann"
                ann_path.write_text(",".join(map(str, codes[cls])), encoding="utf-8")
            det_path = root / "annotations" / "participants_detailed" / split_name / f"{abs_id}.ann"
            det_path.write_text(",".join(map(str, det_codes)), encoding="utf-8")
    return root


def generate_augmentation_squad(
    path: str | Path, n_domains: int = 442, seed: int = DEMO_SEED + 2
) -> Path:
    """Write a general reading-comprehension file in v2 JSON format."""
    rng = random.Random(seed)
    data = []
    for i in range(n_domains):
        place = _choice(rng, AUG_PLACES)
        thing = _choice(rng, AUG_THINGS)
        other = _choice(rng, [t for t in AUG_THINGS if t != thing])
        value = _choice(rng, AUG_VALUES)
        context = f"The {thing} of {place} is {value} . It was described in {_choice(rng, NUMBERS)} ."
        answer_start = context.index(value)
        qas = [
            {
                "id": f"aug{seed}-{i}-0",
                "question": f"What is the {thing} of {place} ?",
                "answers": [{"text": value, "answer_start": answer_start}],
                "is_impossible": False,
            },
            {
                "id": f"aug{seed}-{i}-1",
                "question": f"What is the {other} of {place} ?",
                "answers": [],
                "is_impossible": True,
                "plausible_answers": [{"text": "The", "answer_start": 0}],
            },
        ]
        data.append({"title": f"aug-{i}", "paragraphs": [{"context": context, "qas": qas}]})
    payload = {"version": "v2.0", "data": data}
    path = Path(path)
    path.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
    return path


# --- tiny checkpoints ---------------------------------------------------------

# pieces that let the tokenizer decompose any remaining alphanumeric input
_FALLBACK_CHARS = "abcdefghijklmnopqrstuvwxyz0123456789"
_SUBWORD_DEMO = ["ket", "##oro", "##lac", "tro", "##meth", "##amine", "two", "drops"]
_PUNCT_TOKENS = list(".,;:()[]?!=/-%")
_MULTILINGUAL_EXTRA = [
    "ziel", "untersuchung", "der", "wirksamkeit", "von", "bei", "patienten", "mit",
    "methoden", "ergebnisse", "schlussfolgerung", "studie", "wurden", "und",
] + list("方法選擇例患者隨機分為組結果療效安全性研究目的")


def _demo_lexicon() -> set[str]:
    words: set[str] = set()
    for pool in (CONDITIONS, DRUGS, POPULATIONS, GENDERED, NUMBERS, AGES, SMALL,
                 PVALUES, AUG_PLACES, AUG_THINGS, AUG_VALUES):
        words.update(w.lower() for w in pool)
    for phrase_pool in (OUTCOMES, SCALES):
        for phrase in phrase_pool:
            words.update(w.lower() for w in phrase.split())
    for site in SITES:
        words.update(w.lower() for w in site)
    static = """
        a total of overall in this study were randomly assigned to received
        allocated and assessed for evaluated enrolled recruited participated
        the effect on was intervention group treated with daily weeks primary
        outcome at measured baseline participants or mg scores trial
        registered prospectively data analysed using regression models follow
        up lasted no serious adverse events reported characteristics similar
        between groups compliance monitored each visit our aim evaluate
        objective assess we investigated whether improves patients randomized
        double blind conducted assessors blinded treatment allocation
        stratified by centre duration mean decreased points significantly p
        occurred conclusion well tolerated these findings support use larger
        trials are warranted it described what is who which
        population studied participants study included examined subjects
        drug therapy tested applied dose procedure administered outcomes
        endpoints results measures used capital river anthem currency
        mountain harbour
    """
    words.update(static.split())
    return words


def build_demo_vocab(extra: list[str] | None = None) -> list[str]:
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    seen = set(vocab)
    for tok in (
        sorted(_demo_lexicon())
        + _SUBWORD_DEMO
        + _PUNCT_TOKENS
        + list(_FALLBACK_CHARS)
        + ["##" + c for c in _FALLBACK_CHARS]
        + (extra or [])
    ):
        if tok not in seen:
            seen.add(tok)
            vocab.append(tok)
    return vocab


def build_random_checkpoint(
    cache: str | Path,
    name: str = "tiny-base",
    seed: int = DEMO_SEED,
    cased: bool = False,
    hidden_size: int = 128,
    n_layers: int = 3,
    n_heads: int = 4,
    intermediate_size: int = 256,
    max_position_embeddings: int = 192,
) -> Path:
    """Create a seeded randomly initialized checkpoint in the cache."""
    import torch
    from transformers import BertConfig, BertModel, BertTokenizerFast

    target = Path(cache) / name
    target.mkdir(parents=True, exist_ok=True)
    extra = _MULTILINGUAL_EXTRA + [w.capitalize() for w in _MULTILINGUAL_EXTRA if w.isascii()] if cased else None
    vocab = build_demo_vocab(extra)
    (target / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    (target / "tokenizer_config.json").write_text(
        json.dumps({"tokenizer_class": "BertTokenizer", "do_lower_case": not cased}),
        encoding="utf-8",
    )
    tokenizer = BertTokenizerFast.from_pretrained(target)
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=hidden_size,
        num_hidden_layers=n_layers,
        num_attention_heads=n_heads,
        intermediate_size=intermediate_size,
        max_position_embeddings=max_position_embeddings,
    )
    model = BertModel(config)
    model.save_pretrained(target)
    tokenizer.save_pretrained(target)
    return target


def build_tuned_checkpoint(
    cache: str | Path,
    name: str = "tiny-sci",
    base: str = "tiny-base",
    seed: int = DEMO_SEED + 3,
    n_abstracts: int = 1200,
    epochs: int = 2,
    learning_rate: float = 5e-4,
    workdir: str | Path | None = None,
) -> Path:
    """Derive a domain-adapted checkpoint by fine-tuning the base encoder
    on a disjoint synthetic sentence sample and keeping only the encoder.

    A from-scratch tiny model needs a far larger step size than the
    fine-tuning defaults, so this provisioning recipe uses its own
    learning rate; downstream runs on the produced checkpoint work with
    the standard defaults.
    """
    import tempfile

    from .classifier import TrainingConfig, train
    from .corpus import load_sentence_corpus
    from .encoders import EncoderHandle

    cache = Path(cache)
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        corpus_path = Path(tmp) / "tuning_corpus.tsv"
        generate_sentence_corpus(corpus_path, n_abstracts=n_abstracts, seed=seed)
        abstracts = load_sentence_corpus(corpus_path)
        pairs = [(s, set(s.gold_labels)) for a in abstracts for s in a.sentences]
        encoder = EncoderHandle.load(base, cache)
        config = TrainingConfig(epochs=epochs, seed=seed, learning_rate=learning_rate)
        model = train(pairs, config, encoder)
    target = cache / name
    target.mkdir(parents=True, exist_ok=True)
    model.encoder.model.save_pretrained(target)
    model.encoder.tokenizer.save_pretrained(target)
    return target


def write_roles(cache: str | Path, mapping: dict[str, str]) -> Path:
    path = Path(cache) / "roles.json"
    path.write_text(json.dumps(mapping, indent=2), encoding="utf-8")
    return path


def provision_demo(
    root: str | Path,
    n_sentence_abstracts: int = 24668,
    n_entity_train: int = 5000,
    n_entity_test: int = 190,
    n_squad_domains: int = 442,
    seed: int = DEMO_SEED,
    with_tuned: bool = True,
) -> dict[str, Path]:
    """Create the full demo workspace: corpora, augmentation file, checkpoints.

    Returns the paths keyed by artifact.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    cache = root / "encoders"
    out = {
        "sentence_corpus": generate_sentence_corpus(
            root / "sentence_corpus.tsv", n_sentence_abstracts, seed
        ),
        "entity_corpus": generate_entity_corpus(
            root / "entity_corpus", n_entity_train, n_entity_test, seed + 1
        ),
        "augmentation_squad": generate_augmentation_squad(
            root / "augmentation_squad.json", n_squad_domains, seed + 2
        ),
        "encoder_cache": cache,
    }
    build_random_checkpoint(cache, "tiny-base", seed=seed, cased=False)
    build_random_checkpoint(cache, "tiny-multi", seed=seed + 1, cased=True)
    roles = {"base-uncased": "tiny-base", "multilingual-cased": "tiny-multi"}
    if with_tuned:
        build_tuned_checkpoint(cache, "tiny-sci", base=str(cache / "tiny-base"), seed=seed + 3)
        roles["scientific"] = "tiny-sci"
    else:
        roles["scientific"] = "tiny-base"
    write_roles(cache, roles)
    return out
