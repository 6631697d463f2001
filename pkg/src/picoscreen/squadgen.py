"""Conversion of token-level entity annotations into reading-comprehension
datasets with possible and impossible questions, plus augmentation mixing
and structural validation.

An abstract becomes one domain; each of its sentences becomes one
paragraph carrying exactly one question. Sentences containing at least one
span of the requested class yield an answerable question whose answers are
character-aligned into the reconstructed sentence text; sentences without
a span yield an unanswerable question whose plausible answer starts at
character 0.
"""

from __future__ import annotations

import enum
import hashlib
import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Split, TokenizedAbstract
from .errors import ValidationError
from .labels import PIO, ClassLabel, SubClass
from .segmentation import split_token_stream

log = logging.getLogger(__name__)

SQUAD_VERSION = "v2.0"

# Detokenization joining rule: a space between tokens, suppressed before
# closing punctuation, after opening punctuation, and on both sides of the
# glue symbols (so "( n = 60 )" renders as "(n=60)").
_CLOSING = {".", ",", ";", ":", ")", "]", "?", "!"}
_OPENING = {"(", "["}
_GLUE = {"=", "/", "-"}


class ConvertMode(enum.Enum):
    TRAIN = "train"  # one accepted answer per context (first span by offset)
    TEST = "test"  # all spans accepted as alternative answers


DEFAULT_TEMPLATES: dict[str, list[str]] = {
    "P": [
        "Which population was studied?",
        "Who participated in this study?",
        "Which patients or participants were included?",
        "What group of people was examined?",
        "Who were the subjects of the trial?",
    ],
    "I": [
        "Which intervention did the participants receive?",
        "What treatment was given?",
        "Which therapy or drug was tested?",
        "What intervention was applied?",
        "Which drug, dose or procedure was administered?",
    ],
    "O": [
        "Which outcomes were measured?",
        "What was the primary outcome?",
        "Which endpoints were assessed?",
        "What results or measures were evaluated?",
        "Which outcome measures were used?",
    ],
}


@dataclass
class QuestionTemplateSet:
    """Per-class question pools with the seed that drives template choice."""

    templates: dict[str, list[str]]
    rng_seed: int = 0

    def __post_init__(self):
        for cls in PIO:
            pool = self.templates.get(cls.value)
            if not pool:
                raise ValidationError(f"no question templates for class {cls.value}")
            if any(not q.strip() for q in pool):
                raise ValidationError(f"empty question template in class {cls.value}")

    @classmethod
    def default(cls, seed: int = 0) -> "QuestionTemplateSet":
        return cls(templates={k: list(v) for k, v in DEFAULT_TEMPLATES.items()}, rng_seed=seed)

    @classmethod
    def from_file(cls, path: str | Path, seed: int | None = None) -> "QuestionTemplateSet":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        file_seed = data.pop("seed", 0)
        return cls(templates=data, rng_seed=file_seed if seed is None else seed)

    def pool_for(self, pio_class: ClassLabel, subclass: SubClass | None = None) -> list[str]:
        if subclass is not None:
            specific = self.templates.get(f"{pio_class.value}.{subclass.value}")
            if specific:
                return specific
        return self.templates[pio_class.value]


@dataclass
class AnswerSpan:
    text: str
    answer_start: int


@dataclass
class QAItem:
    id: str
    question: str
    is_impossible: bool
    answers: list[AnswerSpan] = field(default_factory=list)
    plausible_answers: list[AnswerSpan] = field(default_factory=list)


@dataclass
class Paragraph:
    context: str
    qas: list[QAItem]


@dataclass
class Domain:
    title: str
    paragraphs: list[Paragraph]


@dataclass
class SquadDataset:
    domains: list[Domain]
    version: str = SQUAD_VERSION

    def qa_items(self):
        for d in self.domains:
            for p in d.paragraphs:
                for qa in p.qas:
                    yield p, qa

    def n_questions(self) -> int:
        return sum(1 for _ in self.qa_items())


def detokenize_with_map(tokens: list[str]) -> tuple[str, list[tuple[int, int]]]:
    """Join tokens into text, returning per-token half-open char ranges.

    ``text[start:end] == token`` holds for every returned range whatever
    the spacing decisions were.
    """
    if not tokens:
        raise ValidationError("cannot detokenize an empty token list")
    parts: list[str] = []
    offsets: list[tuple[int, int]] = []
    pos = 0
    prev: str | None = None
    for tok in tokens:
        space = prev is not None
        if tok in _CLOSING or tok in _GLUE:
            space = False
        if prev is not None and (prev in _OPENING or prev in _GLUE):
            space = False
        if space:
            parts.append(" ")
            pos += 1
        parts.append(tok)
        offsets.append((pos, pos + len(tok)))
        pos += len(tok)
        prev = tok
    return "".join(parts), offsets


def _abstract_rng(seed: int, abstract_id: str) -> random.Random:
    # stable across processes (unlike hash()); parallel conversion order
    # therefore cannot change which question a sentence gets
    digest = hashlib.sha256(f"{seed}:{abstract_id}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def convert_abstract(
    abstract: TokenizedAbstract,
    pio_class: ClassLabel,
    templates: QuestionTemplateSet,
    mode: ConvertMode,
    subclass_filter: set[SubClass] | None = None,
) -> list[Paragraph]:
    """Convert one abstract into per-sentence paragraphs for one class.

    With ``subclass_filter`` set (P only), only annotations carrying one of
    those subclasses count as answers; otherwise only plain span
    annotations (subclass None) do. Spans crossing a sentence boundary are
    clipped to the sentence with a logged warning.
    """
    if pio_class not in PIO:
        raise ValidationError(f"conversion class must be P, I or O, got {pio_class}")
    rng = _abstract_rng(templates.rng_seed, abstract.id)
    id_class = pio_class.value
    subclass_for_pool: SubClass | None = None
    if subclass_filter is not None:
        names = ".".join(sorted(s.value for s in subclass_filter))
        id_class = f"{pio_class.value}.{names}"
        if len(subclass_filter) == 1:
            subclass_for_pool = next(iter(subclass_filter))

    paragraphs: list[Paragraph] = []
    for si, (ts, te) in enumerate(split_token_stream(abstract.tokens)):
        sent_tokens = abstract.tokens[ts:te]
        context, offsets = detokenize_with_map(sent_tokens)

        spans: list[AnswerSpan] = []
        seen: set[tuple[int, int]] = set()
        for ann in abstract.annotations:
            if ann.pio_class is not pio_class:
                continue
            if subclass_filter is None:
                if ann.subclass is not None:
                    continue
            elif ann.subclass not in subclass_filter:
                continue
            if ann.token_end <= ts or ann.token_start >= te:
                continue
            s, e = max(ann.token_start, ts), min(ann.token_end, te)
            if (s, e) != (ann.token_start, ann.token_end):
                log.warning(
                    "abstract %s: %s span [%d, %d) clipped to sentence %d",
                    abstract.id, pio_class.value, ann.token_start, ann.token_end, si,
                )
            char_start = offsets[s - ts][0]
            char_end = offsets[e - 1 - ts][1]
            if (char_start, char_end) in seen:
                continue
            seen.add((char_start, char_end))
            spans.append(AnswerSpan(text=context[char_start:char_end], answer_start=char_start))
        spans.sort(key=lambda a: (a.answer_start, len(a.text)))

        question = rng.choice(templates.pool_for(pio_class, subclass_for_pool))
        qa_id = f"{abstract.id}:{id_class}:{si}"
        if spans:
            answers = spans[:1] if mode is ConvertMode.TRAIN else spans
            qa = QAItem(id=qa_id, question=question, is_impossible=False, answers=answers)
        else:
            plausible = AnswerSpan(text=context[: offsets[0][1]], answer_start=0)
            qa = QAItem(
                id=qa_id, question=question, is_impossible=True, plausible_answers=[plausible]
            )
        paragraphs.append(Paragraph(context=context, qas=[qa]))
    return paragraphs


def convert_corpus(
    abstracts: list[TokenizedAbstract],
    pio_class: ClassLabel,
    templates: QuestionTemplateSet,
    mode: ConvertMode,
    split: Split | None = None,
    subclass_filter: set[SubClass] | None = None,
) -> SquadDataset:
    """Convert every abstract (optionally restricted to one split)."""
    domains = []
    for ab in abstracts:
        if split is not None and ab.split is not split:
            continue
        domains.append(
            Domain(
                title=ab.id,
                paragraphs=convert_abstract(ab, pio_class, templates, mode, subclass_filter),
            )
        )
    return SquadDataset(domains=domains)


def mix_augmentation(
    converted: SquadDataset, squad_source: SquadDataset, n_domains: int, seed: int
) -> SquadDataset:
    """Shuffle ``n_domains`` sampled source domains into the converted data.

    Sampling and the final shuffle are both driven by ``seed``; the
    converted domains are all retained.
    """
    if not (0 <= n_domains <= len(squad_source.domains)):
        raise ValidationError(
            f"n_domains must be in [0, {len(squad_source.domains)}], got {n_domains}"
        )
    rng = random.Random(seed)
    sampled = rng.sample(squad_source.domains, n_domains)
    combined = list(converted.domains) + sampled
    rng.shuffle(combined)
    mixed = SquadDataset(domains=combined, version=converted.version)
    ids: set[str] = set()
    for _, qa in mixed.qa_items():
        if qa.id in ids:
            raise ValidationError(f"duplicate qa id after augmentation: {qa.id}")
        ids.add(qa.id)
    return mixed


@dataclass
class Violation:
    kind: str
    where: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, where: str, message: str) -> None:
        self.violations.append(Violation(kind, where, message))


def validate_squad(ds: SquadDataset) -> ValidationReport:
    """Report every structural violation; an empty report means valid."""
    report = ValidationReport()
    seen_ids: set[str] = set()
    for d in ds.domains:
        for pi, p in enumerate(d.paragraphs):
            where = f"{d.title}[{pi}]"
            if not p.context:
                report.add("empty-context", where, "paragraph has empty context")
            if not p.qas:
                report.add("empty-qas", where, "paragraph has no questions")
            for qa in p.qas:
                if qa.id in seen_ids:
                    report.add("duplicate-id", qa.id, "qa id occurs more than once")
                seen_ids.add(qa.id)
                if qa.is_impossible:
                    if qa.answers:
                        report.add("impossible-with-answers", qa.id, "impossible item has answers")
                    for pa in qa.plausible_answers:
                        if pa.answer_start != 0:
                            report.add(
                                "plausible-start", qa.id,
                                f"plausible answer starts at {pa.answer_start}, expected 0",
                            )
                else:
                    if not qa.answers:
                        report.add("possible-without-answers", qa.id, "possible item has no answers")
                    for a in qa.answers:
                        got = p.context[a.answer_start : a.answer_start + len(a.text)]
                        if got != a.text:
                            report.add(
                                "substring-mismatch", qa.id,
                                f"answer {a.text!r} != context[{a.answer_start}:"
                                f"{a.answer_start + len(a.text)}] == {got!r}",
                            )
    return report


def possible_fraction(ds: SquadDataset) -> float:
    """Fraction of questions that are answerable."""
    total = 0
    possible = 0
    for _, qa in ds.qa_items():
        total += 1
        possible += 0 if qa.is_impossible else 1
    if total == 0:
        raise ValidationError("dataset has no questions")
    return possible / total


# --- JSON (de)serialization, bit-compatible with the public v2 format -------


def to_json_dict(ds: SquadDataset) -> dict:
    data = []
    for d in ds.domains:
        paragraphs = []
        for p in d.paragraphs:
            qas = []
            for qa in p.qas:
                entry: dict = {
                    "id": qa.id,
                    "question": qa.question,
                    "answers": [
                        {"text": a.text, "answer_start": a.answer_start} for a in qa.answers
                    ],
                    "is_impossible": qa.is_impossible,
                }
                if qa.is_impossible:
                    entry["plausible_answers"] = [
                        {"text": a.text, "answer_start": a.answer_start}
                        for a in qa.plausible_answers
                    ]
                qas.append(entry)
            paragraphs.append({"context": p.context, "qas": qas})
        data.append({"title": d.title, "paragraphs": paragraphs})
    return {"version": ds.version, "data": data}


def from_json_dict(payload: dict) -> SquadDataset:
    domains = []
    for d in payload.get("data", []):
        paragraphs = []
        for p in d.get("paragraphs", []):
            qas = []
            for q in p.get("qas", []):
                qas.append(
                    QAItem(
                        id=str(q["id"]),
                        question=q.get("question", ""),
                        is_impossible=bool(q.get("is_impossible", False)),
                        answers=[
                            AnswerSpan(a["text"], int(a["answer_start"]))
                            for a in q.get("answers", [])
                        ],
                        plausible_answers=[
                            AnswerSpan(a["text"], int(a["answer_start"]))
                            for a in q.get("plausible_answers", [])
                        ],
                    )
                )
            paragraphs.append(Paragraph(context=p["context"], qas=qas))
        domains.append(Domain(title=d.get("title", ""), paragraphs=paragraphs))
    return SquadDataset(domains=domains, version=payload.get("version", SQUAD_VERSION))


def save_squad(ds: SquadDataset, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(to_json_dict(ds), fh, ensure_ascii=False)


def load_squad(path: str | Path) -> SquadDataset:
    with Path(path).open("r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
