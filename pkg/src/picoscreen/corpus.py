"""Loading, filtering and splitting of the two source corpora.

The sentence corpus is a line-oriented UTF-8 file with one labelled
sentence per record::

    <abstract_id> TAB <label_letter> TAB <sentence_text>

Blank lines may separate abstracts; contiguous runs of the same id are
grouped either way. The entity corpus is a directory of per-document
token files plus per-class annotation files; see ``load_entity_corpus``.
"""

from __future__ import annotations

import enum
import logging
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusFormatError, ValidationError
from .labels import PIO, ClassLabel, SubClass, parse_label
from .segmentation import SENTENCE_SEPARATOR

log = logging.getLogger(__name__)


class Source(enum.Enum):
    SENTENCE_CORPUS = "SENTENCE_CORPUS"
    ENTITY_CORPUS = "ENTITY_CORPUS"
    RAW = "RAW"


class Split(enum.Enum):
    TRAIN = "TRAIN"
    EXPERT_TEST = "EXPERT_TEST"


@dataclass(frozen=True)
class Sentence:
    text: str
    char_start: int
    gold_labels: frozenset[ClassLabel]

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("sentence text is empty after trimming")
        if self.char_start < 0:
            raise ValidationError("char_start must be non-negative")
        if not self.gold_labels:
            raise ValidationError("gold_labels must be non-empty")


@dataclass
class Abstract:
    id: str
    sentences: list[Sentence]
    source: Source

    def __post_init__(self):
        if not self.sentences:
            raise ValidationError(f"abstract {self.id}: no sentences")
        prev = -1
        for s in self.sentences:
            if s.char_start <= prev:
                raise ValidationError(f"abstract {self.id}: char_start not strictly increasing")
            prev = s.char_start

    @property
    def text(self) -> str:
        """Abstract text reconstructed by joining sentences with the separator."""
        return SENTENCE_SEPARATOR.join(s.text for s in self.sentences)

    def label_set(self) -> set[ClassLabel]:
        out: set[ClassLabel] = set()
        for s in self.sentences:
            out |= s.gold_labels
        return out


@dataclass(frozen=True)
class EntityAnnotation:
    pio_class: ClassLabel
    token_start: int
    token_end: int  # half-open
    subclass: SubClass | None = None

    def __post_init__(self):
        if self.pio_class not in PIO:
            raise ValidationError(f"annotation class must be P, I or O, got {self.pio_class}")
        if not (0 <= self.token_start < self.token_end):
            raise ValidationError(f"bad token range [{self.token_start}, {self.token_end})")
        if self.subclass is not None and self.pio_class is not ClassLabel.P:
            raise ValidationError("subclass is only permitted on P annotations")


@dataclass
class TokenizedAbstract:
    id: str
    tokens: list[str]
    annotations: list[EntityAnnotation]
    split: Split

    def __post_init__(self):
        if not self.tokens:
            raise ValidationError(f"abstract {self.id}: no tokens")
        for a in self.annotations:
            if a.token_end > len(self.tokens):
                raise ValidationError(
                    f"abstract {self.id}: annotation [{a.token_start}, {a.token_end}) "
                    f"exceeds {len(self.tokens)} tokens"
                )


def load_sentence_corpus(path: str | Path) -> list[Abstract]:
    """Parse the sentence corpus file into Abstracts.

    Raises CorpusFormatError (with the line number) on malformed records
    and ValidationError on unknown label letters. Sentences that are empty
    after trimming are dropped with a warning; abstracts left with zero
    sentences are dropped likewise.
    """
    path = Path(path)
    abstracts: list[Abstract] = []
    current_id: str | None = None
    current: list[tuple[str, ClassLabel]] = []

    def flush():
        nonlocal current_id, current
        if current_id is None:
            return
        if not current:
            log.warning("abstract %s has no usable sentences; dropped", current_id)
            current_id = None
            return
        sentences = []
        offset = 0
        for text, label in current:
            sentences.append(Sentence(text=text, char_start=offset, gold_labels=frozenset({label})))
            offset += len(text) + len(SENTENCE_SEPARATOR)
        abstracts.append(Abstract(id=current_id, sentences=sentences, source=Source.SENTENCE_CORPUS))
        current_id = None
        current = []

    seen_ids: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush()
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CorpusFormatError(
                    f"expected 3 tab-separated fields, got {len(parts)}",
                    path=str(path), line=lineno,
                )
            abs_id, label_str, text = parts
            if not abs_id.strip():
                raise CorpusFormatError("empty abstract id", path=str(path), line=lineno)
            try:
                label = parse_label(label_str)
            except ValueError as e:
                raise ValidationError(f"{path}:{lineno}: {e}") from None
            if abs_id != current_id:
                flush()
                if abs_id in seen_ids:
                    raise CorpusFormatError(
                        f"abstract id {abs_id!r} appears in two non-contiguous blocks",
                        path=str(path), line=lineno,
                    )
                current_id = abs_id
                seen_ids.add(abs_id)
            if not text.strip():
                log.warning("%s:%d: empty sentence dropped", path, lineno)
                continue
            current.append((text.strip(), label))
    flush()
    return abstracts


def save_sentence_corpus(abstracts: list[Abstract], path: str | Path) -> None:
    """Write abstracts back out in the canonical record format."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for i, ab in enumerate(abstracts):
            if i:
                fh.write("\n")
            for s in ab.sentences:
                # single-label source format: one line per (sentence, label)
                for label in sorted(s.gold_labels, key=lambda l: l.value):
                    fh.write(f"{ab.id}\t{label.value}\t{s.text}\n")


def filter_pio_complete(abstracts: list[Abstract]) -> list[Abstract]:
    """Keep abstracts that contain at least one P, one I and one O sentence."""
    wanted = set(PIO)
    return [a for a in abstracts if wanted <= a.label_set()]


def split_train_test(
    abstracts: list[Abstract], ratio: float, seed: int
) -> tuple[list[Abstract], list[Abstract]]:
    """Deterministic split by abstract; no abstract straddles the split.

    ``ratio`` is the train fraction. Train size is round(ratio * n),
    clamped so both sides are non-empty whenever n >= 2.
    """
    if not (0 < ratio < 1):
        raise ValidationError(f"ratio must be in (0, 1), got {ratio}")
    order = list(abstracts)
    random.Random(seed).shuffle(order)
    n = len(order)
    n_train = round(ratio * n)
    if n >= 2:
        n_train = min(max(n_train, 1), n - 1)
    return order[:n_train], order[n_train:]


def count_sentences(abstracts: list[Abstract]) -> int:
    return sum(len(a.sentences) for a in abstracts)


# --- entity corpus ---------------------------------------------------------

# directory names mirroring the published per-class layout
_CLASS_DIRS = {
    "participants": ClassLabel.P,
    "interventions": ClassLabel.I,
    "outcomes": ClassLabel.O,
}
_DETAIL_DIR = "participants_detailed"
_SUBCLASS_CODES = {1: SubClass.AGE, 2: SubClass.GENDER, 3: SubClass.CONDITION, 4: SubClass.SIZE}
_SPLIT_DIRS = {"train": Split.TRAIN, "test": Split.EXPERT_TEST}


def coalesce_runs(values: list[int]) -> list[tuple[int, int, int]]:
    """Collapse a per-token label sequence into (start, end, label) runs.

    Zero labels are background and produce no run; equal non-zero labels
    merge while contiguous.
    """
    runs: list[tuple[int, int, int]] = []
    start = None
    current = 0
    for i, v in enumerate(values):
        if v != current:
            if current != 0 and start is not None:
                runs.append((start, i, current))
            start = i if v != 0 else None
            current = v
    if current != 0 and start is not None:
        runs.append((start, len(values), current))
    return runs


def expand_runs(runs: list[tuple[int, int, int]], length: int) -> list[int]:
    """Inverse of coalesce_runs (used by the round-trip invariant)."""
    out = [0] * length
    for s, e, v in runs:
        for i in range(s, e):
            out[i] = v
    return out


def _read_ann(path: Path, n_tokens: int, abs_id: str) -> list[int]:
    raw = path.read_text(encoding="utf-8").strip()
    values = [int(v) for v in raw.split(",")] if raw else []
    if len(values) != n_tokens:
        raise ValidationError(
            f"abstract {abs_id}: annotation file {path.name} has {len(values)} labels "
            f"for {n_tokens} tokens"
        )
    return values


def load_entity_corpus(dir: str | Path) -> list[TokenizedAbstract]:
    """Load the token-annotated entity corpus.

    Expected layout::

        <dir>/documents/<id>.tokens                      one token per line
        <dir>/annotations/participants/{train,test}/<id>.ann
        <dir>/annotations/interventions/{train,test}/<id>.ann
        <dir>/annotations/outcomes/{train,test}/<id>.ann
        <dir>/annotations/participants_detailed/{train,test}/<id>.ann   (optional)

    ``.ann`` files hold comma-separated per-token integer labels (0/1 for
    the three span classes; 0-4 for the detailed P file where 1-4 mean
    age, gender, condition, size). The split is taken from the directory
    an abstract's annotation files live in.
    """
    root = Path(dir)
    doc_dir = root / "documents"
    ann_root = root / "annotations"
    if not doc_dir.is_dir():
        raise ValidationError(f"missing documents directory under {root}")

    out: list[TokenizedAbstract] = []
    for token_file in sorted(doc_dir.glob("*.tokens")):
        abs_id = token_file.stem
        tokens = [t for t in token_file.read_text(encoding="utf-8").splitlines() if t != ""]
        if not tokens:
            raise ValidationError(f"abstract {abs_id}: empty token file")

        split: Split | None = None
        annotations: list[EntityAnnotation] = []
        for class_dir, pio in _CLASS_DIRS.items():
            for split_name, split_enum in _SPLIT_DIRS.items():
                ann_path = ann_root / class_dir / split_name / f"{abs_id}.ann"
                if not ann_path.exists():
                    continue
                if split is None:
                    split = split_enum
                elif split is not split_enum:
                    raise ValidationError(f"abstract {abs_id}: listed in both train and test")
                values = _read_ann(ann_path, len(tokens), abs_id)
                for s, e, _ in coalesce_runs(values):
                    annotations.append(EntityAnnotation(pio, s, e))
        for split_name, split_enum in _SPLIT_DIRS.items():
            ann_path = ann_root / _DETAIL_DIR / split_name / f"{abs_id}.ann"
            if not ann_path.exists():
                continue
            if split is not None and split is not split_enum:
                raise ValidationError(f"abstract {abs_id}: listed in both train and test")
            values = _read_ann(ann_path, len(tokens), abs_id)
            for s, e, v in coalesce_runs(values):
                if v not in _SUBCLASS_CODES:
                    raise ValidationError(f"abstract {abs_id}: unknown subclass code {v}")
                annotations.append(EntityAnnotation(ClassLabel.P, s, e, subclass=_SUBCLASS_CODES[v]))

        if split is None:
            log.warning("abstract %s has no annotation files; dropped", abs_id)
            continue
        out.append(TokenizedAbstract(id=abs_id, tokens=tokens, annotations=annotations, split=split))
    return out
