"""Extractive question answering with a span-classification head.

The head scores every subword position as answer start and end; decoding
picks the best valid pair, maps it back to character offsets through the
tokenizer alignment, and compares it against the no-answer score so
unanswerable questions come back empty. Long contexts are handled with
overlapping strided windows.
"""

from __future__ import annotations

import copy
import hashlib
import json
import logging
import random
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
from transformers import get_linear_schedule_with_warmup

from .classifier import _decay_param_groups
from .encoders import EncoderHandle
from .errors import ValidationError
from .squadgen import SquadDataset, validate_squad

log = logging.getLogger(__name__)

_FORMAT_VERSION = 1
_WARMUP_PROPORTION = 0.1


@dataclass(frozen=True)
class QATrainingConfig:
    batch_size: int = 18
    learning_rate: float = 3e-5
    epochs: int = 2
    max_context_len: int = 150  # question + context subword budget per window
    doc_stride: int = 64
    seed: int = 42
    weight_decay: float = 0.01
    max_answer_len: int = 30  # subwords

    def __post_init__(self):
        if min(self.batch_size, self.epochs, self.max_context_len, self.max_answer_len) <= 0:
            raise ValidationError("batch_size, epochs, max_context_len, max_answer_len must be positive")
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if not (0 < self.doc_stride < self.max_context_len):
            raise ValidationError("doc_stride must be positive and smaller than max_context_len")


@dataclass(frozen=True)
class SpanPrediction:
    text: str
    start_char: int
    end_char: int
    span_score: float
    no_answer_score: float
    is_no_answer: bool

    def __post_init__(self):
        if not self.is_no_answer and self.start_char >= self.end_char:
            raise ValidationError("answer span must be non-empty")
        if not (np.isfinite(self.span_score) and np.isfinite(self.no_answer_score)):
            raise ValidationError("span scores must be finite")


def decode_best_span(
    start_logits: np.ndarray,
    end_logits: np.ndarray,
    valid: np.ndarray,
    max_answer_len: int,
) -> tuple[int, int, float] | None:
    """Best (start, end) token pair by summed logits.

    Considers exactly the pairs with start <= end, both positions valid,
    and inclusive length <= max_answer_len; equivalent to brute force over
    all position pairs. Returns None when no valid pair exists.
    """
    idx = np.flatnonzero(valid)
    if idx.size == 0:
        return None
    scores = start_logits[idx][:, None] + end_logits[idx][None, :]
    span_len = idx[None, :] - idx[:, None] + 1
    allowed = (span_len >= 1) & (span_len <= max_answer_len)
    scores = np.where(allowed, scores, -np.inf)
    flat = int(np.argmax(scores))
    row, col = divmod(flat, idx.size)
    if not np.isfinite(scores[row, col]):
        return None
    return int(idx[row]), int(idx[col]), float(scores[row, col])


def _build_features(tokenizer, questions, contexts, config: QATrainingConfig, answers=None):
    """Windowed features: one entry per (example, window).

    ``answers`` is an optional list of (answer_start, answer_text) or None
    per example; when given, start/end token targets are produced with the
    no-answer target at the leading marker position.
    """
    enc = tokenizer(
        questions,
        contexts,
        truncation="only_second",
        max_length=config.max_context_len,
        stride=config.doc_stride,
        return_overflowing_tokens=True,
        return_offsets_mapping=True,
        padding="max_length",
    )
    n_windows = len(enc["input_ids"])
    features = {
        "input_ids": enc["input_ids"],
        "attention_mask": enc["attention_mask"],
        "token_type_ids": enc.get("token_type_ids"),
        "offset_mapping": enc["offset_mapping"],
        "sample_index": enc["overflow_to_sample_mapping"],
        "sequence_ids": [enc.sequence_ids(i) for i in range(n_windows)],
    }
    if answers is None:
        return features

    starts, ends = [], []
    for w in range(n_windows):
        sample = features["sample_index"][w]
        answer = answers[sample]
        if answer is None:
            starts.append(0)
            ends.append(0)
            continue
        answer_start, answer_text = answer
        answer_end = answer_start + len(answer_text)
        seq_ids = features["sequence_ids"][w]
        offsets = features["offset_mapping"][w]
        context_start = seq_ids.index(1)
        context_end = len(seq_ids) - 1 - seq_ids[::-1].index(1)
        if offsets[context_start][0] > answer_start or offsets[context_end][1] < answer_end:
            starts.append(0)  # answer not inside this window
            ends.append(0)
            continue
        t = context_start
        while t <= context_end and offsets[t][0] <= answer_start:
            t += 1
        starts.append(t - 1)
        t = context_end
        while t >= context_start and offsets[t][1] >= answer_end:
            t -= 1
        ends.append(t + 1)
    features["start_positions"] = starts
    features["end_positions"] = ends
    return features


def _context_mask(feature_row) -> np.ndarray:
    seq_ids, offsets, attention = feature_row
    mask = np.zeros(len(seq_ids), dtype=bool)
    for i, (sid, att) in enumerate(zip(seq_ids, attention)):
        if sid == 1 and att == 1 and offsets[i][1] > offsets[i][0]:
            mask[i] = True
    return mask


class QAModel:
    """A trained span extractor for one class (or a mixed dataset)."""

    def __init__(
        self,
        encoder: EncoderHandle,
        head: torch.nn.Linear,
        config: QATrainingConfig,
        trained_class: str,
        metadata: dict,
    ):
        if head.out_features != 2:
            raise ValidationError("span head must emit exactly (start, end) logits")
        self.encoder = encoder
        self.head = head
        self.config = config
        self.trained_class = trained_class
        self.metadata = metadata
        self.encoder.model.eval()
        self.head.eval()

    @property
    def lineage(self) -> str:
        return self.metadata["lineage"]

    def _window_logits(self, features, batch_size: int = 32):
        n = len(features["input_ids"])
        start_all = np.empty((n, len(features["input_ids"][0])), dtype=np.float32)
        end_all = np.empty_like(start_all)
        with torch.no_grad():
            for b in range(0, n, batch_size):
                ids = torch.tensor(features["input_ids"][b : b + batch_size])
                att = torch.tensor(features["attention_mask"][b : b + batch_size])
                tti = features["token_type_ids"]
                tti_t = torch.tensor(tti[b : b + batch_size]) if tti is not None else None
                hidden = self.encoder.model(
                    input_ids=ids, attention_mask=att, token_type_ids=tti_t
                ).last_hidden_state
                logits = self.head(hidden)
                start_all[b : b + batch_size] = logits[..., 0].numpy()
                end_all[b : b + batch_size] = logits[..., 1].numpy()
        return start_all, end_all

    def _decode_example(
        self, windows, start_all, end_all, features, contexts, null_threshold: float
    ) -> SpanPrediction:
        best: tuple[float, int, int, int] | None = None  # score, window, tok_start, tok_end
        null_score = np.inf
        for w in windows:
            null_score = min(null_score, float(start_all[w][0] + end_all[w][0]))
            valid = _context_mask(
                (features["sequence_ids"][w], features["offset_mapping"][w],
                 features["attention_mask"][w])
            )
            found = decode_best_span(
                start_all[w], end_all[w], valid, self.config.max_answer_len
            )
            if found is not None:
                ts, te, score = found
                if best is None or score > best[0]:
                    best = (score, w, ts, te)
        context = contexts[features["sample_index"][windows[0]]]
        if best is None:
            return SpanPrediction("", 0, 0, float(null_score), float(null_score), True)
        score, w, ts, te = best
        offsets = features["offset_mapping"][w]
        char_start, char_end = offsets[ts][0], offsets[te][1]
        if null_score - score > null_threshold:
            return SpanPrediction("", 0, 0, float(score), float(null_score), True)
        return SpanPrediction(
            text=context[char_start:char_end],
            start_char=char_start,
            end_char=char_end,
            span_score=float(score),
            no_answer_score=float(null_score),
            is_no_answer=False,
        )

    def answer(
        self, question: str, context: str, n_best: int = 20, null_threshold: float = 0.0
    ) -> SpanPrediction:
        """Best answer span, or the no-answer prediction when it wins.

        ``n_best`` bounds nothing here (decoding is exact) and exists for
        interface parity with batch prediction tooling.
        """
        if not question or not context:
            raise ValidationError("question and context must be non-empty")
        _ = n_best
        features = _build_features(
            self.encoder.tokenizer, [question], [context], self.config
        )
        start_all, end_all = self._window_logits(features)
        windows = list(range(len(features["input_ids"])))
        return self._decode_example(
            windows, start_all, end_all, features, [context], null_threshold
        )

    def predict_dataset(
        self, ds: SquadDataset, null_threshold: float = 0.0, batch_size: int = 32
    ) -> dict[str, str]:
        """Reference predictions map: qa id -> answer string ("" = no answer)."""
        ids, questions, contexts = [], [], []
        for p, qa in ds.qa_items():
            ids.append(qa.id)
            questions.append(qa.question)
            contexts.append(p.context)
        out: dict[str, str] = {}
        chunk = 512
        for base in range(0, len(ids), chunk):
            qs = questions[base : base + chunk]
            cs = contexts[base : base + chunk]
            features = _build_features(self.encoder.tokenizer, qs, cs, self.config)
            start_all, end_all = self._window_logits(features, batch_size=batch_size)
            by_example: dict[int, list[int]] = {}
            for w, sample in enumerate(features["sample_index"]):
                by_example.setdefault(sample, []).append(w)
            for sample, windows in by_example.items():
                pred = self._decode_example(
                    windows, start_all, end_all, features, cs, null_threshold
                )
                out[ids[base + sample]] = pred.text if not pred.is_no_answer else ""
        return out

    def save(self, target: str | Path) -> Path:
        target = Path(target)
        target.mkdir(parents=True, exist_ok=True)
        self.encoder.model.save_pretrained(target / "encoder")
        self.encoder.tokenizer.save_pretrained(target / "encoder")
        torch.save(self.head.state_dict(), target / "head.pt")
        manifest = {
            "format_version": _FORMAT_VERSION,
            "kind": "qa-extractor",
            "trained_class": self.trained_class,
            "training_config": asdict(self.config),
            "metadata": self.metadata,
        }
        (target / "model.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
        return target

    @classmethod
    def load(cls, source: str | Path) -> "QAModel":
        source = Path(source)
        manifest = json.loads((source / "model.json").read_text(encoding="utf-8"))
        if manifest.get("kind") != "qa-extractor":
            raise ValidationError(f"{source} is not a qa-extractor artifact")
        encoder = EncoderHandle.load(str(source / "encoder"))
        head = torch.nn.Linear(encoder.hidden_size, 2)
        head.load_state_dict(torch.load(source / "head.pt", weights_only=True))
        return cls(
            encoder=encoder,
            head=head,
            config=QATrainingConfig(**manifest["training_config"]),
            trained_class=manifest["trained_class"],
            metadata=manifest["metadata"],
        )


def train_qa(
    data: SquadDataset,
    config: QATrainingConfig,
    encoder: EncoderHandle,
    trained_class: str = "MIXED",
    augmentation_domains: int | None = None,
) -> QAModel:
    """Fine-tune a span head on a converted dataset.

    The dataset must validate cleanly; impossible items train the head to
    point both positions at the leading marker.
    """
    report = validate_squad(data)
    if not report.ok:
        first = "; ".join(f"{v.kind}@{v.where}" for v in report.violations[:5])
        raise ValidationError(
            f"dataset failed validation with {len(report.violations)} violations: {first}"
        )

    questions, contexts, answers = [], [], []
    for p, qa in data.qa_items():
        questions.append(qa.question)
        contexts.append(p.context)
        if qa.is_impossible:
            answers.append(None)
        else:
            a = qa.answers[0]
            answers.append((a.answer_start, a.text))
    if not questions:
        raise ValidationError("dataset has no questions")

    torch.manual_seed(config.seed)
    model = copy.deepcopy(encoder.model)
    model.train()
    head = torch.nn.Linear(model.config.hidden_size, 2)
    head.train()

    features = _build_features(encoder.tokenizer, questions, contexts, config, answers)
    n_windows = len(features["input_ids"])
    steps_per_epoch = (n_windows + config.batch_size - 1) // config.batch_size
    total_steps = steps_per_epoch * config.epochs
    optimizer = torch.optim.AdamW(
        _decay_param_groups([model, head], config.weight_decay), lr=config.learning_rate
    )
    scheduler = get_linear_schedule_with_warmup(
        optimizer,
        num_warmup_steps=int(_WARMUP_PROPORTION * total_steps),
        num_training_steps=total_steps,
    )
    loss_fn = torch.nn.CrossEntropyLoss()
    shuffler = random.Random(config.seed)

    started = time.time()
    order = list(range(n_windows))
    epoch_losses = []
    for epoch in range(config.epochs):
        shuffler.shuffle(order)
        losses = []
        for b in range(0, n_windows, config.batch_size):
            rows = order[b : b + config.batch_size]
            ids = torch.tensor([features["input_ids"][r] for r in rows])
            att = torch.tensor([features["attention_mask"][r] for r in rows])
            tti = features["token_type_ids"]
            tti_t = torch.tensor([tti[r] for r in rows]) if tti is not None else None
            start_t = torch.tensor([features["start_positions"][r] for r in rows])
            end_t = torch.tensor([features["end_positions"][r] for r in rows])
            hidden = model(input_ids=ids, attention_mask=att, token_type_ids=tti_t).last_hidden_state
            logits = head(hidden)
            loss = (loss_fn(logits[..., 0], start_t) + loss_fn(logits[..., 1], end_t)) / 2
            loss.backward()
            optimizer.step()
            scheduler.step()
            optimizer.zero_grad()
            losses.append(loss.item())
        epoch_losses.append(float(np.mean(losses)))
        log.info("qa epoch %d/%d: mean loss %.4f", epoch + 1, config.epochs, epoch_losses[-1])

    h = hashlib.sha256()
    for q, c in zip(questions, contexts):
        h.update(q.encode("utf-8"))
        h.update(c.encode("utf-8"))
    fingerprint = h.hexdigest()[:16]
    metadata = {
        "lineage": f"{encoder.checkpoint_id}:{fingerprint}:{config.seed}",
        "encoder_checkpoint": encoder.checkpoint_id,
        "corpus_fingerprint": fingerprint,
        "n_questions": len(questions),
        "n_windows": n_windows,
        "augmentation_domains": augmentation_domains,
        "epoch_losses": epoch_losses,
        "wall_clock_s": round(time.time() - started, 2),
    }
    model.eval()
    head.eval()
    trained = EncoderHandle(
        checkpoint_id=encoder.checkpoint_id, model=model, tokenizer=encoder.tokenizer
    )
    return QAModel(
        encoder=trained, head=head, config=config, trained_class=trained_class, metadata=metadata
    )
