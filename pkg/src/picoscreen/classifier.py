"""Multi-class, multi-label sentence classification over an encoder.

A linear head on the encoder's sequence-level output is trained with
per-class sigmoid cross-entropy against multi-hot targets, so the seven
class probabilities are independent and need not sum to one. Label
assignment (argmax or thresholding) is a separate, post-hoc step.
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

from .corpus import Sentence
from .encoders import EncoderHandle
from .errors import ValidationError
from .labels import CLASS_ORDER, ClassLabel, N_CLASSES

log = logging.getLogger(__name__)

ARGMAX = "argmax"

_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainingConfig:
    max_seq_len: int = 64
    batch_size: int = 32
    learning_rate: float = 2e-5
    warmup_proportion: float = 0.1
    epochs: int = 2
    seed: int = 42
    weight_decay: float = 0.01

    def __post_init__(self):
        if min(self.max_seq_len, self.batch_size, self.epochs) <= 0:
            raise ValidationError("max_seq_len, batch_size and epochs must be positive")
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if not (0 <= self.warmup_proportion < 1):
            raise ValidationError("warmup_proportion must be in [0, 1)")


@dataclass(frozen=True)
class ProbabilityVector:
    """Seven independent class probabilities in the fixed class order."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != N_CLASSES:
            raise ValidationError(f"expected {N_CLASSES} probabilities, got {len(self.values)}")
        if any(not (0.0 <= v <= 1.0) for v in self.values):
            raise ValidationError("probabilities must lie in [0, 1]")

    def __getitem__(self, label: ClassLabel) -> float:
        return self.values[CLASS_ORDER.index(label)]

    def as_dict(self) -> dict[str, float]:
        return {cls.value: v for cls, v in zip(CLASS_ORDER, self.values)}


def assign_labels(probs: ProbabilityVector, policy: str | float) -> set[ClassLabel]:
    """Map probabilities to a label set.

    ``policy`` is either the string ``"argmax"`` (singleton set, ties
    broken by the fixed class order) or a numeric threshold t in [0, 1]
    assigning every class with probability >= t (possibly none).
    """
    if isinstance(policy, str):
        if policy != ARGMAX:
            raise ValidationError(f"unknown assignment policy {policy!r}")
        best = max(range(N_CLASSES), key=lambda i: (probs.values[i], -i))
        return {CLASS_ORDER[best]}
    t = float(policy)
    if not (0.0 <= t <= 1.0):
        raise ValidationError(f"threshold must be in [0, 1], got {t}")
    return {cls for cls, v in zip(CLASS_ORDER, probs.values) if v >= t}


def _decay_param_groups(modules: list[torch.nn.Module], weight_decay: float):
    decay, no_decay = [], []
    for module in modules:
        for name, param in module.named_parameters():
            if not param.requires_grad:
                continue
            if name.endswith("bias") or "LayerNorm" in name or "layer_norm" in name:
                no_decay.append(param)
            else:
                decay.append(param)
    return [
        {"params": decay, "weight_decay": weight_decay},
        {"params": no_decay, "weight_decay": 0.0},
    ]


class ClassifierModel:
    """A trained sentence classifier: encoder plus 7-way linear head."""

    def __init__(
        self,
        encoder: EncoderHandle,
        head: torch.nn.Linear,
        config: TrainingConfig,
        metadata: dict,
    ):
        if head.out_features != N_CLASSES:
            raise ValidationError(f"head must emit {N_CLASSES} logits")
        self.encoder = encoder
        self.head = head
        self.config = config
        self.metadata = metadata
        self.encoder.model.eval()
        self.head.eval()

    @property
    def lineage(self) -> str:
        return self.metadata["lineage"]

    def predict(self, sentences: list[str], batch_size: int = 64) -> list[ProbabilityVector]:
        """One probability vector per sentence; over-long input is truncated."""
        out: list[ProbabilityVector] = []
        tok = self.encoder.tokenizer
        with torch.no_grad():
            for i in range(0, len(sentences), batch_size):
                chunk = sentences[i : i + batch_size]
                enc = tok(
                    chunk,
                    truncation=True,
                    max_length=self.config.max_seq_len,
                    padding=True,
                    return_tensors="pt",
                )
                pooled = self.encoder.model(
                    input_ids=enc["input_ids"],
                    attention_mask=enc["attention_mask"],
                    token_type_ids=enc.get("token_type_ids"),
                ).pooler_output
                probs = torch.sigmoid(self.head(pooled)).numpy()
                probs = np.clip(probs, 0.0, 1.0)
                out.extend(ProbabilityVector(tuple(float(v) for v in row)) for row in probs)
        return out

    def save(self, target: str | Path) -> Path:
        target = Path(target)
        target.mkdir(parents=True, exist_ok=True)
        self.encoder.model.save_pretrained(target / "encoder")
        self.encoder.tokenizer.save_pretrained(target / "encoder")
        torch.save(self.head.state_dict(), target / "head.pt")
        manifest = {
            "format_version": _FORMAT_VERSION,
            "kind": "sentence-classifier",
            "class_order": [c.value for c in CLASS_ORDER],
            "training_config": asdict(self.config),
            "metadata": self.metadata,
        }
        (target / "model.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
        return target

    @classmethod
    def load(cls, source: str | Path) -> "ClassifierModel":
        source = Path(source)
        manifest = json.loads((source / "model.json").read_text(encoding="utf-8"))
        if manifest.get("kind") != "sentence-classifier":
            raise ValidationError(f"{source} is not a sentence-classifier artifact")
        if manifest["class_order"] != [c.value for c in CLASS_ORDER]:
            raise ValidationError(f"{source}: class order manifest does not match this build")
        encoder = EncoderHandle.load(str(source / "encoder"))
        head = torch.nn.Linear(encoder.hidden_size, N_CLASSES)
        head.load_state_dict(torch.load(source / "head.pt", weights_only=True))
        config = TrainingConfig(**manifest["training_config"])
        return cls(encoder=encoder, head=head, config=config, metadata=manifest["metadata"])


def _corpus_fingerprint(pairs: list[tuple[str, frozenset]]) -> str:
    h = hashlib.sha256()
    for text, labels in pairs:
        h.update(text.encode("utf-8"))
        h.update(",".join(sorted(l.value for l in labels)).encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()[:16]


def train(
    train_data: list[tuple[Sentence | str, set[ClassLabel]]],
    config: TrainingConfig,
    encoder: EncoderHandle,
) -> ClassifierModel:
    """Fine-tune the encoder plus a fresh linear head.

    ``train_data`` pairs sentences (or raw strings) with their gold label
    sets. The passed encoder is copied, never mutated, so repeated runs
    from the same handle are reproducible.
    """
    if not train_data:
        raise ValidationError("empty training data")
    pairs: list[tuple[str, frozenset]] = []
    for sent, labels in train_data:
        if not labels:
            raise ValidationError("every training sentence needs at least one gold label")
        text = sent.text if isinstance(sent, Sentence) else sent
        pairs.append((text, frozenset(labels)))

    torch.manual_seed(config.seed)
    model = copy.deepcopy(encoder.model)
    model.train()
    head = torch.nn.Linear(model.config.hidden_size, N_CLASSES)
    head.train()
    tok = encoder.tokenizer

    steps_per_epoch = (len(pairs) + config.batch_size - 1) // config.batch_size
    total_steps = steps_per_epoch * config.epochs
    optimizer = torch.optim.AdamW(
        _decay_param_groups([model, head], config.weight_decay), lr=config.learning_rate
    )
    scheduler = get_linear_schedule_with_warmup(
        optimizer,
        num_warmup_steps=int(config.warmup_proportion * total_steps),
        num_training_steps=total_steps,
    )
    loss_fn = torch.nn.BCEWithLogitsLoss()
    shuffler = random.Random(config.seed)

    started = time.time()
    epoch_losses: list[float] = []
    order = list(range(len(pairs)))
    for epoch in range(config.epochs):
        shuffler.shuffle(order)
        losses = []
        for b in range(0, len(order), config.batch_size):
            batch = [pairs[i] for i in order[b : b + config.batch_size]]
            enc = tok(
                [text for text, _ in batch],
                truncation=True,
                max_length=config.max_seq_len,
                padding=True,
                return_tensors="pt",
            )
            targets = torch.zeros(len(batch), N_CLASSES)
            for row, (_, labels) in enumerate(batch):
                for label in labels:
                    targets[row, CLASS_ORDER.index(label)] = 1.0
            pooled = model(
                input_ids=enc["input_ids"],
                attention_mask=enc["attention_mask"],
                token_type_ids=enc.get("token_type_ids"),
            ).pooler_output
            loss = loss_fn(head(pooled), targets)
            loss.backward()
            optimizer.step()
            scheduler.step()
            optimizer.zero_grad()
            losses.append(loss.item())
        epoch_losses.append(float(np.mean(losses)))
        log.info("epoch %d/%d: mean loss %.4f", epoch + 1, config.epochs, epoch_losses[-1])
    if len(epoch_losses) > 1 and epoch_losses[-1] >= epoch_losses[0]:
        log.warning(
            "training loss did not improve: first epoch %.4f, last epoch %.4f",
            epoch_losses[0], epoch_losses[-1],
        )

    fingerprint = _corpus_fingerprint(pairs)
    metadata = {
        "lineage": f"{encoder.checkpoint_id}:{fingerprint}:{config.seed}",
        "encoder_checkpoint": encoder.checkpoint_id,
        "corpus_fingerprint": fingerprint,
        "n_sentences": len(pairs),
        "epoch_losses": epoch_losses,
        "wall_clock_s": round(time.time() - started, 2),
    }
    model.eval()
    head.eval()
    trained = EncoderHandle(checkpoint_id=encoder.checkpoint_id, model=model, tokenizer=tok)
    return ClassifierModel(encoder=trained, head=head, config=config, metadata=metadata)
