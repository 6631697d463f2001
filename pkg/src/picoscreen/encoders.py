"""Uniform interface over pretrained contextual-encoder checkpoints.

Checkpoints are referenced by id and resolved from a local cache
directory (``PICOSCREEN_ENCODER_CACHE`` or an explicit ``cache_dir``);
nothing is ever fetched from the network. A ``roles.json`` file in the
cache maps the three conventional roles (base-uncased, scientific,
multilingual-cased) to concrete checkpoint ids.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
import transformers
from transformers import BertModel, BertTokenizerFast

from .errors import ValidationError

transformers.logging.disable_progress_bar()

CACHE_ENV = "PICOSCREEN_ENCODER_CACHE"
ROLES_FILE = "roles.json"

ROLE_BASE = "base-uncased"
ROLE_SCIENTIFIC = "scientific"
ROLE_MULTILINGUAL = "multilingual-cased"


class Casing(enum.Enum):
    CASED = "CASED"
    UNCASED = "UNCASED"


class Pooling(enum.Enum):
    MEAN = "MEAN"
    NONE = "NONE"


@dataclass(frozen=True)
class TokenizedInput:
    subword_ids: tuple[int, ...]
    pieces: tuple[str, ...]
    # half-open char ranges into the original text; None for special markers
    char_alignment: tuple[tuple[int, int] | None, ...]
    truncated: bool


def cache_dir(explicit: str | Path | None = None) -> Path:
    root = explicit or os.environ.get(CACHE_ENV)
    if root is None:
        raise ValidationError(
            f"no checkpoint cache configured; set {CACHE_ENV} or pass cache_dir"
        )
    return Path(root)


def resolve_checkpoint(checkpoint_id: str, explicit_cache: str | Path | None = None) -> Path:
    """Resolve an id (or a direct path) to a checkpoint directory."""
    direct = Path(checkpoint_id)
    if direct.is_dir() and (direct / "config.json").exists():
        return direct
    path = cache_dir(explicit_cache) / checkpoint_id
    if not (path / "config.json").exists():
        raise ValidationError(f"checkpoint {checkpoint_id!r} not found at {path}")
    return path


def resolve_role(role: str, explicit_cache: str | Path | None = None) -> str:
    roles_path = cache_dir(explicit_cache) / ROLES_FILE
    if not roles_path.exists():
        raise ValidationError(f"no {ROLES_FILE} in checkpoint cache {roles_path.parent}")
    roles = json.loads(roles_path.read_text(encoding="utf-8"))
    if role not in roles:
        raise ValidationError(f"role {role!r} not present in {roles_path}")
    return roles[role]


class EncoderHandle:
    """Immutable handle on a loaded encoder checkpoint.

    Safe to share across threads for inference. Training code takes the
    underlying module (``.model``) under exclusive access.
    """

    def __init__(self, checkpoint_id: str, model: BertModel, tokenizer: BertTokenizerFast):
        self.checkpoint_id = checkpoint_id
        self.model = model
        self.tokenizer = tokenizer
        self.hidden_size: int = model.config.hidden_size
        self.n_layers: int = model.config.num_hidden_layers
        lower = bool(getattr(tokenizer, "do_lower_case", False))
        self.casing = Casing.UNCASED if lower else Casing.CASED
        model.eval()

    @classmethod
    def load(cls, checkpoint_id: str, cache_dir: str | Path | None = None) -> "EncoderHandle":
        path = resolve_checkpoint(checkpoint_id, cache_dir)
        model = BertModel.from_pretrained(path)
        tokenizer = BertTokenizerFast.from_pretrained(path)
        return cls(checkpoint_id=checkpoint_id, model=model, tokenizer=tokenizer)

    @classmethod
    def load_role(cls, role: str, cache_dir: str | Path | None = None) -> "EncoderHandle":
        return cls.load(resolve_role(role, cache_dir), cache_dir)

    @property
    def vocab_size(self) -> int:
        return self.tokenizer.vocab_size

    def tokenize(self, text: str, max_len: int = 512) -> TokenizedInput:
        """Subword-tokenize with per-piece character alignment.

        Special markers get a ``None`` alignment; ``truncated`` is set when
        the input did not fit into ``max_len`` subword positions.
        """
        if not text:
            raise ValidationError("cannot tokenize empty text")
        enc = self.tokenizer(
            text,
            truncation=True,
            max_length=max_len,
            return_offsets_mapping=True,
            return_special_tokens_mask=True,
        )
        full = self.tokenizer(text, return_special_tokens_mask=True)
        alignment = tuple(
            None if special else (start, end)
            for (start, end), special in zip(enc["offset_mapping"], enc["special_tokens_mask"])
        )
        return TokenizedInput(
            subword_ids=tuple(enc["input_ids"]),
            pieces=tuple(self.tokenizer.convert_ids_to_tokens(enc["input_ids"])),
            char_alignment=alignment,
            truncated=len(full["input_ids"]) > len(enc["input_ids"]),
        )

    def _check_layers(self, layers: list[int]) -> None:
        if not layers:
            raise ValidationError("at least one layer index required")
        for layer in layers:
            if not (1 <= layer <= self.n_layers):
                raise ValidationError(
                    f"layer {layer} out of range [1, {self.n_layers}] for {self.checkpoint_id}"
                )

    def encode_layers(
        self, text: str, layers: list[int], pooling: Pooling = Pooling.MEAN, max_len: int = 128
    ) -> np.ndarray:
        """Representation of ``text`` from the requested encoder layers.

        Layer 1 is the first encoder layer and ``n_layers`` the top. MEAN
        pooling averages over non-special, non-padding positions and
        concatenates layers in request order (|layers| * hidden_size);
        NONE returns the per-subword vectors with the same concatenation.
        """
        return self.encode_batch([text], layers, pooling, max_len=max_len)[0]

    def encode_batch(
        self,
        texts: list[str],
        layers: list[int],
        pooling: Pooling = Pooling.MEAN,
        max_len: int = 128,
        batch_size: int = 64,
    ) -> np.ndarray | list[np.ndarray]:
        """Batched version of encode_layers; MEAN yields an (n, k*h) array."""
        self._check_layers(layers)
        if any(not t for t in texts):
            raise ValidationError("cannot encode empty text")
        pooled_rows: list[np.ndarray] = []
        per_token: list[np.ndarray] = []
        with torch.no_grad():
            for i in range(0, len(texts), batch_size):
                chunk = texts[i : i + batch_size]
                enc = self.tokenizer(
                    chunk,
                    truncation=True,
                    max_length=max_len,
                    padding=True,
                    return_special_tokens_mask=True,
                    return_tensors="pt",
                )
                special = enc.pop("special_tokens_mask")
                out = self.model(
                    input_ids=enc["input_ids"],
                    attention_mask=enc["attention_mask"],
                    token_type_ids=enc.get("token_type_ids"),
                    output_hidden_states=True,
                )
                # hidden_states[0] is the embedding output; layer L lives at index L
                stacked = torch.cat([out.hidden_states[l] for l in layers], dim=-1)
                keep = (enc["attention_mask"] == 1) & (special == 0)
                if pooling is Pooling.MEAN:
                    mask = keep.unsqueeze(-1).to(stacked.dtype)
                    sums = (stacked * mask).sum(dim=1)
                    counts = mask.sum(dim=1).clamp(min=1)
                    pooled_rows.append((sums / counts).numpy())
                else:
                    for row in range(stacked.shape[0]):
                        per_token.append(stacked[row][keep[row]].numpy())
        if pooling is Pooling.MEAN:
            return np.concatenate(pooled_rows, axis=0)
        return per_token
