"""HTTP service for classification, span extraction and sentence
highlighting over raw abstract or full-text input.

Predictions are cached per (model lineage, text) so that threshold-only
changes re-assign labels without touching the model; the reviewer-facing
UI leans on that for its live threshold slider.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from collections import OrderedDict
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

log = logging.getLogger(__name__)

from .classifier import ARGMAX, ClassifierModel, assign_labels
from .errors import ValidationError
from .labels import PIO, ClassLabel
from .qa import QAModel
from .segmentation import split_text
from .squadgen import QuestionTemplateSet

DEFAULT_THRESHOLD = 0.5
DEFAULT_CACHE_SIZE = 256
DEFAULT_MAX_CHARS = 200_000


class ClassifyRequest(BaseModel):
    text: str
    threshold: float | None = None
    policy: str | None = None  # "threshold" (default) or "argmax"
    classes: list[str] | None = None


class ExtractRequest(BaseModel):
    text: str
    classes: list[str] | None = None  # subset of P/I/O; default: all loaded
    null_threshold: float = 0.0  # higher values favour span answers over no-answer


class _LRU:
    def __init__(self, maxsize: int):
        self.maxsize = maxsize
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            if key not in self._data:
                return None
            self._data.move_to_end(key)
            return self._data[key]

    def put(self, key, value):
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)


class ModelRegistry:
    """Holds the loaded models; swaps are atomic pointer replacements."""

    def __init__(
        self,
        classifier: ClassifierModel | None = None,
        qa_models: dict[str, QAModel] | None = None,
        templates: QuestionTemplateSet | None = None,
    ):
        self._lock = threading.Lock()
        self.classifier = classifier
        self.qa_models = dict(qa_models or {})
        self.templates = templates or QuestionTemplateSet.default()

    def swap_classifier(self, model: ClassifierModel) -> None:
        with self._lock:
            self.classifier = model

    def swap_qa(self, pio_class: str, model: QAModel) -> None:
        with self._lock:
            self.qa_models = {**self.qa_models, pio_class: model}


def _parse_classes(raw: list[str] | None, allowed: set[str]) -> set[str]:
    if raw is None:
        return set(allowed)
    out = set()
    for item in raw:
        letter = str(item).strip().upper()
        if letter not in allowed:
            raise HTTPException(status_code=400, detail=f"invalid class {item!r}")
        out.add(letter)
    return out


def create_app(
    registry: ModelRegistry,
    cache_size: int = DEFAULT_CACHE_SIZE,
    max_chars: int = DEFAULT_MAX_CHARS,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    app = FastAPI(title="picoscreen highlight service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins if cors_origins is not None else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    cache = _LRU(cache_size)
    stats = {"predict_calls": 0, "cache_hits": 0}
    app.state.registry = registry
    app.state.stats = stats

    @app.middleware("http")
    async def request_log(request: Request, call_next):
        t0 = time.perf_counter()
        response = await call_next(request)
        log.info(
            '{"method": "%s", "path": "%s", "status": %d, "duration_ms": %.1f}',
            request.method, request.url.path, response.status_code,
            (time.perf_counter() - t0) * 1000,
        )
        return response

    def classified_sentences(classifier: ClassifierModel, text: str):
        key = (classifier.lineage, hashlib.sha256(text.encode("utf-8")).hexdigest())
        hit = cache.get(key)
        if hit is not None:
            stats["cache_hits"] += 1
            return hit
        spans = split_text(text)
        if not spans:
            raise HTTPException(status_code=400, detail="no sentences found in text")
        sentences = [text[s:e] for s, e in spans]
        stats["predict_calls"] += 1
        probs = classifier.predict(sentences)
        value = (spans, sentences, probs)
        cache.put(key, value)
        return value

    def check_text(text: str) -> str:
        if not text or not text.strip():
            raise HTTPException(status_code=400, detail="text must be non-empty")
        if len(text) > max_chars:
            raise HTTPException(
                status_code=400, detail=f"text exceeds the configured cap of {max_chars} characters"
            )
        return text

    @app.post("/classify")
    def classify(req: ClassifyRequest):
        classifier = registry.classifier
        if classifier is None:
            raise HTTPException(status_code=503, detail="no sentence classifier loaded")
        text = check_text(req.text)
        if req.policy is not None and req.policy not in (ARGMAX, "threshold"):
            raise HTTPException(status_code=400, detail=f"unknown policy {req.policy!r}")
        policy = req.policy or "threshold"
        threshold = DEFAULT_THRESHOLD if req.threshold is None else req.threshold
        if not (0.0 <= threshold <= 1.0):
            raise HTTPException(status_code=400, detail="threshold must lie in [0, 1]")
        wanted = _parse_classes(req.classes, {c.value for c in ClassLabel})

        spans, sentences, probs = classified_sentences(classifier, text)
        out = []
        for (s, _e), sentence, p in zip(spans, sentences, probs):
            if policy == ARGMAX:
                assigned = assign_labels(p, ARGMAX)
            else:
                assigned = assign_labels(p, threshold)
            assigned = {c for c in assigned if c.value in wanted}
            out.append(
                {
                    "text": sentence,
                    "char_start": s,
                    "probabilities": p.as_dict(),
                    "assigned": sorted(c.value for c in assigned),
                }
            )
        return {
            "sentences": out,
            "model": {"lineage": classifier.lineage, "kind": "sentence-classifier"},
            "policy": {"policy": policy, "threshold": threshold if policy != ARGMAX else None},
        }

    @app.post("/extract")
    def extract(req: ExtractRequest):
        text = check_text(req.text)
        loaded = set(registry.qa_models)
        wanted = _parse_classes(req.classes, {c.value for c in PIO})
        missing = wanted - loaded
        if missing:
            raise HTTPException(
                status_code=503, detail=f"no QA model loaded for: {', '.join(sorted(missing))}"
            )
        spans = split_text(text)
        if not spans:
            raise HTTPException(status_code=400, detail="no sentences found in text")
        sentences = [text[s:e] for s, e in spans]

        classifier = registry.classifier
        sentence_payload = []
        if classifier is not None:
            _, _, probs = classified_sentences(classifier, text)
            for (s, _e), sentence, p in zip(spans, sentences, probs):
                sentence_payload.append(
                    {"text": sentence, "char_start": s, "probabilities": p.as_dict()}
                )
        else:
            sentence_payload = [
                {"text": sentence, "char_start": s, "probabilities": None}
                for (s, _e), sentence in zip(spans, sentences)
            ]

        span_payload: dict[str, list] = {}
        for letter in sorted(wanted):
            model = registry.qa_models[letter]
            question = registry.templates.pool_for(ClassLabel(letter))[0]
            entries = []
            for idx, ((s, _e), sentence) in enumerate(zip(spans, sentences)):
                pred = model.answer(question, sentence, null_threshold=req.null_threshold)
                entries.append(
                    {
                        "sentence_index": idx,
                        "is_no_answer": pred.is_no_answer,
                        "text": pred.text,
                        "start_char": pred.start_char,
                        "end_char": pred.end_char,
                        "doc_start": s + pred.start_char,
                        "doc_end": s + pred.end_char,
                        "span_score": pred.span_score,
                        "no_answer_score": pred.no_answer_score,
                    }
                )
            span_payload[letter] = entries
        return {
            "sentences": sentence_payload,
            "spans": span_payload,
            "model": {
                "qa": {letter: registry.qa_models[letter].lineage for letter in sorted(wanted)}
            },
        }

    @app.get("/health")
    def health():
        classifier = registry.classifier
        return {
            "status": "ok" if classifier is not None else "degraded",
            "loaded_models": {
                "classifier": classifier.lineage if classifier else None,
                "qa": {k: m.lineage for k, m in sorted(registry.qa_models.items())},
            },
            "stats": dict(stats),
        }

    return app


def registry_from_config(config: dict) -> ModelRegistry:
    classifier = None
    if config.get("classifier_dir"):
        classifier = ClassifierModel.load(config["classifier_dir"])
    qa_models = {}
    for letter, path in (config.get("qa_dirs") or {}).items():
        qa_models[letter.upper()] = QAModel.load(path)
    templates = None
    if config.get("templates_file"):
        templates = QuestionTemplateSet.from_file(config["templates_file"])
    return ModelRegistry(classifier=classifier, qa_models=qa_models, templates=templates)


def load_service_config(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"cannot read service config {path}: {e}") from e
