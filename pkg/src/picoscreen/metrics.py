"""Scoring: per-class precision/recall/F1, the 50-point threshold sweep,
token-level span overlap F1 and possible/impossible subgroup breakdowns.
"""

from __future__ import annotations

import collections
import csv
import json
import re
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .labels import CLASS_ORDER, ClassLabel
from .squadgen import SquadDataset

_ARTICLE_RE = re.compile(r"\b(a|an|the)\b", re.UNICODE)
_PUNCT = set(string.punctuation)

SWEEP_POINTS = 50


@dataclass(frozen=True)
class PRFRow:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class ThresholdSweep:
    thresholds: list[float]
    rows: list[list[PRFRow]]  # rows[i] holds one PRFRow per class at thresholds[i]

    def __post_init__(self):
        ts = self.thresholds
        if not ts or ts[0] != 0.0 or ts[-1] != 1.0 or any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValidationError("thresholds must be strictly increasing from 0 to 1")

    def iter_flat(self):
        for t, rows in zip(self.thresholds, self.rows):
            for row in rows:
                yield t, row


@dataclass
class SubgroupReport:
    label: str
    pct_possible: float
    f1_possible: float | None  # None when the subgroup is empty
    f1_impossible: float | None


@dataclass
class QAEvaluation:
    overall_f1: float
    subgroups: SubgroupReport

    def to_json_dict(self) -> dict:
        return {
            "overall_f1": self.overall_f1,
            "class": self.subgroups.label,
            "pct_possible": self.subgroups.pct_possible,
            "f1_possible": self.subgroups.f1_possible,
            "f1_impossible": self.subgroups.f1_impossible,
        }


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def prf_single_label(
    preds: Sequence[ClassLabel], gold: Sequence[ClassLabel]
) -> list[PRFRow]:
    """Per-class precision/recall/F1 for argmax predictions vs single gold labels."""
    if len(preds) != len(gold):
        raise ValidationError(f"{len(preds)} predictions for {len(gold)} gold labels")
    rows = []
    for cls in CLASS_ORDER:
        tp = sum(1 for p, g in zip(preds, gold) if p is cls and g is cls)
        fp = sum(1 for p, g in zip(preds, gold) if p is cls and g is not cls)
        fn = sum(1 for p, g in zip(preds, gold) if p is not cls and g is cls)
        p, r, f = _prf(tp, fp, fn)
        rows.append(PRFRow(cls.value, p, r, f, support=tp + fn))
    return rows


def _prob_matrix(probs: Iterable) -> np.ndarray:
    rows = []
    for p in probs:
        rows.append(p.values if hasattr(p, "values") else p)
    mat = np.asarray(rows, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[1] != len(CLASS_ORDER):
        raise ValidationError(f"expected (n, {len(CLASS_ORDER)}) probabilities, got {mat.shape}")
    return mat


def sweep_thresholds(
    probs: Iterable, gold: Sequence[ClassLabel], n_points: int = SWEEP_POINTS
) -> ThresholdSweep:
    """Evaluate threshold assignment at evenly spaced cutoffs over [0, 1].

    At each threshold every class with probability >= t is assigned; a gold
    label is recalled if present in the assigned set and every assigned
    label is a precision trial.
    """
    mat = _prob_matrix(probs)
    if len(gold) != mat.shape[0]:
        raise ValidationError(f"{mat.shape[0]} probability rows for {len(gold)} gold labels")
    if mat.shape[0] == 0:
        raise ValidationError("empty inputs")
    gold_idx = np.array([CLASS_ORDER.index(g) for g in gold])
    gold_onehot = np.zeros_like(mat, dtype=bool)
    gold_onehot[np.arange(len(gold)), gold_idx] = True

    thresholds = np.linspace(0.0, 1.0, n_points)
    all_rows: list[list[PRFRow]] = []
    for t in thresholds:
        assigned = mat >= t
        rows = []
        for ci, cls in enumerate(CLASS_ORDER):
            tp = int(np.sum(assigned[:, ci] & gold_onehot[:, ci]))
            fp = int(np.sum(assigned[:, ci] & ~gold_onehot[:, ci]))
            fn = int(np.sum(~assigned[:, ci] & gold_onehot[:, ci]))
            p, r, f = _prf(tp, fp, fn)
            rows.append(PRFRow(cls.value, p, r, f, support=tp + fn))
        all_rows.append(rows)
    return ThresholdSweep(thresholds=[float(t) for t in thresholds], rows=all_rows)


# --- token-level span overlap ------------------------------------------------


def normalize_answer(s: str) -> str:
    """Lowercase, drop punctuation and articles, collapse whitespace."""
    s = s.lower()
    s = "".join(ch for ch in s if ch not in _PUNCT)
    s = _ARTICLE_RE.sub(" ", s)
    return " ".join(s.split())


def answer_tokens(s: str) -> list[str]:
    if not s:
        return []
    return normalize_answer(s).split()


def token_f1(
    pred_tokens: Sequence[str], gold_alternatives: Sequence[Sequence[str]]
) -> float:
    """Maximal multiset-overlap F1 of the prediction over gold alternatives.

    Both empty counts as agreement (1.0); exactly one empty scores 0.0.
    An empty alternatives list is treated as a single no-answer gold.
    """
    alternatives = list(gold_alternatives) or [[]]
    best = 0.0
    pred_counts = collections.Counter(pred_tokens)
    n_pred = sum(pred_counts.values())
    for gold in alternatives:
        gold_counts = collections.Counter(gold)
        n_gold = sum(gold_counts.values())
        if n_pred == 0 or n_gold == 0:
            score = float(n_pred == n_gold)
        else:
            same = sum((pred_counts & gold_counts).values())
            score = 2 * same / (n_pred + n_gold) if same else 0.0
        best = max(best, score)
    return best


def evaluate_qa(
    predictions: Mapping[str, str], test: SquadDataset, label: str = "ALL"
) -> QAEvaluation:
    """Score an id -> answer-string map against a test dataset.

    Gold for impossible items is the empty answer; possible items accept
    any of their listed answers. Every test id must be present in the
    predictions.
    """
    missing = [qa.id for _, qa in test.qa_items() if qa.id not in predictions]
    if missing:
        shown = ", ".join(missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise ValidationError(f"missing predictions for ids: {shown}{more}")

    scores_possible: list[float] = []
    scores_impossible: list[float] = []
    for _, qa in test.qa_items():
        pred = answer_tokens(predictions[qa.id])
        if qa.is_impossible:
            scores_impossible.append(token_f1(pred, [[]]))
        else:
            golds = [answer_tokens(a.text) for a in qa.answers]
            scores_possible.append(token_f1(pred, golds))

    all_scores = scores_possible + scores_impossible
    if not all_scores:
        raise ValidationError("test dataset has no questions")
    total = len(all_scores)
    report = SubgroupReport(
        label=label,
        pct_possible=len(scores_possible) / total,
        f1_possible=float(np.mean(scores_possible)) if scores_possible else None,
        f1_impossible=float(np.mean(scores_impossible)) if scores_impossible else None,
    )
    return QAEvaluation(overall_f1=float(np.mean(all_scores)), subgroups=report)


# --- report output -----------------------------------------------------------


def prf_rows_tsv(rows: list[PRFRow]) -> str:
    lines = ["class\tprecision\trecall\tf1\tsupport"]
    for r in rows:
        lines.append(f"{r.label}\t{r.precision:.4f}\t{r.recall:.4f}\t{r.f1:.4f}\t{r.support}")
    return "\n".join(lines) + "\n"


def prf_rows_json(rows: list[PRFRow]) -> dict:
    return {
        r.label: {
            "precision": r.precision,
            "recall": r.recall,
            "f1": r.f1,
            "support": r.support,
        }
        for r in rows
    }


def sweep_to_csv(sweep: ThresholdSweep, path: str | Path) -> None:
    """Plot-ready long-format CSV: threshold, class, precision, recall, f1."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "class", "precision", "recall", "f1"])
        for t, row in sweep.iter_flat():
            writer.writerow(
                [f"{t:.6f}", row.label, f"{row.precision:.6f}", f"{row.recall:.6f}", f"{row.f1:.6f}"]
            )


def save_json_report(payload: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
