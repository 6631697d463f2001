"""Representation-quality study over encoder layers.

Labelled P/I/O sentences are embedded per layer spec (mean pooling,
concatenation across layers), clustered with K-means (K=3) in the full
embedding space, and scored with the adjusted rand index against the gold
labels. A 2-D reduction is attached purely for plotting; the rand score is
always computed before reduction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .encoders import EncoderHandle, Pooling
from .errors import ValidationError
from .labels import PIO, ClassLabel


def adjusted_rand(a: list, b: list) -> float:
    """Chance-corrected agreement between two labelings of the same items."""
    if len(a) != len(b):
        raise ValidationError(f"labelings differ in length: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise ValidationError("adjusted rand needs at least 2 items")
    contingency: dict[tuple, int] = {}
    a_sizes: dict = {}
    b_sizes: dict = {}
    for x, y in zip(a, b):
        contingency[(x, y)] = contingency.get((x, y), 0) + 1
        a_sizes[x] = a_sizes.get(x, 0) + 1
        b_sizes[y] = b_sizes.get(y, 0) + 1
    index = sum(comb(c, 2) for c in contingency.values())
    sum_a = sum(comb(c, 2) for c in a_sizes.values())
    sum_b = sum(comb(c, 2) for c in b_sizes.values())
    expected = sum_a * sum_b / comb(n, 2)
    max_index = (sum_a + sum_b) / 2
    denom = max_index - expected
    if denom == 0:
        return 1.0  # both partitions trivial, and then necessarily identical
    return (index - expected) / denom


@dataclass
class LayerSpecResult:
    layers: tuple[int, ...]
    ari: float
    clusters: np.ndarray
    coords: np.ndarray | None  # (n, 2) t-SNE output, plot data only

    @property
    def name(self) -> str:
        return "+".join(str(l) for l in self.layers)


@dataclass
class EmbeddingStudy:
    texts: list[str]
    gold: list[ClassLabel]
    sample_size: int
    results: list[LayerSpecResult] = field(default_factory=list)

    def best(self) -> LayerSpecResult:
        return max(self.results, key=lambda r: r.ari)


def default_layer_specs(n_layers: int) -> list[list[int]]:
    """All single layers plus all adjacent-pair concatenations."""
    singles = [[l] for l in range(1, n_layers + 1)]
    pairs = [[l, l + 1] for l in range(1, n_layers)]
    return singles + pairs


def run_study(
    sentences: list[tuple[str, ClassLabel]],
    encoder: EncoderHandle,
    layer_specs: list[list[int]],
    seed: int,
    sample_size: int = 3000,
    with_tsne: bool = True,
    tsne_perplexity: float = 30.0,
) -> EmbeddingStudy:
    """Cluster sampled P/I/O sentences per layer spec and score agreement.

    ``sentences`` pairs text with its gold PIO label; a seeded sample of
    ``sample_size`` is drawn (everything, if fewer are available).
    """
    from sklearn.cluster import KMeans

    pio_sentences = [(t, l) for t, l in sentences if l in PIO]
    for cls in PIO:
        if sum(1 for _, l in pio_sentences if l is cls) < 3:
            raise ValidationError(f"need at least 3 sentences of class {cls.value}")
    rng = random.Random(seed)
    if len(pio_sentences) > sample_size:
        sample = rng.sample(pio_sentences, sample_size)
    else:
        sample = list(pio_sentences)
    texts = [t for t, _ in sample]
    gold = [l for _, l in sample]
    if len(set(texts)) < 3:
        raise ValidationError("need at least 3 distinct sentences to cluster into 3 groups")

    study = EmbeddingStudy(texts=texts, gold=gold, sample_size=len(sample))
    gold_values = [l.value for l in gold]
    for spec in layer_specs:
        embeddings = encoder.encode_batch(texts, spec, Pooling.MEAN)
        kmeans = KMeans(n_clusters=3, n_init=10, random_state=seed)
        clusters = kmeans.fit_predict(embeddings)
        ari = adjusted_rand(gold_values, clusters.tolist())
        coords = None
        if with_tsne:
            from sklearn.manifold import TSNE

            perplexity = min(tsne_perplexity, max(2.0, (len(texts) - 1) / 3))
            coords = TSNE(
                n_components=2, perplexity=perplexity, random_state=seed, init="pca"
            ).fit_transform(embeddings)
        study.results.append(
            LayerSpecResult(layers=tuple(spec), ari=float(ari), clusters=clusters, coords=coords)
        )
    return study


def parse_layer_specs(spec: str) -> list[list[int]]:
    """Parse "12;11,12" into [[12], [11, 12]]."""
    specs = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            specs.append([int(p) for p in chunk.split(",")])
        except ValueError:
            raise ValidationError(f"bad layer spec {chunk!r}") from None
    if not specs:
        raise ValidationError("no layer specs given")
    return specs
