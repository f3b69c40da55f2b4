"""Kernel-kNN classification with stratified k-fold cross-validation.

Predictions use the Gram matrix (or the quantized weight matrix) directly
as the similarity: a test molecule is assigned the majority class of its k
most similar training molecules, with deterministic tie-breaking (larger
similarity first, then smaller molecule index; vote ties go to the smaller
class id; an all-zero neighborhood falls back to the training majority).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .molio import GraphDataset, canonical_json
from .motif import motif_graphs_for_dataset
from .simgraph import KernelMatrix, compute_kernel_matrix, quantize_scores
from .spkernel import KernelParams

__all__ = [
    "EvalConfig",
    "EvalReport",
    "stratified_folds",
    "knn_classify",
    "cross_validate",
    "report_json",
]


@dataclass(frozen=True)
class EvalConfig:
    k: int = 5
    folds: int = 10
    seed: int = 0
    weighting: str = "raw_kernel"  # or "mssm_weight"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.folds < 2:
            raise ValueError("folds must be at least 2")
        if self.weighting not in ("raw_kernel", "mssm_weight"):
            raise ValueError(f"unknown weighting {self.weighting!r}")


@dataclass(frozen=True)
class EvalReport:
    fold_accuracies: tuple[float, ...]
    mean_accuracy: float
    std_accuracy: float
    confusion: tuple[tuple[int, ...], ...]  # [true class][predicted class]
    y_true: tuple[int, ...]
    y_pred: tuple[int, ...]
    config: EvalConfig
    kernel_params: KernelParams

    def to_dict(self):
        return {
            "fold_accuracies": list(self.fold_accuracies),
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "confusion": [list(row) for row in self.confusion],
            "y_true": list(self.y_true),
            "y_pred": list(self.y_pred),
            "config": {
                "k": self.config.k,
                "folds": self.config.folds,
                "seed": self.config.seed,
                "weighting": self.config.weighting,
            },
            "kernel_params": {
                "c": self.kernel_params.c,
                "wl_iterations": self.kernel_params.wl_iterations,
                "epsilon": self.kernel_params.epsilon,
                "position_variant": self.kernel_params.position_variant,
            },
        }


def report_json(report: EvalReport) -> str:
    return canonical_json(report.to_dict())


def stratified_folds(labels, folds: int, seed: int):
    """Fold index per item: seeded shuffle within each class, round-robin.

    Raises when any class has fewer members than folds, since such a class
    cannot appear in every fold.
    """
    by_class = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    rng = random.Random(seed)
    assignment = [0] * len(labels)
    for label in sorted(by_class):
        members = by_class[label]
        if len(members) < folds:
            raise ValueError(
                f"class {label} has {len(members)} members, fewer than {folds} folds"
            )
        rng.shuffle(members)
        for position, index in enumerate(members):
            assignment[index] = position % folds
    return assignment


def _majority(votes):
    counts = Counter(votes)
    best = max(counts.values())
    return min(c for c, ct in counts.items() if ct == best)


def knn_classify(similarity, labels, test_indices, k: int, train_indices=None):
    """Predict each test item from its k most similar training items.

    ``similarity`` is a square matrix (kernel scores or integer weights);
    training items default to everything outside ``test_indices``.
    """
    similarity = np.asarray(similarity, dtype=np.float64)
    labels = list(labels)
    test_set = set(test_indices)
    if train_indices is None:
        train_indices = [i for i in range(len(labels)) if i not in test_set]
    train_indices = sorted(train_indices)
    if k > len(train_indices):
        raise ValueError(f"k={k} exceeds training-set size {len(train_indices)}")
    train_majority = _majority(labels[i] for i in train_indices)

    predictions = []
    for t in test_indices:
        ranked = sorted(train_indices, key=lambda j: (-similarity[t, j], j))
        top = ranked[:k]
        if all(similarity[t, j] == 0 for j in top):
            predictions.append(train_majority)
        else:
            predictions.append(_majority(labels[j] for j in top))
    return predictions


def cross_validate(dataset: GraphDataset, kernel_params: KernelParams,
                   config: EvalConfig, patterns=(), gram: KernelMatrix | None = None,
                   threads: int = 1) -> EvalReport:
    """Stratified k-fold kernel-kNN evaluation of a dataset.

    The Gram matrix is computed once (or taken from ``gram``) and shared by
    all folds.  Deterministic for a fixed seed.
    """
    labels = [g.class_label for g in dataset.graphs]
    if any(label is None for label in labels):
        raise ValueError("dataset has molecules without class labels")

    folds = stratified_folds(labels, config.folds, config.seed)

    if gram is None:
        _, motif_graphs = motif_graphs_for_dataset(dataset, patterns)
        gram = compute_kernel_matrix(motif_graphs, kernel_params, threads=threads)
    elif gram.n != len(dataset):
        raise ValueError(
            f"cached Gram matrix is {gram.n}x{gram.n}, dataset has {len(dataset)} molecules"
        )

    if config.weighting == "mssm_weight":
        similarity = quantize_scores(gram).astype(np.float64)
    else:
        similarity = gram.entries

    n = len(labels)
    num_classes = max(labels) + 1
    y_pred = [0] * n
    fold_accuracies = []
    for f in range(config.folds):
        test = [i for i in range(n) if folds[i] == f]
        preds = knn_classify(similarity, labels, test, config.k)
        hits = 0
        for i, p in zip(test, preds):
            y_pred[i] = p
            hits += p == labels[i]
        fold_accuracies.append(hits / len(test))

    confusion = [[0] * num_classes for _ in range(num_classes)]
    for truth, pred in zip(labels, y_pred):
        confusion[truth][pred] += 1

    accs = np.array(fold_accuracies)
    return EvalReport(
        fold_accuracies=tuple(fold_accuracies),
        mean_accuracy=float(accs.mean()),
        std_accuracy=float(accs.std()),  # population std over folds
        confusion=tuple(tuple(row) for row in confusion),
        y_true=tuple(labels),
        y_pred=tuple(y_pred),
        config=config,
        kernel_params=kernel_params,
    )
