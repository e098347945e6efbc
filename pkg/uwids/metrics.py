# 2026/09/15
"""
metrics.py - Detection metrics.

Defines MetricsReport and the functions 'compute_metrics' and 'auc_score'.

Conventions:
- precision, recall and F1 are 0 when their denominator is 0, and are
macro-averaged when more than two labels occur;
- MCC is 0 when a row or column of the confusion matrix is empty;
- detection rates (TPR, FNR, TNR, FPR) always refer to a binary view: with
two labels, positive means 'positive_class'; with more, positive means any
label other than 0, and a rate with nothing to count is 1 (misses 0);
- AUC uses the scores when given, the hard predictions otherwise, and is
one-vs-rest macro-averaged on multiclass data. It is None when undefined.

"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from sklearn.metrics import (
    accuracy_score,
    cohen_kappa_score,
    confusion_matrix,
    matthews_corrcoef,
    precision_recall_fscore_support,
    roc_auc_score,
)

from uwids.errors import MetricsError

METRIC_NAMES = (
    "accuracy",
    "precision",
    "recall",
    "f1",
    "auc",
    "kappa",
    "mcc",
    "tpr",
    "fnr",
    "tnr",
    "fpr",
)


@dataclass
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    auc: float | None
    kappa: float
    mcc: float
    tpr: float
    fnr: float
    tnr: float
    fpr: float
    n: int
    labels: list[int] = field(default_factory=list)
    confusion: list[list[int]] = field(default_factory=list)

    def row(self) -> dict[str, float | None]:
        """The metric values, in METRIC_NAMES order."""
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def to_dict(self) -> dict[str, Any]:
        return {**self.row(), "n": self.n, "labels": self.labels, "confusion": self.confusion}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> MetricsReport:
        return cls(**{key: d[key] for key in (*METRIC_NAMES, "n", "labels", "confusion")})


def compute_metrics(
    predictions: ArrayLike,
    truths: ArrayLike,
    positive_class: int = 1,
    *,
    scores: ArrayLike | None = None,
) -> MetricsReport:
    """Full metric set of `predictions` against `truths`.

    `scores`, when given, are positive-class scores (larger means more
    likely positive) used for the AUC.

    """
    y_pred = np.asarray(predictions, dtype=int).ravel()
    y_true = np.asarray(truths, dtype=int).ravel()
    if len(y_pred) != len(y_true):
        raise MetricsError(f"{len(y_pred)} predictions for {len(y_true)} truths.")
    if len(y_true) == 0:
        raise MetricsError("Cannot compute metrics on empty input.")

    labels = sorted(set(y_true.tolist()) | set(y_pred.tolist()) | {positive_class})
    multiclass = len(labels) > 2
    if multiclass:
        precision, recall, f1, _ = precision_recall_fscore_support(
            y_true, y_pred, labels=labels, average="macro", zero_division=0
        )
        pos_true, pos_pred = y_true != 0, y_pred != 0
    else:
        precision, recall, f1, _ = precision_recall_fscore_support(
            y_true,
            y_pred,
            labels=labels,
            pos_label=positive_class,
            average="binary",
            zero_division=0,
        )
        pos_true, pos_pred = y_true == positive_class, y_pred == positive_class

    accuracy = float(accuracy_score(y_true, y_pred))
    kappa = float(cohen_kappa_score(y_true, y_pred, labels=labels))
    if math.isnan(kappa):
        # Single label on both sides
        kappa = 1.0 if accuracy == 1.0 else 0.0

    tp = int(np.sum(pos_true & pos_pred))
    fn = int(np.sum(pos_true & ~pos_pred))
    tn = int(np.sum(~pos_true & ~pos_pred))
    fp = int(np.sum(~pos_true & pos_pred))
    tpr, fnr = _rates(tp, fn)
    tnr, fpr = _rates(tn, fp)

    return MetricsReport(
        accuracy=accuracy,
        precision=float(precision),
        recall=float(recall),
        f1=float(f1),
        auc=_auc(y_true, y_pred, labels, positive_class, scores),
        kappa=kappa,
        mcc=float(matthews_corrcoef(y_true, y_pred)),
        tpr=tpr,
        fnr=fnr,
        tnr=tnr,
        fpr=fpr,
        n=len(y_true),
        labels=labels,
        confusion=confusion_matrix(y_true, y_pred, labels=labels).tolist(),
    )


def auc_score(scores: ArrayLike, truths: ArrayLike) -> float:
    """Area under the ROC curve of binary `truths` ranked by `scores`."""
    scores = np.asarray(scores, dtype=float).ravel()
    truths = np.asarray(truths, dtype=int).ravel()
    if len(scores) != len(truths):
        raise MetricsError(f"{len(scores)} scores for {len(truths)} truths.")
    if len(np.unique(truths)) != 2:
        raise MetricsError("AUC is undefined unless both classes are present.")
    return float(roc_auc_score(truths, scores))


# Auxiliar functions


def _rates(hits: int, misses: int) -> tuple[float, float]:
    """(hit rate, miss rate); (1, 0) when there is nothing to hit."""
    total = hits + misses
    if total == 0:
        return 1.0, 0.0
    return hits / total, misses / total


def _auc(y_true, y_pred, labels, positive_class, scores) -> float | None:
    if len(labels) <= 2:
        binary = (y_true == positive_class).astype(int)
        if len(np.unique(binary)) != 2:
            return None
        ranking = y_pred == positive_class if scores is None else scores
        return auc_score(ranking, binary)
    if len(np.unique(y_true)) != len(labels):
        return None
    onehot = (y_pred[:, None] == np.asarray(labels)[None, :]).astype(float)
    return float(roc_auc_score(y_true, onehot, multi_class="ovr", average="macro", labels=labels))
