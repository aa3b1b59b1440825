"""Combining classifier outputs: fixed rules, accuracy-weighted votes, local skill.

Classifier outputs come in three shapes: a single predicted label per sample
(hard), a full preference ranking over labels (rank), or a probability row
per sample (proba). All three embed into per-class score vectors, which the
fixed fusion rules (sum, product, order statistics, majority) reduce across
classifiers. Accuracy-weighted majority voting maps validation accuracies to
log-odds weights; the adaptive variant re-estimates each classifier's
accuracy in the neighborhood of the query before weighting.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (
    ConfigurationWarning,
    DataError,
    DimensionError,
    EvidenceError,
)
from .jury import optimal_weights

FIXED_RULES = ("sum", "product", "min", "max", "median", "majority", "trimmed-mean")

_TRANSFORM_KINDS = ("likelihood", "log-likelihood", "sigmoid")
_DIRECTIONS = ("given-true", "given-predicted")


def _check_labels(labels) -> tuple[str, ...]:
    labs = tuple(str(x) for x in labels)
    if len(labs) < 2:
        raise DimensionError("at least two labels are required")
    if len(set(labs)) != len(labs):
        raise ValueError(f"labels repeat: {labs}")
    if any(not x for x in labs):
        raise ValueError("labels must be non-empty strings")
    return labs


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Counts of (true label, predicted label) pairs; rows are true labels."""

    labels: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self):
        labs = _check_labels(self.labels)
        c = np.asarray(self.counts, dtype=np.int64).copy()
        m = len(labs)
        if c.shape != (m, m):
            raise DimensionError(f"counts must be {m}x{m} for {m} labels, got {c.shape}")
        if (c < 0).any():
            raise ValueError("confusion counts must be non-negative")
        if c.sum() == 0:
            raise EvidenceError("confusion matrix is empty")
        c.setflags(write=False)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "counts", c)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts)) / self.total


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Gain (positive) or loss (negative) of predicting column given row is true."""

    labels: tuple[str, ...]
    gains: np.ndarray

    def __post_init__(self):
        labs = _check_labels(self.labels)
        g = np.asarray(self.gains, dtype=np.float64).copy()
        m = len(labs)
        if g.shape != (m, m):
            raise DimensionError(f"gains must be {m}x{m} for {m} labels, got {g.shape}")
        if not np.isfinite(g).all():
            raise ValueError("gains must be finite")
        g.setflags(write=False)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "gains", g)


@dataclass(frozen=True, eq=False)
class ClassifierOutput:
    """One classifier's predictions for every sample, in one of three shapes."""

    kind: str
    hard: Optional[tuple[str, ...]] = None
    ranks: Optional[tuple[tuple[str, ...], ...]] = None
    proba: Optional[np.ndarray] = None

    @classmethod
    def from_hard(cls, predictions: Sequence[str]) -> "ClassifierOutput":
        return cls("hard", hard=tuple(str(x) for x in predictions))

    @classmethod
    def from_ranks(cls, rankings: Sequence[Sequence[str]]) -> "ClassifierOutput":
        return cls("rank", ranks=tuple(tuple(str(x) for x in r) for r in rankings))

    @classmethod
    def from_proba(cls, matrix) -> "ClassifierOutput":
        p = np.asarray(matrix, dtype=np.float64).copy()
        p.setflags(write=False)
        return cls("proba", proba=p)

    @property
    def n_samples(self) -> int:
        if self.kind == "hard":
            return len(self.hard)
        if self.kind == "rank":
            return len(self.ranks)
        return self.proba.shape[0]

    def hard_labels(self, labels: Sequence[str]) -> tuple[str, ...]:
        """Reduce to one label per sample (top of ranking / argmax of proba)."""
        if self.kind == "hard":
            return self.hard
        if self.kind == "rank":
            return tuple(r[0] for r in self.ranks)
        idx = np.argmax(self.proba, axis=1)
        labs = tuple(labels)
        return tuple(labs[i] for i in idx)

    def proba_matrix(self, labels: Sequence[str]) -> np.ndarray:
        """Embed into per-class scores: one-hot for hard votes, normalized
        descending rank points for rankings, the rows themselves for proba."""
        labs = tuple(labels)
        m = len(labs)
        if self.kind == "proba":
            return np.asarray(self.proba, dtype=np.float64)
        n = self.n_samples
        out = np.zeros((n, m))
        index = {lab: i for i, lab in enumerate(labs)}
        if self.kind == "hard":
            for s, lab in enumerate(self.hard):
                out[s, index[lab]] = 1.0
            return out
        denom = m * (m - 1) / 2
        for s, ranking in enumerate(self.ranks):
            for pos, lab in enumerate(ranking):
                out[s, index[lab]] = (m - 1 - pos) / denom
        return out


@dataclass(frozen=True, eq=False)
class PredictionSet:
    """Predictions of K classifiers on N samples, plus optional truth and features.

    Labels are an ordered universe; every hard vote, ranking, and proba row is
    validated against it (proba rows must be non-negative and sum to one).
    ``true_labels`` may be missing entirely or hold per-sample gaps.
    """

    labels: tuple[str, ...]
    sample_ids: tuple[str, ...]
    outputs: tuple[ClassifierOutput, ...]
    classifier_names: tuple[str, ...]
    true_labels: Optional[tuple[Optional[str], ...]] = None
    features: Optional[np.ndarray] = None

    def __post_init__(self):
        labs = _check_labels(self.labels)
        ids = tuple(str(x) for x in self.sample_ids)
        if not ids:
            raise DimensionError("a prediction set needs at least one sample")
        outs = tuple(self.outputs)
        names = tuple(str(x) for x in self.classifier_names)
        if not outs:
            raise DimensionError("a prediction set needs at least one classifier")
        if len(names) != len(outs):
            raise DimensionError(f"{len(names)} names for {len(outs)} classifiers")
        n, universe = len(ids), set(labs)
        for name, out in zip(names, outs):
            if out.n_samples != n:
                raise DimensionError(
                    f"classifier {name} has {out.n_samples} predictions for {n} samples"
                )
            if out.kind == "hard":
                for lab in out.hard:
                    if lab not in universe:
                        raise DataError(f"classifier {name} predicts unknown label {lab!r}")
            elif out.kind == "rank":
                for r in out.ranks:
                    if sorted(r) != sorted(labs):
                        raise DataError(
                            f"classifier {name} ranking {r} is not a permutation of the labels"
                        )
            elif out.kind == "proba":
                p = out.proba
                if p.shape != (n, len(labs)):
                    raise DimensionError(
                        f"classifier {name} proba shape {p.shape} != ({n}, {len(labs)})"
                    )
                if (p < 0).any() or not np.isfinite(p).all():
                    raise DataError(f"classifier {name} has negative or non-finite probabilities")
                if np.abs(p.sum(axis=1) - 1.0).max() > 1e-9:
                    raise DataError(f"classifier {name} probability rows do not sum to 1")
            else:
                raise ValueError(f"unknown output kind {out.kind!r}")
        truth = self.true_labels
        if truth is not None:
            truth = tuple(None if x is None else str(x) for x in truth)
            if len(truth) != n:
                raise DimensionError(f"{len(truth)} true labels for {n} samples")
            for lab in truth:
                if lab is not None and lab not in universe:
                    raise DataError(f"unknown true label {lab!r}")
        feats = self.features
        if feats is not None:
            feats = np.asarray(feats, dtype=np.float64).copy()
            if feats.ndim != 2 or feats.shape[0] != n:
                raise DimensionError(f"features must be (n, d), got {feats.shape}")
            if not np.isfinite(feats).all():
                raise DataError("features must be finite")
            feats.setflags(write=False)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "sample_ids", ids)
        object.__setattr__(self, "outputs", outs)
        object.__setattr__(self, "classifier_names", names)
        object.__setattr__(self, "true_labels", truth)
        object.__setattr__(self, "features", feats)

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    @property
    def n_classifiers(self) -> int:
        return len(self.outputs)

    def hard_votes(self, classifier: int) -> tuple[str, ...]:
        return self.outputs[classifier].hard_labels(self.labels)

    def score_tensor(self) -> np.ndarray:
        """(n_samples, n_classifiers, n_labels) per-class scores of every classifier."""
        return np.stack([out.proba_matrix(self.labels) for out in self.outputs], axis=1)

    def labelled_indices(self) -> list[int]:
        if self.true_labels is None:
            return []
        return [i for i, t in enumerate(self.true_labels) if t is not None]

    def accuracy(self, classifier: int) -> float:
        rows = self.labelled_indices()
        if not rows:
            raise EvidenceError("no samples carry a true label")
        votes = self.hard_votes(classifier)
        hits = sum(1 for i in rows if votes[i] == self.true_labels[i])
        return hits / len(rows)


def confusion_from_predictions(pred: PredictionSet, classifier: int) -> ConfusionMatrix:
    """Tally the (true, predicted) counts of one classifier over labelled samples."""
    rows = pred.labelled_indices()
    if not rows:
        raise EvidenceError("no samples carry a true label")
    index = {lab: i for i, lab in enumerate(pred.labels)}
    votes = pred.hard_votes(classifier)
    m = len(pred.labels)
    counts = np.zeros((m, m), dtype=np.int64)
    for i in rows:
        counts[index[pred.true_labels[i]], index[votes[i]]] += 1
    return ConfusionMatrix(pred.labels, counts)


def confidence_transform(
    cm: ConfusionMatrix,
    kind: str = "log-likelihood",
    direction: str = "given-true",
    smoothing: float = 1.0,
) -> np.ndarray:
    """Turn confusion counts into per-cell confidences.

    With ``direction="given-true"`` cell (t, p) estimates P(predict p | true t)
    (rows sum to 1 after smoothing); ``"given-predicted"`` estimates
    P(true t | predict p) by normalizing columns. ``kind`` maps the estimate
    q to q itself, ln q, or the sigmoid Mq / (Mq + 1), which sends the
    uninformative value q = 1/M to 1/2. ``smoothing`` is the additive count
    alpha; with alpha = 0, cells whose marginal is empty come out as 0
    (and ln 0 = -inf).
    """
    if kind not in _TRANSFORM_KINDS:
        raise ValueError(f"kind must be one of {_TRANSFORM_KINDS}, got {kind!r}")
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of {_DIRECTIONS}, got {direction!r}")
    alpha = float(smoothing)
    if alpha < 0:
        raise ValueError(f"smoothing must be >= 0, got {alpha}")
    m = len(cm.labels)
    c = cm.counts.astype(np.float64)
    axis = 1 if direction == "given-true" else 0
    marginal = c.sum(axis=axis, keepdims=True)
    denom = marginal + alpha * m
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (c + alpha) / denom
    q = np.nan_to_num(q, nan=0.0, posinf=0.0, neginf=0.0)
    if kind == "likelihood":
        return q
    if kind == "log-likelihood":
        with np.errstate(divide="ignore"):
            return np.log(q)
    return m * q / (m * q + 1.0)


@dataclass(frozen=True, eq=False)
class FusedScores:
    """Fused per-class scores and the winning class index (ties to lowest index)."""

    scores: np.ndarray
    winner: Union[int, np.ndarray]


def _weights_or_warn(rule: str, weights, k: int) -> Optional[np.ndarray]:
    if weights is None:
        return None
    w = np.asarray(list(weights), dtype=np.float64)
    if w.size != k:
        raise DimensionError(f"{w.size} classifier weights for {k} classifiers")
    if (w < 0).any() or w.sum() <= 0:
        raise ValueError("classifier weights must be non-negative with positive sum")
    if rule not in ("sum", "majority"):
        warnings.warn(
            f"rule {rule!r} ignores classifier weights", ConfigurationWarning, stacklevel=3
        )
        return None
    return w


def fuse_fixed(
    scores,
    rule: str,
    classifier_weights: Optional[Sequence[float]] = None,
    trim: float = 0.1,
) -> FusedScores:
    """Reduce per-classifier score vectors to one fused vector per sample.

    ``scores`` is (K, M) for one sample or (N, K, M) for a batch. Rules:
    ``sum`` (weighted mean), ``product``, ``min``, ``max``, ``median``,
    ``majority`` (weighted count of per-classifier argmax votes, as
    fractions), and ``trimmed-mean`` (drop floor(trim*K) highest and lowest
    per class). Only sum and majority consume classifier weights; passing
    weights with any other rule earns a ConfigurationWarning and is ignored.
    """
    a = np.asarray(scores, dtype=np.float64)
    single = a.ndim == 2
    if single:
        a = a[None, :, :]
    if a.ndim != 3:
        raise DimensionError(f"scores must be (K, M) or (N, K, M), got shape {a.shape}")
    _, k, m = a.shape
    if m < 2 or k < 1:
        raise DimensionError(f"need K >= 1 classifiers over M >= 2 classes, got K={k}, M={m}")
    if rule not in FIXED_RULES:
        raise ValueError(f"rule must be one of {FIXED_RULES}, got {rule!r}")
    w = _weights_or_warn(rule, classifier_weights, k)
    if rule == "sum":
        if w is None:
            fused = a.mean(axis=1)
        else:
            fused = np.einsum("nkm,k->nm", a, w) / w.sum()
    elif rule == "product":
        fused = a.prod(axis=1)
    elif rule == "min":
        fused = a.min(axis=1)
    elif rule == "max":
        fused = a.max(axis=1)
    elif rule == "median":
        fused = np.median(a, axis=1)
    elif rule == "trimmed-mean":
        if not 0.0 <= trim < 0.5:
            raise ValueError(f"trim must be in [0, 0.5), got {trim}")
        g = int(np.floor(trim * k))
        ordered = np.sort(a, axis=1)
        kept = ordered[:, g : k - g, :]
        fused = kept.mean(axis=1)
    else:  # majority
        votes = np.argmax(a, axis=2)
        onehot = np.zeros_like(a)
        n_idx = np.arange(a.shape[0])[:, None]
        k_idx = np.arange(k)[None, :]
        onehot[n_idx, k_idx, votes] = 1.0
        if w is None:
            fused = onehot.mean(axis=1)
        else:
            fused = np.einsum("nkm,k->nm", onehot, w) / w.sum()
    winner = np.argmax(fused, axis=1)
    if single:
        return FusedScores(fused[0], int(winner[0]))
    return FusedScores(fused, winner)


def fuse_wmr(
    votes: Sequence[str],
    accuracies: Sequence[float],
    bias: float = 0.0,
    clip: float = 1e-6,
    labels: Sequence[str] = ("A", "B"),
) -> Optional[str]:
    """Accuracy-weighted majority vote between two labels.

    Each classifier's vote carries weight ln(a / (1 - a)); the first label
    wins when the signed weight sum exceeds ``bias``, the second when it
    falls short, and None is returned on an exact stalemate. Only defined
    for two labels: for more classes fuse each as one-vs-rest via
    :func:`fuse_wmr_one_vs_rest`.
    """
    labs = _check_labels(labels)
    if len(labs) != 2:
        raise DataError(
            f"fuse_wmr is a two-label rule, got {len(labs)} labels; "
            f"use fuse_wmr_one_vs_rest for multiclass fusion"
        )
    vs = [str(v) for v in votes]
    if len(vs) != len(list(accuracies)):
        raise DimensionError(f"{len(vs)} votes for {len(list(accuracies))} accuracies")
    for v in vs:
        if v not in labs:
            raise DataError(f"vote {v!r} is not one of the labels {labs}")
    w = optimal_weights(list(accuracies), clip=clip)
    signed = np.where(np.array(vs) == labs[0], 1.0, -1.0)
    s = float(w @ signed)
    if s > bias:
        return labs[0]
    if s < bias:
        return labs[1]
    return None


def fuse_wmr_one_vs_rest(
    votes: Sequence[str],
    class_accuracies,
    labels: Sequence[str],
    clip: float = 1e-6,
) -> str:
    """Multiclass accuracy-weighted voting: one binary duel per class.

    ``class_accuracies[k, c]`` is classifier k's accuracy on the binary task
    "label c versus the rest". Each class c scores the weighted sum of +1/-1
    indicators of classifiers voting for c, with log-odds weights from its
    own column; the highest score wins, ties to the lowest label index.
    """
    labs = _check_labels(labels)
    acc = np.asarray(class_accuracies, dtype=np.float64)
    vs = [str(v) for v in votes]
    if acc.shape != (len(vs), len(labs)):
        raise DimensionError(
            f"class_accuracies must be ({len(vs)}, {len(labs)}), got {acc.shape}"
        )
    for v in vs:
        if v not in labs:
            raise DataError(f"vote {v!r} is not one of the labels {labs}")
    scores = np.empty(len(labs))
    for c in range(len(labs)):
        w = optimal_weights(acc[:, c], clip=clip)
        signed = np.where(np.array(vs) == labs[c], 1.0, -1.0)
        scores[c] = w @ signed
    return labs[int(np.argmax(scores))]


class ValidationIndex:
    """Nearest-neighbor lookup over a validation set with correctness flags.

    ``features`` is (N, d); ``correct`` is (N, K) booleans, one column per
    classifier. The default distance is Euclidean after standardizing each
    feature by its validation-set mean and spread (constant features are
    dropped); pass ``metric(points, query) -> distances`` to override.
    Neighbor ties are broken by validation-set order.
    """

    def __init__(
        self,
        features,
        correct,
        metric: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
    ):
        x = np.asarray(features, dtype=np.float64)
        c = np.asarray(correct, dtype=bool)
        if x.ndim != 2 or x.shape[0] < 1:
            raise DimensionError(f"features must be (N, d) with N >= 1, got {x.shape}")
        if not np.isfinite(x).all():
            raise DataError("features must be finite")
        if c.ndim != 2 or c.shape[0] != x.shape[0]:
            raise DimensionError(
                f"correct flags must be (N, K) with N={x.shape[0]}, got {c.shape}"
            )
        self.features = x
        self.correct = c
        self.metric = metric
        self._mean = x.mean(axis=0)
        self._spread = x.std(axis=0)
        self._kept = self._spread > 0

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_classifiers(self) -> int:
        return self.correct.shape[1]

    def distances(self, query) -> np.ndarray:
        q = np.asarray(query, dtype=np.float64).reshape(-1)
        if q.size != self.features.shape[1]:
            raise DimensionError(
                f"query has {q.size} features, index has {self.features.shape[1]}"
            )
        if self.metric is not None:
            d = np.asarray(self.metric(self.features, q), dtype=np.float64)
            if d.shape != (self.n_samples,):
                raise DimensionError("metric must return one distance per validation sample")
            return d
        z = (self.features[:, self._kept] - q[self._kept]) / self._spread[self._kept]
        return np.sqrt((z * z).sum(axis=1))

    def neighbors(self, query, k: int) -> np.ndarray:
        if k < 1:
            raise ValueError("k must be >= 1")
        d = self.distances(query)
        return np.argsort(d, kind="stable")[: min(k, self.n_samples)]


def local_skill(query, index: ValidationIndex, classifier: int, k: int) -> float:
    """Smoothed accuracy of one classifier among the k nearest validation samples.

    Returns (correct + 1) / (k + 2), which stays strictly inside (0, 1) so
    log-odds weights remain finite. ``k`` is clamped to the validation size.
    """
    if not 0 <= classifier < index.n_classifiers:
        raise DimensionError(
            f"classifier {classifier} out of range for K={index.n_classifiers}"
        )
    nb = index.neighbors(query, k)
    hits = int(index.correct[nb, classifier].sum())
    return (hits + 1) / (nb.size + 2)


def fuse_adaptive_wmr(
    query,
    votes: Sequence[str],
    index: ValidationIndex,
    k: int,
    clip: float = 1e-6,
    labels: Sequence[str] = ("A", "B"),
) -> Optional[str]:
    """Weighted vote using each classifier's skill near the query point."""
    if len(list(votes)) != index.n_classifiers:
        raise DimensionError(
            f"{len(list(votes))} votes for {index.n_classifiers} indexed classifiers"
        )
    skills = [local_skill(query, index, j, k) for j in range(index.n_classifiers)]
    return fuse_wmr(votes, skills, bias=0.0, clip=clip, labels=labels)


def binary_accuracies(cm: ConfusionMatrix) -> np.ndarray:
    """Per-label one-vs-rest accuracy of the classifier behind a confusion matrix."""
    c = cm.counts.astype(np.float64)
    total = c.sum()
    row = c.sum(axis=1)
    col = c.sum(axis=0)
    diag = np.diag(c)
    # correct on the c-vs-rest task: true positives plus true negatives
    return (diag + total - row - col + diag) / total


def expected_risk(
    cm: ConfusionMatrix, cost: CostMatrix, class_priors: Optional[Sequence[float]] = None
) -> float:
    """Expected gain per decision: sum over P(true) P(predicted | true) gain.

    Priors default to the confusion matrix's row marginals. A label with a
    positive prior but no observations is refused (EvidenceError) rather than
    silently scored.
    """
    if cm.labels != cost.labels:
        raise DimensionError(
            f"confusion labels {cm.labels} do not match cost labels {cost.labels}"
        )
    c = cm.counts.astype(np.float64)
    row = c.sum(axis=1)
    if class_priors is None:
        priors = row / c.sum()
    else:
        priors = np.asarray(list(class_priors), dtype=np.float64)
        if priors.size != len(cm.labels):
            raise DimensionError(f"{priors.size} priors for {len(cm.labels)} labels")
        if (priors < 0).any() or priors.sum() <= 0:
            raise ValueError("priors must be non-negative with positive sum")
        priors = priors / priors.sum()
    value = 0.0
    for t in range(len(cm.labels)):
        if row[t] == 0:
            if priors[t] > 0:
                raise EvidenceError(
                    f"label {cm.labels[t]!r} has positive prior but no observations"
                )
            continue
        value += float(priors[t]) * float((c[t] / row[t]) @ cost.gains[t])
    return value


def fuse_dataset(
    pred: PredictionSet,
    rule: str,
    validation: Optional[PredictionSet] = None,
    classifier_weights: Optional[Sequence[float]] = None,
    trim: float = 0.1,
    k: int = 5,
    bias: float = 0.0,
    clip: float = 1e-6,
) -> list[Optional[str]]:
    """Fuse every sample of a prediction set, returning one label (or None) each.

    Fixed rules reduce the score tensor directly. ``rule="wmr"`` weighs hard
    votes by accuracies estimated on ``validation`` (or on ``pred`` itself if
    it carries true labels): log-odds weighting for two labels, one-vs-rest
    for more. ``rule="adaptive-wmr"`` additionally needs features on both
    sets and re-estimates accuracies among the k nearest validation samples
    of each query; it is defined for two labels.
    """
    labels = pred.labels
    if rule in FIXED_RULES:
        fused = fuse_fixed(
            pred.score_tensor(), rule, classifier_weights=classifier_weights, trim=trim
        )
        return [labels[int(i)] for i in np.atleast_1d(fused.winner)]
    source = validation if validation is not None else pred
    if source.labels != labels:
        raise DimensionError(
            f"validation labels {source.labels} do not match prediction labels {labels}"
        )
    if source.n_classifiers != pred.n_classifiers:
        raise DimensionError(
            f"validation has {source.n_classifiers} classifiers, predictions have "
            f"{pred.n_classifiers}"
        )
    if rule == "wmr":
        votes = np.array([pred.hard_votes(j) for j in range(pred.n_classifiers)]).T
        if len(labels) == 2:
            acc = [source.accuracy(j) for j in range(source.n_classifiers)]
            w = optimal_weights(acc, clip=clip)
            signed = np.where(votes == labels[0], 1.0, -1.0)
            s = signed @ w
            return [
                labels[0] if x > bias else labels[1] if x < bias else None for x in s
            ]
        class_acc = np.stack(
            [
                binary_accuracies(confusion_from_predictions(source, j))
                for j in range(source.n_classifiers)
            ]
        )
        return [
            fuse_wmr_one_vs_rest(row, class_acc, labels, clip=clip) for row in votes
        ]
    if rule == "adaptive-wmr":
        if len(labels) != 2:
            raise DataError("adaptive-wmr is a two-label rule; fuse one-vs-rest instead")
        if pred.features is None or source.features is None:
            raise DataError("adaptive-wmr needs features on both prediction and validation sets")
        rows = source.labelled_indices()
        if not rows:
            raise EvidenceError("validation set carries no true labels")
        votes_by_clf = [source.hard_votes(j) for j in range(source.n_classifiers)]
        correct = np.array(
            [
                [votes_by_clf[j][i] == source.true_labels[i] for j in range(source.n_classifiers)]
                for i in rows
            ]
        )
        index = ValidationIndex(source.features[rows], correct)
        pred_votes = [pred.hard_votes(j) for j in range(pred.n_classifiers)]
        out = []
        for i in range(pred.n_samples):
            sample_votes = [pred_votes[j][i] for j in range(pred.n_classifiers)]
            out.append(
                fuse_adaptive_wmr(
                    pred.features[i], sample_votes, index, k, clip=clip, labels=labels
                )
            )
        return out
    raise ValueError(f"unknown rule {rule!r}")
