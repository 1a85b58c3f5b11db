"""Combining learned metrics into search drivers.

Single-objective search uses ordinary least squares: the metric values on
the training set are regressed against the BFS distance, and the fitted
linear combination (plus intercept) estimates distance-to-trivial, lower
is better.  Multi-objective search instead keeps a handful of mutually
least-correlated metrics as separate minimization objectives.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import notation
from .ball import TrainingSet, _atomic_write, _parse_header
from .metrics import SENTINEL_FITNESS, MetricSet, _CORRELATIONS, metric_value
from .presentations import MoveSequence, Presentation

log = logging.getLogger(__name__)


@dataclass
class EnsembleWeights:
    weights: list[float]
    intercept: float


@dataclass
class ObjectiveSet:
    rank: int
    objectives: list[MoveSequence]

    def __len__(self) -> int:
        return len(self.objectives)


def _design_matrix(metric_set: MetricSet, training: TrainingSet, cap: int):
    columns = [
        [metric_value(d, case.presentation, cap) for case in training.cases]
        for d in metric_set.metrics
    ]
    return columns


def fit_weights(
    metric_set: MetricSet, training: TrainingSet, cap: int = 200
) -> EnsembleWeights:
    """Least-squares weights for the metric ensemble against the distances.

    Columns that are constant over the training set carry no signal and
    are dropped (their weight is reported as 0); rank-deficient systems
    get the minimum-norm solution.
    """
    if not metric_set.metrics:
        raise ValueError("empty metric set")
    if not training.cases:
        raise ValueError("empty training set")
    columns = _design_matrix(metric_set, training, cap)
    kept = [idx for idx, col in enumerate(columns) if len(set(col)) > 1]
    dropped = len(columns) - len(kept)
    if dropped:
        log.warning("dropping %d constant metric column(s) before regression", dropped)
    targets = np.array(training.distances(), dtype=float)
    design = np.ones((len(training.cases), len(kept) + 1))
    for out_idx, col_idx in enumerate(kept, start=1):
        design[:, out_idx] = columns[col_idx]
    solution, *_ = np.linalg.lstsq(design, targets, rcond=None)
    weights = [0.0] * len(columns)
    for out_idx, col_idx in enumerate(kept):
        weights[col_idx] = float(solution[out_idx + 1])
    return EnsembleWeights(weights=weights, intercept=float(solution[0]))


def scalar_fitness(
    weights: EnsembleWeights,
    metric_set: MetricSet,
    p: Presentation,
    cap: int = 200,
) -> float:
    """Weighted linear combination of metric values; estimates distance to
    the trivial presentation, so lower is better."""
    if len(weights.weights) != len(metric_set.metrics):
        raise ValueError("weight count does not match metric set size")
    acc = weights.intercept
    for w, d in zip(weights.weights, metric_set.metrics):
        if w != 0.0:
            acc += w * metric_value(d, p, cap)
    return acc


def trim_objectives(
    metric_set: MetricSet,
    training: TrainingSet,
    k: int = 5,
    cap: int = 200,
    kind: str = "pearson",
) -> ObjectiveSet:
    """Greedy selection of the k mutually least correlated metrics.

    Seeds with the metric most correlated (in absolute value) with the
    distances, then repeatedly adds the metric minimizing its maximum
    absolute correlation with the ones already chosen.  Ties break by
    metric-set order; constant-valued metrics are skipped while any
    informative ones remain.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not metric_set.metrics:
        raise ValueError("empty metric set")
    corr = _CORRELATIONS[kind]
    columns = _design_matrix(metric_set, training, cap)
    distances = training.distances()
    informative = [idx for idx, col in enumerate(columns) if len(set(col)) > 1]
    if not informative:
        chosen = list(range(min(k, len(columns))))
        return ObjectiveSet(metric_set.rank, [metric_set.metrics[i] for i in chosen])

    def abs_corr(xs, ys) -> float:
        value = corr(xs, ys)
        return abs(value) if value != SENTINEL_FITNESS else 0.0

    seed = max(informative, key=lambda idx: (abs_corr(columns[idx], distances), -idx))
    chosen = [seed]
    while len(chosen) < min(k, len(informative)):
        best_idx = None
        best_score = None
        for idx in informative:
            if idx in chosen:
                continue
            score = max(abs_corr(columns[idx], columns[sel]) for sel in chosen)
            if best_score is None or score < best_score:
                best_idx, best_score = idx, score
        chosen.append(best_idx)
    # pad from the remainder only if every informative metric is already in
    if len(chosen) < k:
        for idx in range(len(columns)):
            if len(chosen) == k:
                break
            if idx not in chosen:
                chosen.append(idx)
    return ObjectiveSet(metric_set.rank, [metric_set.metrics[i] for i in chosen[:k]])


def objective_values(
    objectives: ObjectiveSet, p: Presentation, cap: int = 200
) -> tuple[float, ...]:
    return tuple(float(metric_value(d, p, cap)) for d in objectives.objectives)


@dataclass
class ScalarEnsemble:
    """Fitted weights together with their metric set; the single-objective
    search driver."""

    weights: EnsembleWeights
    metrics: MetricSet

    def value(self, p: Presentation, cap: int = 200) -> float:
        return scalar_fitness(self.weights, self.metrics, p, cap)


def save_ensemble(
    weights: EnsembleWeights, metrics_path: str, path: str
) -> None:
    lines = [
        "# actriv-ensemble",
        f"metrics: {metrics_path}",
        f"intercept: {weights.intercept!r}",
        "weights: " + " ".join(repr(w) for w in weights.weights),
    ]
    _atomic_write(path, "\n".join(lines) + "\n")


def load_ensemble(path: str) -> tuple[EnsembleWeights, str]:
    """Returns the weights and the recorded metric-set file reference."""
    fields: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        _parse_header(header, "actriv-ensemble", path)
        for line in fh:
            line = line.strip()
            if line:
                key, value = line.split(":", 1)
                fields[key.strip()] = value.strip()
    weights = EnsembleWeights(
        weights=[float(w) for w in fields["weights"].split()],
        intercept=float(fields["intercept"]),
    )
    return weights, fields["metrics"]


def save_objectives(objectives: ObjectiveSet, path: str) -> None:
    lines = [f"# actriv-objectives rank={objectives.rank}"]
    lines.extend(
        notation.format_sequence(d, objectives.rank) for d in objectives.objectives
    )
    _atomic_write(path, "\n".join(lines) + "\n")


def load_objectives(path: str) -> ObjectiveSet:
    with open(path, encoding="utf-8") as fh:
        params = _parse_header(fh.readline(), "actriv-objectives", path)
        rank = int(params["rank"])
        objectives = []
        for line in fh:
            line = line.strip()
            if line:
                objectives.append(notation.parse_sequence(line, rank))
    return ObjectiveSet(rank=rank, objectives=objectives)
