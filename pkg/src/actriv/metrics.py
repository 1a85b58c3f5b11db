"""Offline distance-metric learning.

A learned metric is itself a move sequence d: its value on a presentation
p is the total relator length after applying d to p.  Metrics are scored
by how well their values correlate with the BFS distances of a training
set, and evolved with the same mutation-only generational GA used by the
online solver.  Repeated runs collect a set of diverse metrics.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import notation
from .ball import TrainingSet, _atomic_write, _parse_header
from .presentations import (
    CONJUGATE,
    INVERT,
    MoveSequence,
    Presentation,
)
from .variation import mutate, random_sequence

# Strictly below any real correlation; keeps selection total when a
# candidate's values are degenerate or its trace blows past the cap.
SENTINEL_FITNESS = -2.0


@dataclass
class MetricCandidate:
    sequence: MoveSequence
    fitness: float | None = None


@dataclass
class MetricSet:
    rank: int
    metrics: list[MoveSequence]
    fitnesses: list[float] | None = None
    meta: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.metrics)


@dataclass
class MetricGaConfig:
    population_size: int = 100
    generations: int = 200
    tournament_size: int = 7
    p_insert: float = 0.1
    p_replace: float = 0.8
    p_delete: float = 0.1
    initial_length: int = 8
    min_length: int = 8
    max_length: int = 70
    relator_length_cap: int = 200
    correlation: str = "pearson"

    def validate(self) -> None:
        if abs(self.p_insert + self.p_replace + self.p_delete - 1.0) > 1e-9:
            raise ValueError("operator probabilities must sum to 1")
        if not self.min_length <= self.initial_length <= self.max_length:
            raise ValueError("need min_length <= initial_length <= max_length")
        if self.correlation not in ("pearson", "kendall"):
            raise ValueError(f"unknown correlation kind {self.correlation!r}")


def metric_value(d: MoveSequence, p: Presentation, cap: int) -> int:
    """Total relator length after applying d to p; cap acts as the worst
    value if any intermediate reaches it (matching apply_sequence
    truncation)."""
    rels = list(p.relators)
    total = sum(map(len, rels))
    if total >= cap:
        return cap
    for kind, i, x in d:
        w = rels[i]
        if kind == INVERT:
            rels[i] = tuple(-t for t in reversed(w))
            continue
        if kind == CONJUGATE:
            if w and w[0] == -x:
                u = w[1:]
            else:
                u = (x,) + w
            new = u[:-1] if (u and u[-1] == x) else u + (-x,)
        else:
            v = rels[x]
            k = 0
            lu, lv = len(w), len(v)
            m = lu if lu < lv else lv
            while k < m and w[lu - 1 - k] == -v[k]:
                k += 1
            new = (w[: lu - k] + v[k:]) if k else w + v
        total += len(new) - len(w)
        rels[i] = new
        if total >= cap:
            return cap
    return total


def pearson(xs, ys) -> float:
    """Pearson correlation; SENTINEL_FITNESS when either variance is zero."""
    n = len(xs)
    if n != len(ys):
        raise ValueError(f"length mismatch: {n} vs {len(ys)}")
    if n < 2:
        raise ValueError("need at least two points")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    syy = math.fsum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        return SENTINEL_FITNESS
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def _count_inversions(values: list) -> int:
    """Pairs i<j with values[i] > values[j], by merge sort."""
    if len(values) < 2:
        return 0
    mid = len(values) // 2
    left, right = values[:mid], values[mid:]
    count = _count_inversions(left) + _count_inversions(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            count += len(left) - i
            merged.append(right[j])
            j += 1
    values[: i + j] = merged
    values[i + j :] = left[i:] if i < len(left) else right[j:]
    return count


def _tie_term(values) -> int:
    term = 0
    run = 1
    ordered = sorted(values)
    for prev, cur in zip(ordered, ordered[1:]):
        if cur == prev:
            run += 1
        else:
            term += run * (run - 1) // 2
            run = 1
    term += run * (run - 1) // 2
    return term


def kendall_tau(xs, ys) -> float:
    """Tie-corrected Kendall tau-b (Knight's O(n log n) formulation);
    SENTINEL_FITNESS on all-tied input.

    The denominator is one square root of an integer product, so values
    like 1/3 come out bit-exact.
    """
    n = len(xs)
    if n != len(ys):
        raise ValueError(f"length mismatch: {n} vs {len(ys)}")
    if n < 2:
        raise ValueError("need at least two points")
    pairs = sorted(zip(xs, ys))
    xtie = _tie_term([x for x, _ in pairs])
    ytie = _tie_term(ys)
    joint_tie = _tie_term(pairs)
    discordant = _count_inversions([y for _, y in pairs])
    total = n * (n - 1) // 2
    denom_sq = (total - xtie) * (total - ytie)
    if denom_sq <= 0:
        return SENTINEL_FITNESS
    con_minus_dis = total - xtie - ytie + joint_tie - 2 * discordant
    return con_minus_dis / math.sqrt(denom_sq)


_CORRELATIONS = {"pearson": pearson, "kendall": kendall_tau}


def metric_fitness(
    d: MoveSequence, training: TrainingSet, kind: str = "pearson", cap: int = 200
) -> float:
    """Correlation between d's values and the training distances."""
    if kind not in _CORRELATIONS:
        raise ValueError(f"unknown correlation kind {kind!r}")
    distances = training.distances()
    if len(distances) < 2 or len(set(distances)) < 2:
        raise ValueError("training set is degenerate: need >= 2 distinct distances")
    values = [metric_value(d, case.presentation, cap) for case in training.cases]
    first = values[0]
    if all(v == first for v in values):
        return SENTINEL_FITNESS
    return _CORRELATIONS[kind](values, distances)


def evolve_metric(
    training: TrainingSet, config: MetricGaConfig, rng_seed: int
) -> MetricCandidate:
    """One generational GA run; returns the best candidate seen in any
    generation, not merely the best of the final population."""
    config.validate()
    distances = training.distances()
    if len(distances) < 2 or len(set(distances)) < 2:
        raise ValueError("training set is degenerate: need >= 2 distinct distances")
    rank = training.rank
    cases = [case.presentation for case in training.cases]
    corr = _CORRELATIONS[config.correlation]
    cap = config.relator_length_cap

    def fitness(d: MoveSequence) -> float:
        if not config.min_length <= len(d) <= config.max_length:
            return SENTINEL_FITNESS
        values = [metric_value(d, p, cap) for p in cases]
        first = values[0]
        if all(v == first for v in values):
            return SENTINEL_FITNESS
        return corr(values, distances)

    rng = random.Random(rng_seed)
    population = [
        random_sequence(rank, config.initial_length, rng)
        for _ in range(config.population_size)
    ]
    scores = [fitness(d) for d in population]
    best = MetricCandidate(*max(zip(population, scores), key=lambda t: t[1]))
    for _ in range(config.generations):
        offspring = []
        for _ in range(config.population_size):
            contenders = rng.sample(range(len(population)), config.tournament_size)
            parent = population[max(contenders, key=lambda idx: scores[idx])]
            offspring.append(
                mutate(
                    parent,
                    rank,
                    rng,
                    config.p_insert,
                    config.p_replace,
                    config.p_delete,
                )
            )
        population = offspring
        scores = [fitness(d) for d in population]
        gen_best, gen_score = max(zip(population, scores), key=lambda t: t[1])
        if best.fitness is None or gen_score > best.fitness:
            best = MetricCandidate(gen_best, gen_score)
    return best


def _run_one(args) -> MetricCandidate:
    training, config, seed = args
    return evolve_metric(training, config, seed)


def learn_metric_set(
    training: TrainingSet,
    runs: int = 50,
    config: MetricGaConfig | None = None,
    master_seed: int = 0,
    workers: int = 1,
) -> MetricSet:
    """Independent best-of-run metrics from ``runs`` GA restarts.

    Per-run seeds are split off ``master_seed``, so results are identical
    whether runs execute sequentially or across worker processes.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    config = config or MetricGaConfig()
    seed_rng = random.Random(master_seed)
    seeds = [seed_rng.getrandbits(64) for _ in range(runs)]
    tasks = [(training, config, seed) for seed in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(task) for task in tasks]
    return MetricSet(
        rank=training.rank,
        metrics=[cand.sequence for cand in results],
        fitnesses=[cand.fitness for cand in results],
        meta={"runs": str(runs), "correlation": config.correlation},
    )


def save_metric_set(metric_set: MetricSet, path: str) -> None:
    meta = " ".join(f"{k}={v}" for k, v in sorted(metric_set.meta.items()))
    header = f"# actriv-metrics rank={metric_set.rank}"
    if meta:
        header += f" {meta}"
    lines = [header]
    lines.extend(
        notation.format_sequence(d, metric_set.rank) for d in metric_set.metrics
    )
    _atomic_write(path, "\n".join(lines) + "\n")


def load_metric_set(path: str) -> MetricSet:
    with open(path, encoding="utf-8") as fh:
        params = _parse_header(fh.readline(), "actriv-metrics", path)
        rank = int(params.pop("rank"))
        metrics = []
        for line in fh:
            line = line.strip()
            if line:
                metrics.append(notation.parse_sequence(line, rank))
    return MetricSet(rank=rank, metrics=metrics, meta=params)
