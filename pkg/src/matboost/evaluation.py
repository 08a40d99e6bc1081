"""Recovery experiments: splits, metrics, model selection, synthetic data.

A trial deletes some hyperlinks from a hypernetwork, mixes them into a
candidate pool with known non-hyperlinks, and asks a scorer to find them.
Performance is measured by ranking AUC and by the number of deleted
hyperlinks recovered in the top of the ranking. Trials are independent
given their seeds, and every algorithm in an experiment sees the same
splits so comparisons are paired.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from time import perf_counter
from typing import Sequence

import numpy as np
from scipy.stats import rankdata
from sklearn.base import BaseEstimator, clone

from .base import HyperlinkScorer
from .hypermatrix import IncidenceMatrix
from .matching import rank_candidates

__all__ = [
    "TrialSplit",
    "make_split",
    "auc",
    "recovered_number",
    "cross_validate",
    "generate_synthetic",
    "generate_negative_pool",
    "AlgorithmSpec",
    "ExperimentSpec",
    "TrialRecord",
    "ExperimentResult",
    "run_trials",
    "derive_seed",
]


def derive_seed(*parts: int | str) -> int:
    """Mix integers and strings into a reproducible child seed."""
    entropy = [
        zlib.crc32(p.encode()) if isinstance(p, str) else int(p)
        for p in parts
    ]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


@dataclass(frozen=True)
class TrialSplit:
    """One recovery trial: reduced training network plus a labeled pool."""

    train: IncidenceMatrix
    candidates: IncidenceMatrix
    labels: np.ndarray

    def __post_init__(self) -> None:
        if self.labels.shape != (self.candidates.num_columns,):
            raise ValueError("labels must align with candidate columns")


def make_split(
    full: IncidenceMatrix,
    neg_pool: IncidenceMatrix,
    missing_count: int,
    seed: int,
) -> TrialSplit:
    """Delete ``missing_count`` hyperlinks and build the labeled pool.

    The deleted columns are drawn uniformly without replacement with the
    seeded generator; the remaining columns form the training network in
    their original order. The candidate pool is the deleted columns plus
    the whole negative pool, shuffled together, with labels 1 for deleted
    and 0 for negative.
    """
    if full.num_vertices != neg_pool.num_vertices:
        raise ValueError(
            "hypernetwork and negative pool must share the vertex universe"
        )
    n = full.num_columns
    if not 0 <= missing_count < n:
        raise ValueError(
            f"missing_count must lie in [0, {n}), got {missing_count}"
        )
    rng = np.random.default_rng(seed)
    deleted = rng.choice(n, size=missing_count, replace=False)
    deleted_set = set(deleted.tolist())
    train = full.select([j for j in range(n) if j not in deleted_set])
    pool_cols = [full.columns[j] for j in deleted.tolist()] + list(
        neg_pool.columns
    )
    labels = np.concatenate(
        [np.ones(missing_count), np.zeros(neg_pool.num_columns)]
    )
    order = rng.permutation(len(pool_cols))
    candidates = IncidenceMatrix(
        full.num_vertices, [pool_cols[j] for j in order]
    )
    return TrialSplit(
        train=train, candidates=candidates, labels=labels[order]
    )


def _check_scored_pool(
    scores: np.ndarray, labels: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be equal-length vectors")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError("labels must be 0 or 1")
    return scores, labels.astype(int)


def auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Probability a random positive outscores a random negative.

    Ranking AUC with ties counted one-half, computed from midranks. Needs
    at least one positive and one negative label.
    """
    scores, labels = _check_scored_pool(scores, labels)
    n_pos = int(labels.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc needs at least one positive and one negative")
    ranks = rankdata(scores)
    pos_rank_sum = float(ranks[labels == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def recovered_number(scores: np.ndarray, labels: np.ndarray) -> int:
    """Positives found in the top ``n`` of the ranking, ``n`` = #positives.

    Uses the deterministic candidate ordering (score descending, ties by
    ascending index).
    """
    scores, labels = _check_scored_pool(scores, labels)
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise ValueError("recovered_number needs at least one positive")
    top = rank_candidates(scores)[:n_pos]
    return int(labels[top].sum())


def cross_validate(
    s: IncidenceMatrix,
    estimator: BaseEstimator,
    param_name: str,
    grid: Sequence[float],
    *,
    neg_pool: IncidenceMatrix,
    seed: int,
    n_folds: int = 5,
) -> float:
    """Pick a hyperparameter by k-fold hyperlink recovery on ``s``.

    The training columns are split into ``n_folds`` seeded folds; each grid
    value is scored by the mean AUC of recovering each held-out fold
    against a seeded negative subsample of the fold's size (drawn once per
    fold, shared by all grid values, so the comparison is paired). Ties go
    to the smallest grid value. Grid values whose fit or scoring raises an
    error are skipped; if every value fails the error is propagated.
    """
    if len(grid) == 0:
        raise ValueError("grid must be nonempty")
    if s.num_columns < n_folds:
        raise ValueError(
            f"need at least {n_folds} hyperlinks for {n_folds}-fold "
            f"cross-validation, got {s.num_columns}"
        )
    if neg_pool.num_columns == 0:
        raise ValueError("negative pool is empty")
    rng = np.random.default_rng(seed)
    folds = np.array_split(rng.permutation(s.num_columns), n_folds)
    neg_draws = [
        rng.choice(
            neg_pool.num_columns,
            size=min(len(fold), neg_pool.num_columns),
            replace=False,
        )
        for fold in folds
    ]
    mean_aucs = np.full(len(grid), -np.inf)
    last_error: Exception | None = None
    for g, value in enumerate(grid):
        fold_aucs = []
        try:
            for fold, neg_idx in zip(folds, neg_draws):
                held = set(fold.tolist())
                train = s.select(
                    [j for j in range(s.num_columns) if j not in held]
                )
                pool_cols = [s.columns[j] for j in fold.tolist()] + [
                    neg_pool.columns[j] for j in neg_idx.tolist()
                ]
                pool = IncidenceMatrix(s.num_vertices, pool_cols)
                labels = np.concatenate(
                    [np.ones(len(fold)), np.zeros(len(neg_idx))]
                )
                est = clone(estimator)
                est.set_params(**{param_name: value})
                scores = est.fit(train).decision_function(pool)
                fold_aucs.append(auc(scores, labels))
        except (ValueError, np.linalg.LinAlgError) as exc:
            last_error = exc
            continue
        mean_aucs[g] = float(np.mean(fold_aucs))
    if np.all(np.isneginf(mean_aucs)):
        raise ValueError(
            f"every grid value failed cross-validation; last error: "
            f"{last_error}"
        )
    best = mean_aucs.max()
    winners = [grid[g] for g in range(len(grid)) if mean_aucs[g] == best]
    return min(winners)


def generate_synthetic(
    num_vertices: int,
    num_hyperlinks: int,
    cardinality_range: tuple[int, int],
    overlap_bias: float,
    seed: int,
) -> IncidenceMatrix:
    """Draw a random hypernetwork with tunable vertex reuse.

    Each hyperlink draws a cardinality uniformly from the inclusive range,
    then samples that many distinct vertices with probability proportional
    to ``(degree + 1) ** overlap_bias``, updating degrees as it goes. Bias
    0 is uniform sampling; larger bias concentrates hyperlinks on already
    popular vertices, producing the overlapping structure recovery methods
    feed on.
    """
    lo, hi = int(cardinality_range[0]), int(cardinality_range[1])
    if num_vertices < 0 or num_hyperlinks < 0:
        raise ValueError("sizes must be nonnegative")
    if lo < 2:
        raise ValueError("cardinalities below 2 do not form hyperlinks")
    if lo > hi:
        raise ValueError(
            f"empty cardinality range [{lo}, {hi}]"
        )
    if hi > num_vertices:
        raise ValueError(
            f"cardinality {hi} exceeds the {num_vertices}-vertex universe"
        )
    if overlap_bias < 0:
        raise ValueError("overlap_bias must be nonnegative")
    rng = np.random.default_rng(seed)
    degree = np.zeros(num_vertices)
    columns = []
    for _ in range(num_hyperlinks):
        card = int(rng.integers(lo, hi + 1))
        weight = (degree + 1.0) ** overlap_bias
        chosen = rng.choice(
            num_vertices, size=card, replace=False, p=weight / weight.sum()
        )
        degree[chosen] += 1.0
        columns.append(tuple(sorted(chosen.tolist())))
    return IncidenceMatrix(num_vertices, columns)


def generate_negative_pool(
    reference: IncidenceMatrix,
    num_candidates: int,
    cardinality_range: tuple[int, int],
    overlap_bias: float,
    seed: int,
) -> IncidenceMatrix:
    """Draw non-hyperlinks: random columns distinct from every reference one.

    Uses the same sampling scheme as :func:`generate_synthetic` on its own
    seed stream, rejecting any column identical to a reference column or
    to an earlier draw.
    """
    if num_candidates < 0:
        raise ValueError("num_candidates must be nonnegative")
    forbidden = set(reference.columns)
    columns: list[tuple[int, ...]] = []
    attempt = 0
    while len(columns) < num_candidates:
        batch = generate_synthetic(
            reference.num_vertices,
            num_candidates,
            cardinality_range,
            overlap_bias,
            derive_seed(seed, "negatives", attempt),
        )
        for col in batch.columns:
            if col not in forbidden:
                forbidden.add(col)
                columns.append(col)
                if len(columns) == num_candidates:
                    break
        attempt += 1
        if attempt > 1000:
            raise ValueError(
                "could not draw enough distinct negative candidates; "
                "the universe is too small for the requested pool"
            )
    return IncidenceMatrix(reference.num_vertices, columns)


@dataclass(frozen=True)
class AlgorithmSpec:
    """One experiment arm: a named scorer, optionally grid-searched."""

    name: str
    estimator: HyperlinkScorer
    cv_param: str | None = None
    cv_grid: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if (self.cv_param is None) != (self.cv_grid is None):
            raise ValueError("cv_param and cv_grid must be given together")


@dataclass(frozen=True)
class ExperimentSpec:
    """A full recovery experiment over deletion counts and repeat trials."""

    dataset: str
    algorithms: tuple[AlgorithmSpec, ...]
    missing_counts: tuple[int, ...]
    trials: int = 12
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        if len({a.name for a in self.algorithms}) != len(self.algorithms):
            raise ValueError("algorithm names must be unique")
        if not self.missing_counts:
            raise ValueError("at least one missing_count is required")
        if any(mc < 1 for mc in self.missing_counts):
            raise ValueError("missing counts must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


@dataclass(frozen=True)
class TrialRecord:
    """Metrics of one algorithm on one trial."""

    algorithm: str
    missing_count: int
    trial: int
    auc: float
    recovered: int
    runtime_s: float


@dataclass
class ExperimentResult:
    """All trial records plus per-cell summaries."""

    records: list[TrialRecord] = field(default_factory=list)

    def summarize(self) -> list[dict]:
        """Mean and sample standard deviation per (algorithm, missing_count).

        Rows follow the records' first-seen order.
        """
        cells: dict[tuple[str, int], list[TrialRecord]] = {}
        for rec in self.records:
            cells.setdefault((rec.algorithm, rec.missing_count), []).append(
                rec
            )
        rows = []
        for (name, mc), recs in cells.items():
            aucs = np.array([r.auc for r in recs])
            recovered = np.array([r.recovered for r in recs], dtype=float)
            runtimes = np.array([r.runtime_s for r in recs])
            ddof = 1 if len(recs) > 1 else 0
            rows.append(
                {
                    "algorithm": name,
                    "missing_count": mc,
                    "trials": len(recs),
                    "auc_mean": float(aucs.mean()),
                    "auc_std": float(aucs.std(ddof=ddof)),
                    "recovered_mean": float(recovered.mean()),
                    "recovered_std": float(recovered.std(ddof=ddof)),
                    "runtime_s_mean": float(runtimes.mean()),
                }
            )
        return rows


def run_single_trial(
    full: IncidenceMatrix,
    neg_pool: IncidenceMatrix,
    spec: ExperimentSpec,
    missing_count: int,
    trial: int,
) -> list[TrialRecord]:
    """Run every algorithm on one shared split; returns one record each."""
    split = make_split(
        full,
        neg_pool,
        missing_count,
        derive_seed(spec.seed, "split", missing_count, trial),
    )
    records = []
    for alg in spec.algorithms:
        est = clone(alg.estimator)
        alg_seed = derive_seed(
            spec.seed, "alg", alg.name, missing_count, trial
        )
        if "random_state" in est.get_params():
            est.set_params(random_state=alg_seed)
        if alg.cv_param is not None:
            best = cross_validate(
                split.train,
                est,
                alg.cv_param,
                alg.cv_grid,
                neg_pool=neg_pool,
                seed=alg_seed,
            )
            est.set_params(**{alg.cv_param: best})
        start = perf_counter()
        scores = est.fit(split.train).decision_function(split.candidates)
        elapsed = perf_counter() - start
        records.append(
            TrialRecord(
                algorithm=alg.name,
                missing_count=missing_count,
                trial=trial,
                auc=auc(scores, split.labels),
                recovered=recovered_number(scores, split.labels),
                runtime_s=elapsed,
            )
        )
    return records


def run_trials(
    full: IncidenceMatrix,
    neg_pool: IncidenceMatrix,
    spec: ExperimentSpec,
    on_trial_done=None,
) -> ExperimentResult:
    """Run the whole experiment sequentially, trials paired across arms.

    ``on_trial_done``, if given, is called with each trial's records as
    they complete, letting callers stream partial results to disk.
    """
    for mc in spec.missing_counts:
        if mc >= full.num_columns:
            raise ValueError(
                f"missing_count {mc} is not below the hyperlink count "
                f"{full.num_columns}"
            )
    result = ExperimentResult()
    for mc in spec.missing_counts:
        for trial in range(spec.trials):
            records = run_single_trial(full, neg_pool, spec, mc, trial)
            result.records.extend(records)
            if on_trial_done is not None:
                on_trial_done(records)
    return result
