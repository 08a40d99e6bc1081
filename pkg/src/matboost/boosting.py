"""Iterative completion-matching scorer for hyperlink prediction.

Starting from the training projection ``A = S @ S.T``, each round feeds the
current candidate scores back into the adjacency weights, refits the
completion model, predicts weights for the empty entries, and re-solves the
sparse matching problem:

    A_k      = A + onmask(U diag(lam_{k-1}) U.T, A)
    model_k  = completion(A_k)
    dhat_k   = predictions of model_k at the empty entries
    lam_k    = sparse matching of dhat_k by the candidate cliques

The loop stops as soon as the score drift ``||lam_k - lam_{k-1}||`` fails
to decrease, or at the iteration cap. Because the final rounds are the
least trustworthy, the output averages the scores of rounds ``1 .. k-2``,
an ensemble of the stable early learners; when fewer than three rounds ran
the last computed scores are returned as-is.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import completion, matching
from .base import HyperlinkScorer
from .completion import CompletionConfig
from .hypermatrix import IncidenceMatrix, add_weighted_outer, project
from .matching import MatchConfig

__all__ = [
    "MatBoostConfig",
    "StopReason",
    "IterationTrace",
    "drift",
    "ensemble_scores",
    "run_matboost",
    "MatBoost",
]


class StopReason(enum.Enum):
    """Why the completion-matching loop ended."""

    CRITERION = "criterion"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class MatBoostConfig:
    """Settings for the full scorer: loop cap plus stage configs."""

    max_iterations: int = 10
    completion: CompletionConfig = field(default_factory=CompletionConfig)
    matching: MatchConfig = field(default_factory=MatchConfig)

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class IterationTrace:
    """Per-round record of the loop.

    ``lambdas[k-1]`` is the score vector of round ``k`` and ``drifts[k-1]``
    is its distance from the previous round (round 1 drifts from the zero
    vector).
    """

    lambdas: tuple[np.ndarray, ...]
    drifts: tuple[float, ...]
    stop_reason: StopReason

    @property
    def num_iterations(self) -> int:
        return len(self.lambdas)


def drift(prev: np.ndarray, cur: np.ndarray) -> float:
    """Euclidean distance between consecutive score vectors."""
    prev = np.asarray(prev, dtype=float)
    cur = np.asarray(cur, dtype=float)
    if prev.shape != cur.shape:
        raise ValueError(
            f"score vectors must have equal length, got {prev.shape} "
            f"and {cur.shape}"
        )
    return float(np.linalg.norm(cur - prev))


def ensemble_scores(lambdas: tuple[np.ndarray, ...]) -> np.ndarray:
    """Average the stable early rounds.

    With ``k`` rounds recorded, returns the arithmetic mean of rounds
    ``1 .. k-2``; if fewer than three rounds ran there is nothing stable to
    average and the last computed scores are returned unchanged.
    """
    k = len(lambdas)
    if k - 2 >= 1:
        return np.mean(np.stack(lambdas[: k - 2]), axis=0)
    return lambdas[-1].copy()


def run_matboost(
    s: IncidenceMatrix, u: IncidenceMatrix, cfg: MatBoostConfig | None = None
) -> tuple[np.ndarray, IterationTrace]:
    """Run the completion-matching loop and return scores plus the trace.

    Deterministic given the config seed; identical inputs produce
    bitwise-identical traces.
    """
    if cfg is None:
        cfg = MatBoostConfig()
    if s.num_vertices != u.num_vertices:
        raise ValueError(
            f"training and candidate matrices cover different vertex "
            f"universes ({s.num_vertices} vs {u.num_vertices})"
        )
    if s.num_columns == 0:
        raise ValueError("training incidence matrix has no hyperlinks")
    if u.num_columns == 0:
        raise ValueError("candidate pool is empty")
    a = project(s)
    lam_prev = np.zeros(u.num_columns)
    lambdas: list[np.ndarray] = []
    drifts: list[float] = []
    k = 0
    while True:
        k += 1
        a_k = add_weighted_outer(a, u, lam_prev, restrict_to_support=True)
        model = completion.train(a_k, cfg.completion)
        target = completion.predict_empty(model, a_k)
        lam_k = matching.solve_lasso(u, target, a, cfg.matching)
        lambdas.append(lam_k)
        drifts.append(drift(lam_prev, lam_k))
        if k >= 2 and drifts[-1] >= drifts[-2]:
            reason = StopReason.CRITERION
            break
        if k == cfg.max_iterations:
            reason = StopReason.ITERATION_CAP
            break
        lam_prev = lam_k
    trace = IterationTrace(
        lambdas=tuple(lambdas), drifts=tuple(drifts), stop_reason=reason
    )
    return ensemble_scores(trace.lambdas), trace


class MatBoost(HyperlinkScorer):
    """Hyperlink scorer built on iterative completion and matching.

    Parameters
    ----------
    latent_dim : int, default=8
        Latent factors per vertex in the completion model.
    reg : float, default=0.01
        L2 penalty on the completion parameters.
    learning_rate : float, default=0.01
        SGD step size for completion training.
    epochs : int, default=100
        SGD passes per completion fit.
    l1_penalty : float, default=0.1
        Sparsity penalty in the matching problem.
    max_steps : int, default=500
        Subgradient iterations per matching solve.
    step_size : float, default=1e-3
        Base subgradient step length.
    lasso_tolerance : float, default=1e-6
        Early-stop threshold on the matching objective change.
    max_iterations : int, default=10
        Cap on completion-matching rounds.
    random_state : int, default=0
        Seed for completion training.

    Attributes
    ----------
    training_ : IncidenceMatrix
        The fitted training hypernetwork.
    trace_ : IterationTrace
        Per-round record of the most recent ``decision_function`` call.

    Examples
    --------
    >>> from matboost import IncidenceMatrix, MatBoost
    >>> s = IncidenceMatrix(4, [(0, 1), (1, 2), (0, 2)])
    >>> pool = IncidenceMatrix(4, [(0, 1, 2), (1, 3)])
    >>> scores = MatBoost(epochs=20).fit(s).decision_function(pool)
    >>> scores.shape
    (2,)
    """

    def __init__(
        self,
        latent_dim: int = 8,
        reg: float = 0.01,
        learning_rate: float = 0.01,
        epochs: int = 100,
        l1_penalty: float = 0.1,
        max_steps: int = 500,
        step_size: float = 1e-3,
        lasso_tolerance: float = 1e-6,
        max_iterations: int = 10,
        random_state: int = 0,
    ):
        self.latent_dim = latent_dim
        self.reg = reg
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l1_penalty = l1_penalty
        self.max_steps = max_steps
        self.step_size = step_size
        self.lasso_tolerance = lasso_tolerance
        self.max_iterations = max_iterations
        self.random_state = random_state

    def _config(self) -> MatBoostConfig:
        return MatBoostConfig(
            max_iterations=self.max_iterations,
            completion=CompletionConfig(
                latent_dim=self.latent_dim,
                reg=self.reg,
                learning_rate=self.learning_rate,
                epochs=self.epochs,
                seed=self.random_state,
            ),
            matching=MatchConfig(
                l1_penalty=self.l1_penalty,
                max_steps=self.max_steps,
                step_size=self.step_size,
                tolerance=self.lasso_tolerance,
            ),
        )

    def _score(self, pool: IncidenceMatrix) -> np.ndarray:
        scores, trace = run_matboost(self.training_, pool, self._config())
        self.trace_ = trace
        return scores
