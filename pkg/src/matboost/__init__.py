"""Hyperlink prediction on hypernetworks.

Given a hypernetwork observed as an incidence matrix (vertices by
hyperlinks), score candidate hyperlinks by how well they explain the
co-participation structure the network implies. The main scorer
alternates low-rank completion of the projected adjacency matrix with
sparse matching of candidate cliques to the completed weights; classical
baselines and a recovery-experiment harness ship alongside it.
"""

from .baselines import (
    KATZ_BETA_GRID,
    SHC_XI_GRID,
    CommonNeighborsScorer,
    KatzScorer,
    RandomScorer,
    SpectralScorer,
    random_scores,
)
from .boosting import (
    IterationTrace,
    MatBoost,
    MatBoostConfig,
    StopReason,
    drift,
    ensemble_scores,
    run_matboost,
)
from .completion import CompletionConfig, FactorModel, predict_empty, train
from .evaluation import (
    AlgorithmSpec,
    ExperimentResult,
    ExperimentSpec,
    TrialRecord,
    TrialSplit,
    auc,
    cross_validate,
    generate_negative_pool,
    generate_synthetic,
    make_split,
    recovered_number,
    run_trials,
)
from .hypermatrix import (
    AdjacencyMatrix,
    IncidenceMatrix,
    add,
    add_weighted_outer,
    decompose,
    mask_off,
    mask_on,
    project,
)
from .matching import (
    MatchConfig,
    rank_candidates,
    solve_ilsq_oracle,
    solve_lasso,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "AlgorithmSpec",
    "CommonNeighborsScorer",
    "CompletionConfig",
    "ExperimentResult",
    "ExperimentSpec",
    "FactorModel",
    "IncidenceMatrix",
    "IterationTrace",
    "KATZ_BETA_GRID",
    "KatzScorer",
    "MatBoost",
    "MatBoostConfig",
    "MatchConfig",
    "RandomScorer",
    "SHC_XI_GRID",
    "SpectralScorer",
    "StopReason",
    "TrialRecord",
    "TrialSplit",
    "add",
    "add_weighted_outer",
    "auc",
    "cross_validate",
    "decompose",
    "drift",
    "ensemble_scores",
    "generate_negative_pool",
    "generate_synthetic",
    "make_split",
    "mask_off",
    "mask_on",
    "predict_empty",
    "project",
    "random_scores",
    "rank_candidates",
    "recovered_number",
    "run_matboost",
    "run_trials",
    "solve_ilsq_oracle",
    "solve_lasso",
    "train",
]
