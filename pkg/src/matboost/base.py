"""Shared estimator plumbing for hyperlink scorers.

Scorers follow the usual estimator protocol: construct with
hyperparameters, ``fit`` on a training incidence matrix, then call
``decision_function`` on a candidate incidence matrix over the same vertex
universe to get one real score per candidate column (higher means more
likely to be a true hyperlink).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .hypermatrix import IncidenceMatrix
from .matching import rank_candidates

__all__ = ["HyperlinkScorer", "check_incidence"]


def check_incidence(
    x, *, num_vertices: int | None = None, name: str = "incidence"
) -> IncidenceMatrix:
    """Validate an incidence-matrix argument.

    Raises ``TypeError`` for foreign types and ``ValueError`` when the
    vertex universe does not match ``num_vertices``.
    """
    if not isinstance(x, IncidenceMatrix):
        raise TypeError(
            f"{name} must be an IncidenceMatrix, got {type(x).__name__}"
        )
    if num_vertices is not None and x.num_vertices != num_vertices:
        raise ValueError(
            f"{name} covers {x.num_vertices} vertices, expected "
            f"{num_vertices}"
        )
    return x


class HyperlinkScorer(BaseEstimator):
    """Base class for transductive hyperlink scorers."""

    def fit(self, incidence: IncidenceMatrix, y=None) -> "HyperlinkScorer":
        """Store and preprocess the training hypernetwork."""
        incidence = check_incidence(incidence, name="training incidence")
        self.training_ = incidence
        self._fit(incidence)
        return self

    def _fit(self, incidence: IncidenceMatrix) -> None:
        """Hook for per-scorer preprocessing; default does nothing."""

    def decision_function(self, pool: IncidenceMatrix) -> np.ndarray:
        """Score each candidate column of ``pool``."""
        if not hasattr(self, "training_"):
            raise NotFittedError(
                f"{type(self).__name__} must be fit before scoring"
            )
        pool = check_incidence(
            pool,
            num_vertices=self.training_.num_vertices,
            name="candidate pool",
        )
        return self._score(pool)

    def _score(self, pool: IncidenceMatrix) -> np.ndarray:
        raise NotImplementedError

    def rank(self, pool: IncidenceMatrix) -> np.ndarray:
        """Candidate indices ordered best-first (ties by ascending index)."""
        return rank_candidates(self.decision_function(pool))
