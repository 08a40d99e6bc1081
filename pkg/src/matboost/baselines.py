"""Reference scorers that rank candidate hyperlinks by classical indices.

All of them project the training hypernetwork onto the unweighted vertex
graph (``i ~ j`` iff some training hyperlink contains both, self-loops
excluded) and reduce a candidate's vertex set to a pairwise statistic, or
in the spectral case run label propagation on the transposed hypergraph
whose vertices are the hyperlink columns themselves.
"""

from __future__ import annotations

import logging
from itertools import combinations

import numpy as np

from .base import HyperlinkScorer
from .hypermatrix import IncidenceMatrix, project

__all__ = [
    "CommonNeighborsScorer",
    "KatzScorer",
    "SpectralScorer",
    "RandomScorer",
    "KATZ_BETA_GRID",
    "SHC_XI_GRID",
    "random_scores",
]

logger = logging.getLogger(__name__)

# damping / propagation grids searched by cross-validation
KATZ_BETA_GRID = (0.001, 0.005, 0.01, 0.1, 0.5)
SHC_XI_GRID = (0.01, 0.1, 0.5, 0.99, 1.0)

# keeps isolated columns from zeroing a degree normalization
_DEGREE_FLOOR = 1e-12


def _simple_graph(incidence: IncidenceMatrix) -> np.ndarray:
    """Unweighted co-participation graph with an empty diagonal."""
    adj = project(incidence)
    graph = adj.mask.astype(float)
    np.fill_diagonal(graph, 0.0)
    return graph


def _mean_over_pairs(matrix: np.ndarray, pool: IncidenceMatrix) -> np.ndarray:
    """Average ``matrix[i, j]`` over each candidate's unordered vertex pairs.

    Single-vertex candidates have no pairs; they score 0 and a warning is
    logged, since the statistic is undefined for them.
    """
    scores = np.zeros(pool.num_columns)
    for c, col in enumerate(pool.columns):
        if len(col) < 2:
            logger.warning(
                "candidate %d has fewer than two vertices; scoring it 0", c
            )
            continue
        pairs = list(combinations(col, 2))
        rows = np.array([p[0] for p in pairs])
        cols = np.array([p[1] for p in pairs])
        scores[c] = float(np.mean(matrix[rows, cols]))
    return scores


class CommonNeighborsScorer(HyperlinkScorer):
    """Mean pairwise common-neighbor count over a candidate's vertex pairs.

    Attributes
    ----------
    training_ : IncidenceMatrix
        The fitted training hypernetwork.
    common_neighbors_ : ndarray of shape (num_vertices, num_vertices)
        Common-neighbor counts on the projected simple graph.
    """

    def _fit(self, incidence: IncidenceMatrix) -> None:
        graph = _simple_graph(incidence)
        self.common_neighbors_ = graph @ graph

    def _score(self, pool: IncidenceMatrix) -> np.ndarray:
        return _mean_over_pairs(self.common_neighbors_, pool)


class KatzScorer(HyperlinkScorer):
    """Mean pairwise truncated Katz index over a candidate's vertex pairs.

    The Katz matrix sums ``beta**l`` times the number of length-``l`` walks
    for ``l = 1 .. max_path_length``. Truncation keeps the sum finite for
    any positive ``beta``, so no spectral condition is needed.

    Parameters
    ----------
    beta : float, default=0.01
        Walk damping factor; must be positive.
    max_path_length : int, default=5
        Longest walk counted; 0 gives identically zero scores.
    """

    def __init__(self, beta: float = 0.01, max_path_length: int = 5):
        self.beta = beta
        self.max_path_length = max_path_length

    def _fit(self, incidence: IncidenceMatrix) -> None:
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.max_path_length < 0:
            raise ValueError("max_path_length must be nonnegative")
        graph = _simple_graph(incidence)
        katz = np.zeros_like(graph)
        walk = np.eye(graph.shape[0])
        scale = 1.0
        for _ in range(self.max_path_length):
            walk = walk @ graph
            scale *= self.beta
            katz += scale * walk
        self.katz_ = katz

    def _score(self, pool: IncidenceMatrix) -> np.ndarray:
        return _mean_over_pairs(self.katz_, pool)


class SpectralScorer(HyperlinkScorer):
    """Label propagation over the transposed hypergraph.

    The training and candidate columns jointly become the vertices of a
    hypergraph whose hyperedges are the original vertices (each original
    vertex links every column containing it). With the normalized
    hypergraph adjacency ``T`` built from unit hyperedge weights, scores
    solve ``(I - xi * T) f = y`` where ``y`` is 1 on training columns and 0
    on candidates; a candidate's score is its component of ``f``.

    Parameters
    ----------
    xi : float, default=0.5
        Propagation strength in ``[0, 1]``. At 0 the system is the
        identity and candidates score exactly 0; values near 1 can make
        the system singular.
    """

    def __init__(self, xi: float = 0.5):
        self.xi = xi

    def _fit(self, incidence: IncidenceMatrix) -> None:
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError("xi must lie in [0, 1]")

    def _score(self, pool: IncidenceMatrix) -> np.ndarray:
        train = self.training_
        n_train = train.num_columns
        columns = train.columns + pool.columns
        n = len(columns)
        m = train.num_vertices
        h = np.zeros((n, m))
        for c, col in enumerate(columns):
            h[c, list(col)] = 1.0
        col_degree = h.sum(axis=1)  # column cardinalities
        vertex_degree = h.sum(axis=0)  # columns touching each vertex
        inv_sqrt = 1.0 / np.sqrt(np.maximum(col_degree, _DEGREE_FLOOR))
        inv_edge = 1.0 / np.maximum(vertex_degree, _DEGREE_FLOOR)
        # zero-degree vertices touch no column; drop them from propagation
        inv_edge[vertex_degree == 0] = 0.0
        t = (inv_sqrt[:, None] * h) @ (inv_edge[:, None] * h.T) * inv_sqrt
        y = np.zeros(n)
        y[:n_train] = 1.0
        system = np.eye(n) - self.xi * t
        try:
            f = np.linalg.solve(system, y)
        except np.linalg.LinAlgError as exc:
            raise ValueError(
                f"propagation system is singular at xi={self.xi}; "
                f"use a smaller xi"
            ) from exc
        if not np.all(np.isfinite(f)):
            raise ValueError(
                f"propagation system is numerically singular at "
                f"xi={self.xi}; use a smaller xi"
            )
        return f[n_train:]


def random_scores(n_candidates: int, seed: int) -> np.ndarray:
    """Uniform [0, 1) scores; identical for identical seeds."""
    if n_candidates < 0:
        raise ValueError("n_candidates must be nonnegative")
    return np.random.default_rng(seed).uniform(size=n_candidates)


class RandomScorer(HyperlinkScorer):
    """Seeded uniform scores, the no-information floor for comparisons.

    Parameters
    ----------
    random_state : int, default=0
        Seed; each ``decision_function`` call redraws from a fresh
        generator, so equal seeds give equal scores.
    """

    def __init__(self, random_state: int = 0):
        self.random_state = random_state

    def _score(self, pool: IncidenceMatrix) -> np.ndarray:
        return random_scores(pool.num_columns, self.random_state)
