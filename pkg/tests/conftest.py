"""Shared helpers: independent dense constructions used as test oracles.

Everything here recomputes expected values from definitions with plain
numpy, without calling back into the operations under test.
"""

from __future__ import annotations

import numpy as np
import pytest

from matboost import AdjacencyMatrix, IncidenceMatrix


def dense_incidence(inc: IncidenceMatrix) -> np.ndarray:
    """Dense 0/1 matrix built entry by entry from the column sets."""
    out = np.zeros((inc.num_vertices, inc.num_columns))
    for j, col in enumerate(inc.columns):
        for v in col:
            out[v, j] = 1.0
    return out


def dense_clique(col, num_vertices: int) -> np.ndarray:
    """Outer product u @ u.T of a single candidate column."""
    u = np.zeros(num_vertices)
    u[list(col)] = 1.0
    return np.outer(u, u)


def random_adjacency(
    rng: np.random.Generator,
    dim: int,
    density: float = 0.4,
    stored_zeros: bool = False,
) -> AdjacencyMatrix:
    """Random symmetric adjacency with structural emptiness.

    With ``stored_zeros`` some present entries carry the value 0.0, which
    masking must treat as present.
    """
    upper = np.triu(rng.random((dim, dim)) < density)
    mask = upper | upper.T
    vals = np.triu(rng.uniform(-3.0, 3.0, (dim, dim)))
    vals = vals + np.triu(vals, 1).T
    if stored_zeros:
        zero_upper = np.triu(rng.random((dim, dim)) < 0.25)
        zeros = zero_upper | zero_upper.T
        vals = np.where(zeros, 0.0, vals)
    return AdjacencyMatrix(np.where(mask, vals, 0.0), mask)


def random_incidence(
    rng: np.random.Generator,
    num_vertices: int,
    num_columns: int,
    max_cardinality: int = 3,
) -> IncidenceMatrix:
    hi = min(max_cardinality, num_vertices)
    cols = []
    for _ in range(num_columns):
        card = int(rng.integers(2, hi + 1))
        cols.append(
            sorted(
                rng.choice(num_vertices, size=card, replace=False).tolist()
            )
        )
    return IncidenceMatrix(num_vertices, cols)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260817)
