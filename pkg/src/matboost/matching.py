"""Candidate selection by fitting clique patterns to predicted weights.

Each candidate hyperlink contributes the binary clique matrix
``u_c @ u_c.T``. Matching asks which nonnegative combination of those
cliques, restricted to the empty entries of the training adjacency matrix,
best reproduces a predicted weight matrix:

    minimize   || sum_c lam_c * offmask(u_c u_c^T, A) - target ||_F^2
               + alpha * sum_c |lam_c|
    subject to 0 <= lam_c <= 1

The residual is evaluated on the empty off-diagonal entries of ``A`` only
(the Frobenius norm counts both triangles; the diagonal is excluded, in
line with the completion model's diagonal policy). The relaxed problem is
solved by projected subgradient descent with best-iterate tracking; an
exhaustive 0/1 solver is kept as a small-scale exactness oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .hypermatrix import AdjacencyMatrix, IncidenceMatrix

__all__ = [
    "MatchConfig",
    "solve_lasso",
    "solve_ilsq_oracle",
    "rank_candidates",
]

_ORACLE_LIMIT = 20


@dataclass(frozen=True)
class MatchConfig:
    """Settings for the projected subgradient solver.

    Parameters
    ----------
    l1_penalty : float, default=0.1
        Sparsity penalty (alpha above).
    max_steps : int, default=500
        Maximum subgradient iterations.
    step_size : float, default=1e-3
        Base step length; internally scaled by the inverse of the largest
        Gram diagonal so cliques of different sizes are stepped comparably.
    tolerance : float, default=1e-6
        Stop early once the objective changes by less than this between
        consecutive iterates.
    """

    l1_penalty: float = 0.1
    max_steps: int = 500
    step_size: float = 1e-3
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.l1_penalty < 0:
            raise ValueError("l1_penalty must be nonnegative")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")


def _check_triple(
    u: IncidenceMatrix, target: AdjacencyMatrix, a: AdjacencyMatrix
) -> None:
    if not (u.num_vertices == target.dim == a.dim):
        raise ValueError(
            f"incompatible shapes: candidates over {u.num_vertices} "
            f"vertices, target dim {target.dim}, adjacency dim {a.dim}"
        )
    if not np.all(np.isfinite(target.values)):
        raise ValueError("target weights must be finite")


def _pair_system(
    u: IncidenceMatrix, target: AdjacencyMatrix, a: AdjacencyMatrix
) -> tuple[np.ndarray, np.ndarray, float]:
    """Reduce the matching residual to a quadratic in lam.

    Working on the empty off-diagonal entries of ``a``, the residual norm is

        lam' G lam - 2 b' lam + const

    where ``G[c, d]`` counts empty pairs shared by cliques ``c`` and ``d``
    and ``b[c]`` sums the target over clique ``c``'s empty pairs, each
    doubled because the Frobenius norm counts both triangles.
    """
    m = a.dim
    n = u.num_columns
    empty_off = ~a.mask & ~np.eye(m, dtype=bool)
    pair_sets = []
    b = np.zeros(n)
    for c, col in enumerate(u.columns):
        pairs = [
            (i, j) for i, j in combinations(col, 2) if empty_off[i, j]
        ]
        pair_sets.append(frozenset(pairs))
        if pairs:
            rows = np.array([p[0] for p in pairs])
            cols = np.array([p[1] for p in pairs])
            b[c] = 2.0 * float(np.sum(target.values[rows, cols]))
    g = np.zeros((n, n))
    for c in range(n):
        for d in range(c, n):
            shared = len(pair_sets[c] & pair_sets[d])
            if shared:
                g[c, d] = 2.0 * shared
                g[d, c] = g[c, d]
    upper = np.triu(target.mask & empty_off, 1)
    const = 2.0 * float(np.sum(target.values[upper] ** 2))
    return g, b, const


def _subgradient_descent(
    g: np.ndarray, b: np.ndarray, const: float, cfg: MatchConfig
) -> tuple[np.ndarray, list[float]]:
    """Projected subgradient descent on the box [0, 1]^n.

    Returns the best iterate seen (by objective value, the start included)
    and the per-iterate objective history.
    """
    n = b.shape[0]
    alpha = cfg.l1_penalty

    def value(lam: np.ndarray) -> float:
        return float(lam @ g @ lam - 2.0 * b @ lam + const + alpha * lam.sum())

    diag_max = float(g.diagonal().max()) if n else 0.0
    eta = cfg.step_size / diag_max if diag_max > 0 else cfg.step_size
    lam = np.zeros(n)
    f = value(lam)
    history = [f]
    best_f = f
    best_lam = lam.copy()
    prev_f = f
    for _ in range(cfg.max_steps):
        grad = 2.0 * (g @ lam - b) + alpha  # on the box, |lam| has slope 1
        lam = np.clip(lam - eta * grad, 0.0, 1.0)
        f = value(lam)
        history.append(f)
        if f < best_f:
            best_f = f
            best_lam = lam.copy()
        if abs(f - prev_f) < cfg.tolerance:
            break
        prev_f = f
    return best_lam, history


def solve_lasso(
    u: IncidenceMatrix,
    target: AdjacencyMatrix,
    a: AdjacencyMatrix,
    cfg: MatchConfig | None = None,
) -> np.ndarray:
    """Score candidates by the relaxed sparse matching problem.

    Returns one score per candidate column, each in ``[0, 1]``. The
    returned point never scores worse than the all-zero vector, and an
    all-empty target yields exact zeros. Deterministic: no randomness is
    involved.
    """
    if cfg is None:
        cfg = MatchConfig()
    _check_triple(u, target, a)
    if u.num_columns == 0:
        return np.zeros(0)
    g, b, const = _pair_system(u, target, a)
    lam, _ = _subgradient_descent(g, b, const, cfg)
    return lam


def solve_ilsq_oracle(
    u: IncidenceMatrix, target: AdjacencyMatrix, a: AdjacencyMatrix
) -> np.ndarray:
    """Exhaustively solve the 0/1 matching problem (no sparsity penalty).

    Enumerates every binary weight vector and returns a global minimizer
    of the residual norm; ties go to the lexicographically smallest
    vector. Only intended for small pools: more than 20 candidates is
    refused.
    """
    _check_triple(u, target, a)
    n = u.num_columns
    if n > _ORACLE_LIMIT:
        raise ValueError(
            f"exhaustive search over {n} candidates exceeds the "
            f"{_ORACLE_LIMIT}-candidate oracle limit"
        )
    if n == 0:
        return np.zeros(0)
    g, b, _ = _pair_system(u, target, a)
    best_val = np.inf
    best = np.zeros(n)
    shifts = n - 1 - np.arange(n)  # first candidate = most significant bit
    chunk = 1 << 16
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n))
        lams = ((codes[:, None] >> shifts) & 1).astype(float)
        vals = np.einsum("bi,ij,bj->b", lams, g, lams) - 2.0 * (lams @ b)
        k = int(np.argmin(vals))
        # strict inequality keeps the lexicographically smallest tie
        if vals[k] < best_val:
            best_val = float(vals[k])
            best = lams[k]
    return best


def rank_candidates(scores: np.ndarray) -> np.ndarray:
    """Indices sorted by score descending; ties broken by ascending index."""
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 1:
        raise ValueError("scores must be a vector")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    return np.lexsort((np.arange(scores.shape[0]), -scores))
