"""Low-rank completion of a masked adjacency matrix.

A factorization-machine style model

    y_ij = w0 + w_i + w_j + <v_i, v_j>

is fit to the present off-diagonal entries of an adjacency matrix by
stochastic gradient descent on the squared error with L2 regularization.
Because the matrix is symmetric, each unordered pair ``{i, j}`` is a single
training example. The fitted model then fills in every empty off-diagonal
entry; the diagonal never enters training or prediction, since degree
entries say nothing about unseen co-participation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypermatrix import AdjacencyMatrix

__all__ = [
    "CompletionConfig",
    "FactorModel",
    "train",
    "predict_empty",
    "objective",
    "objective_gradient",
]


@dataclass(frozen=True)
class CompletionConfig:
    """Training settings for the completion model.

    Parameters
    ----------
    latent_dim : int, default=8
        Number of latent factors per vertex.
    reg : float, default=0.01
        L2 penalty weight on all model parameters.
    learning_rate : float, default=0.01
        SGD step size.
    epochs : int, default=100
        Number of passes over the present entries.
    seed : int, default=0
        Seed for parameter initialization and per-epoch shuffling.
    """

    latent_dim: int = 8
    reg: float = 0.01
    learning_rate: float = 0.01
    epochs: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.latent_dim < 1:
            raise ValueError("latent_dim must be at least 1")
        if self.reg < 0:
            raise ValueError("reg must be nonnegative")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")


@dataclass(frozen=True)
class FactorModel:
    """Fitted completion model: global bias, vertex biases, latent factors."""

    w0: float
    w: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        if self.w.ndim != 1 or self.v.ndim != 2:
            raise ValueError("w must be a vector and v a matrix")
        if self.w.shape[0] != self.v.shape[0]:
            raise ValueError("w and v must agree on the number of vertices")
        if not (
            np.isfinite(self.w0)
            and np.all(np.isfinite(self.w))
            and np.all(np.isfinite(self.v))
        ):
            raise ValueError("model parameters must be finite")

    @property
    def num_vertices(self) -> int:
        return self.w.shape[0]

    def predict_pair(self, i: int, j: int) -> float:
        """Predicted weight for the unordered pair ``{i, j}``."""
        return float(self.w0 + self.w[i] + self.w[j] + self.v[i] @ self.v[j])


def _training_pairs(
    a_plus: AdjacencyMatrix,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ii, jj = np.nonzero(np.triu(a_plus.mask, 1))
    return ii, jj, a_plus.values[ii, jj]


def train(a_plus: AdjacencyMatrix, cfg: CompletionConfig) -> FactorModel:
    """Fit the completion model to the present off-diagonal entries.

    Biases start at zero; latent factors are initialized i.i.d. uniform on
    ``[-0.01, 0.01]`` from the seeded generator. Each epoch visits every
    present unordered pair exactly once in a freshly shuffled order. The
    run is deterministic given the config: the same input and seed yield a
    bitwise-identical model.
    """
    ii, jj, targets = _training_pairs(a_plus)
    if ii.size == 0:
        raise ValueError(
            "completion needs at least one present off-diagonal entry"
        )
    m = a_plus.dim
    rng = np.random.default_rng(cfg.seed)
    w0 = 0.0
    w = np.zeros(m)
    v = rng.uniform(-0.01, 0.01, size=(m, cfg.latent_dim))
    lr = cfg.learning_rate
    reg = cfg.reg
    for _ in range(cfg.epochs):
        order = rng.permutation(ii.size)
        for idx in order:
            i = ii[idx]
            j = jj[idx]
            vi = v[i]
            vj = v[j]
            err2 = 2.0 * (targets[idx] - (w0 + w[i] + w[j] + vi @ vj))
            w0 += lr * (err2 - reg * w0)
            w[i] += lr * (err2 - reg * w[i])
            w[j] += lr * (err2 - reg * w[j])
            vi_old = vi.copy()
            v[i] = vi + lr * (err2 * vj - reg * vi)
            v[j] = vj + lr * (err2 * vi_old - reg * vj)
    w.setflags(write=False)
    v.setflags(write=False)
    return FactorModel(w0=w0, w=w, v=v)


def predict_empty(model: FactorModel, a_plus: AdjacencyMatrix) -> AdjacencyMatrix:
    """Predict a weight for every empty off-diagonal entry of ``a_plus``.

    Returns an adjacency matrix whose support is exactly the empty
    off-diagonal positions of ``a_plus``; predicted values may be zero and
    are still stored as present. Entries present in ``a_plus`` and the
    whole diagonal stay empty in the result.
    """
    if model.num_vertices != a_plus.dim:
        raise ValueError(
            f"model covers {model.num_vertices} vertices, matrix has "
            f"{a_plus.dim}"
        )
    m = a_plus.dim
    y = model.w0 + model.w[:, None] + model.w[None, :] + model.v @ model.v.T
    # mirror the upper triangle so float accumulation cannot break symmetry
    y = np.triu(y, 1)
    y = y + y.T
    keep = ~a_plus.mask & ~np.eye(m, dtype=bool)
    return AdjacencyMatrix(np.where(keep, y, 0.0), keep)


def objective(model: FactorModel, a_plus: AdjacencyMatrix, reg: float) -> float:
    """Full-batch training objective.

    Squared error summed over present off-diagonal unordered pairs plus
    ``reg`` times the squared L2 norm of all parameters.
    """
    ii, jj, targets = _training_pairs(a_plus)
    pred = (
        model.w0
        + model.w[ii]
        + model.w[jj]
        + np.einsum("ik,ik->i", model.v[ii], model.v[jj])
    )
    sq = float(np.sum((targets - pred) ** 2))
    penalty = model.w0**2 + float(model.w @ model.w) + float(np.sum(model.v**2))
    return sq + reg * penalty


def objective_gradient(
    model: FactorModel, a_plus: AdjacencyMatrix, reg: float
) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Objective value and its analytic gradient.

    Returns ``(value, d_w0, d_w, d_v)`` for the same objective as
    :func:`objective`. Used to cross-check the model's derivatives against
    finite differences.
    """
    ii, jj, targets = _training_pairs(a_plus)
    pred = (
        model.w0
        + model.w[ii]
        + model.w[jj]
        + np.einsum("ik,ik->i", model.v[ii], model.v[jj])
    )
    resid = targets - pred
    value = float(np.sum(resid**2)) + reg * (
        model.w0**2 + float(model.w @ model.w) + float(np.sum(model.v**2))
    )
    d_w0 = float(-2.0 * np.sum(resid)) + 2.0 * reg * model.w0
    d_w = np.zeros_like(model.w)
    np.add.at(d_w, ii, -2.0 * resid)
    np.add.at(d_w, jj, -2.0 * resid)
    d_w += 2.0 * reg * model.w
    d_v = np.zeros_like(model.v)
    np.add.at(d_v, ii, -2.0 * resid[:, None] * model.v[jj])
    np.add.at(d_v, jj, -2.0 * resid[:, None] * model.v[ii])
    d_v += 2.0 * reg * model.v
    return value, d_w0, d_w, d_v
