"""Incidence matrices and masked weighted adjacency matrices.

A hypernetwork is stored column-wise: each hyperlink is the set of vertices
it connects.  Projecting the incidence matrix ``S`` onto the vertex space
gives the weighted adjacency matrix ``A = S @ S.T`` whose off-diagonal entry
``(i, j)`` counts the hyperlinks containing both ``i`` and ``j`` and whose
diagonal holds vertex degrees.

Adjacency matrices distinguish *empty* entries (structurally absent, and
maskable) from entries that are present with some value, possibly ``0.0``.
Emptiness is tracked by an explicit boolean mask rather than by a stored
zero so that masking keeps its set-theoretic meaning.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "IncidenceMatrix",
    "AdjacencyMatrix",
    "project",
    "mask_on",
    "mask_off",
    "add",
    "decompose",
    "add_weighted_outer",
]


class IncidenceMatrix:
    """Binary vertex-by-hyperlink matrix, stored as one vertex set per column.

    Parameters
    ----------
    num_vertices : int
        Number of rows (vertices). Vertex indices run from 0 to
        ``num_vertices - 1``.
    columns : iterable of iterables of int
        One entry per hyperlink listing the vertices it connects. Each
        column must be nonempty and free of repeats; columns are kept
        sorted so equality and serialization are canonical.

    Instances are treated as immutable once built and may be shared freely.
    """

    __slots__ = ("num_vertices", "columns")

    def __init__(self, num_vertices: int, columns: Iterable[Iterable[int]]):
        num_vertices = int(num_vertices)
        if num_vertices < 0:
            raise ValueError("num_vertices must be nonnegative")
        canonical: list[tuple[int, ...]] = []
        for pos, raw in enumerate(columns):
            col = tuple(sorted(int(v) for v in raw))
            if not col:
                raise ValueError(f"hyperlink column {pos} is empty")
            if len(set(col)) != len(col):
                raise ValueError(f"hyperlink column {pos} repeats a vertex")
            if col[0] < 0 or col[-1] >= num_vertices:
                raise ValueError(
                    f"hyperlink column {pos} has a vertex index outside "
                    f"[0, {num_vertices})"
                )
            canonical.append(col)
        self.num_vertices = num_vertices
        self.columns = tuple(canonical)

    @property
    def num_columns(self) -> int:
        return len(self.columns)

    def column(self, j: int) -> tuple[int, ...]:
        return self.columns[j]

    def cardinalities(self) -> np.ndarray:
        return np.array([len(c) for c in self.columns], dtype=int)

    def select(self, indices: Sequence[int]) -> "IncidenceMatrix":
        """Return a new matrix keeping only the given columns, in order."""
        return IncidenceMatrix(
            self.num_vertices, [self.columns[int(j)] for j in indices]
        )

    def to_dense(self) -> np.ndarray:
        """Dense 0/1 array of shape ``(num_vertices, num_columns)``."""
        dense = np.zeros((self.num_vertices, self.num_columns))
        for j, col in enumerate(self.columns):
            dense[list(col), j] = 1.0
        return dense

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncidenceMatrix):
            return NotImplemented
        return (
            self.num_vertices == other.num_vertices
            and self.columns == other.columns
        )

    def __hash__(self) -> int:
        return hash((self.num_vertices, self.columns))

    def __repr__(self) -> str:
        return (
            f"IncidenceMatrix(num_vertices={self.num_vertices}, "
            f"num_columns={self.num_columns})"
        )


def _mirror_upper(square: np.ndarray) -> np.ndarray:
    # Canonical symmetrization: copy the upper triangle onto the lower one
    # so float products accumulated in different orders cannot make the two
    # triangles disagree.
    upper = np.triu(square)
    return upper + np.triu(square, 1).T


class AdjacencyMatrix:
    """Symmetric weighted matrix over vertices with structural emptiness.

    Entries are either *present* (carrying a finite real weight, possibly
    zero) or *empty*. The two are distinguished by ``mask``: masking
    operations act on presence, not on values, so a predicted weight of
    exactly ``0.0`` stays distinguishable from an absent entry.

    Parameters
    ----------
    values : array-like of shape (dim, dim)
        Symmetric weights. Entries outside the mask are zeroed on
        construction.
    mask : array-like of bool of shape (dim, dim)
        ``True`` where an entry is present. Must be symmetric.
    """

    __slots__ = ("_values", "_mask")

    def __init__(self, values, mask):
        values = np.array(values, dtype=float)
        mask = np.array(mask, dtype=bool)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("values must be a square matrix")
        if mask.shape != values.shape:
            raise ValueError("mask shape must match values shape")
        if not np.array_equal(mask, mask.T):
            raise ValueError("mask must be symmetric")
        values = np.where(mask, values, 0.0)
        if not np.array_equal(values, values.T):
            raise ValueError("values must be symmetric on the mask")
        if not np.all(np.isfinite(values[mask])):
            raise ValueError("present entries must be finite")
        values.setflags(write=False)
        mask.setflags(write=False)
        self._values = values
        self._mask = mask

    @classmethod
    def empty(cls, dim: int) -> "AdjacencyMatrix":
        dim = int(dim)
        return cls(np.zeros((dim, dim)), np.zeros((dim, dim), dtype=bool))

    @classmethod
    def from_entries(
        cls, dim: int, entries: Mapping[tuple[int, int], float]
    ) -> "AdjacencyMatrix":
        """Build from a sparse ``(i, j) -> weight`` map; symmetry is implied."""
        dim = int(dim)
        values = np.zeros((dim, dim))
        mask = np.zeros((dim, dim), dtype=bool)
        for (i, j), w in entries.items():
            values[i, j] = w
            values[j, i] = w
            mask[i, j] = True
            mask[j, i] = True
        return cls(values, mask)

    @property
    def dim(self) -> int:
        return self._values.shape[0]

    @property
    def values(self) -> np.ndarray:
        """Read-only weight array; empty entries read as 0.0."""
        return self._values

    @property
    def mask(self) -> np.ndarray:
        """Read-only presence array."""
        return self._mask

    def is_present(self, i: int, j: int) -> bool:
        return bool(self._mask[i, j])

    def get(self, i: int, j: int) -> float:
        """Weight at ``(i, j)``; empty entries read as 0.0."""
        return float(self._values[i, j])

    def support_size(self) -> int:
        """Number of present entries, counting both triangles."""
        return int(self._mask.sum())

    def entries(self) -> Iterator[tuple[int, int, float]]:
        """Yield ``(i, j, weight)`` for present entries with ``i <= j``."""
        ii, jj = np.nonzero(np.triu(self._mask))
        for i, j in zip(ii.tolist(), jj.tolist()):
            yield i, j, float(self._values[i, j])

    def to_dense(self) -> np.ndarray:
        """Copy of the weights with empty entries as 0.0."""
        return self._values.copy()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return np.array_equal(self._mask, other._mask) and np.array_equal(
            self._values, other._values
        )

    def __hash__(self) -> int:  # pragma: no cover - mutability guard only
        raise TypeError("AdjacencyMatrix is not hashable")

    def __repr__(self) -> str:
        return (
            f"AdjacencyMatrix(dim={self.dim}, "
            f"support={self.support_size()})"
        )


def project(incidence: IncidenceMatrix) -> AdjacencyMatrix:
    """Project a hypernetwork onto vertices: ``A = S @ S.T``.

    Off-diagonal entry ``(i, j)`` counts hyperlinks containing both vertices;
    the diagonal holds vertex degrees. Entries whose count is zero are empty.
    Counts are exact (small integers in float storage).
    """
    dense = incidence.to_dense()
    a = dense @ dense.T
    return AdjacencyMatrix(a, a != 0)


def _check_same_dim(x: AdjacencyMatrix, a: AdjacencyMatrix) -> None:
    if x.dim != a.dim:
        raise ValueError(
            f"incompatible matrices: dim {x.dim} vs {a.dim}"
        )


def mask_on(x: AdjacencyMatrix, a: AdjacencyMatrix) -> AdjacencyMatrix:
    """Keep entries of ``x`` where ``a`` is present; empty elsewhere."""
    _check_same_dim(x, a)
    keep = x.mask & a.mask
    return AdjacencyMatrix(np.where(keep, x.values, 0.0), keep)


def mask_off(x: AdjacencyMatrix, a: AdjacencyMatrix) -> AdjacencyMatrix:
    """Keep entries of ``x`` where ``a`` is empty; the complement of mask_on."""
    _check_same_dim(x, a)
    keep = x.mask & ~a.mask
    return AdjacencyMatrix(np.where(keep, x.values, 0.0), keep)


def add(x: AdjacencyMatrix, y: AdjacencyMatrix) -> AdjacencyMatrix:
    """Entrywise sum; an entry is present if it is present in either operand."""
    _check_same_dim(x, y)
    return AdjacencyMatrix(x.values + y.values, x.mask | y.mask)


def decompose(
    a: AdjacencyMatrix, delta: AdjacencyMatrix
) -> tuple[AdjacencyMatrix, AdjacencyMatrix]:
    """Split ``a + delta`` into a completion part and a matching part.

    Returns ``(a_plus, delta_minus)`` where ``a_plus = a + mask_on(delta, a)``
    collects everything supported on ``a`` and ``delta_minus =
    mask_off(delta, a)`` collects the genuinely new entries. The two have
    disjoint supports and sum exactly to ``a + delta``.
    """
    _check_same_dim(a, delta)
    a_plus = add(a, mask_on(delta, a))
    delta_minus = mask_off(delta, a)
    return a_plus, delta_minus


def add_weighted_outer(
    a: AdjacencyMatrix,
    u: IncidenceMatrix,
    lam: Sequence[float] | np.ndarray,
    restrict_to_support: bool = True,
) -> AdjacencyMatrix:
    """Add the weighted candidate projection ``U @ diag(lam) @ U.T`` to ``a``.

    With ``restrict_to_support`` (the default) the outer-product sum is first
    masked onto ``a``'s present entries, so the support of the result equals
    the support of ``a``. Without it the full sum is added and the support
    grows to cover every nonzero of the outer-product sum.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.shape[0] != u.num_columns:
        raise ValueError(
            f"lam must have one weight per candidate column "
            f"({u.num_columns}), got shape {lam.shape}"
        )
    if not np.all(np.isfinite(lam)):
        raise ValueError("candidate weights must be finite")
    if a.dim != u.num_vertices:
        raise ValueError(
            f"incompatible matrices: dim {a.dim} vs {u.num_vertices}"
        )
    dense = u.to_dense()
    outer = _mirror_upper((dense * lam) @ dense.T)
    if restrict_to_support:
        return AdjacencyMatrix(a.values + outer * a.mask, a.mask)
    return add(a, AdjacencyMatrix(outer, outer != 0))
