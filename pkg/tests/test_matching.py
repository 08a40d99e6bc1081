"""Sparse candidate matching: relaxed solver, exhaustive oracle, ranking."""

import numpy as np
import pytest

from matboost import (
    AdjacencyMatrix,
    IncidenceMatrix,
    MatchConfig,
    mask_off,
    project,
    rank_candidates,
    solve_ilsq_oracle,
    solve_lasso,
)
from matboost.matching import _pair_system, _subgradient_descent
from conftest import dense_clique

# generous budget used when a test needs the relaxation solved tightly
TIGHT = MatchConfig(l1_penalty=0.001, max_steps=3000, step_size=0.1)


def matching_residual(
    u: IncidenceMatrix,
    lam: np.ndarray,
    target: AdjacencyMatrix,
    a: AdjacencyMatrix,
) -> float:
    """Independent dense residual: both triangles, diagonal excluded."""
    m = a.dim
    pred = np.zeros((m, m))
    for c, col in enumerate(u.columns):
        pred += lam[c] * dense_clique(col, m)
    empty_off = ~a.mask & ~np.eye(m, dtype=bool)
    diff = np.where(empty_off, pred - target.to_dense(), 0.0)
    return float(np.sum(diff * diff))


class TestConfig:
    def test_defaults(self):
        cfg = MatchConfig()
        assert cfg.l1_penalty == 0.1
        assert cfg.max_steps == 500
        assert cfg.step_size == 1e-3
        assert cfg.tolerance == 1e-6

    def test_validation(self):
        with pytest.raises(ValueError):
            MatchConfig(l1_penalty=-1)
        with pytest.raises(ValueError):
            MatchConfig(max_steps=0)
        with pytest.raises(ValueError):
            MatchConfig(step_size=0)
        with pytest.raises(ValueError):
            MatchConfig(tolerance=-1e-9)


class TestSolveLasso:
    def test_single_planted_candidate(self):
        s = IncidenceMatrix(6, [(0, 1), (1, 2)])
        a = project(s)
        u = IncidenceMatrix(6, [(3, 4, 5), (0, 3), (2, 5)])
        target = mask_off(project(IncidenceMatrix(6, [(3, 4, 5)])), a)
        lam = solve_lasso(u, target, a, TIGHT)
        assert lam[0] >= 0.9
        assert lam[1] <= 0.1
        assert lam[2] <= 0.1

    def test_two_disjoint_planted_candidates(self):
        a = project(IncidenceMatrix(8, [(0, 1)]))
        u = IncidenceMatrix(8, [(2, 3), (4, 5), (6, 7)])
        target = mask_off(
            project(IncidenceMatrix(8, [(2, 3), (4, 5)])), a
        )
        lam = solve_lasso(u, target, a, TIGHT)
        assert lam[0] >= 0.9
        assert lam[1] >= 0.9
        assert lam[2] <= 0.1

    def test_all_empty_target_gives_exact_zero(self):
        a = project(IncidenceMatrix(5, [(0, 1), (2, 3)]))
        u = IncidenceMatrix(5, [(0, 4), (1, 2)])
        lam = solve_lasso(u, AdjacencyMatrix.empty(5), a)
        assert np.array_equal(lam, np.zeros(2))

    def test_box_feasibility_on_random_instances(self, rng):
        from conftest import random_adjacency, random_incidence

        for _ in range(25):
            dim = int(rng.integers(3, 9))
            a = random_adjacency(rng, dim)
            u = random_incidence(rng, dim, int(rng.integers(1, 6)))
            target_vals = random_adjacency(rng, dim)
            target = mask_off(target_vals, a)
            lam = solve_lasso(u, target, a)
            assert np.all(lam >= 0.0)
            assert np.all(lam <= 1.0)

    def test_never_worse_than_zero_vector(self, rng):
        from conftest import random_adjacency, random_incidence

        for _ in range(25):
            dim = int(rng.integers(3, 9))
            a = random_adjacency(rng, dim)
            u = random_incidence(rng, dim, int(rng.integers(1, 6)))
            target = mask_off(random_adjacency(rng, dim), a)
            alpha = float(rng.choice([0.0, 0.01, 0.1]))
            cfg = MatchConfig(
                l1_penalty=alpha, max_steps=200, step_size=0.05
            )
            lam = solve_lasso(u, target, a, cfg)
            f_lam = matching_residual(u, lam, target, a) + alpha * lam.sum()
            f_zero = matching_residual(
                u, np.zeros(u.num_columns), target, a
            )
            assert f_lam <= f_zero + 1e-9

    def test_best_iterate_is_tracked(self):
        a = project(IncidenceMatrix(6, [(0, 1)]))
        u = IncidenceMatrix(6, [(2, 3, 4), (3, 4, 5)])
        target = mask_off(project(IncidenceMatrix(6, [(2, 3, 4)])), a)
        g, b, const = _pair_system(u, target, a)
        cfg = MatchConfig(l1_penalty=0.01, max_steps=400, step_size=0.2)
        lam, history = _subgradient_descent(g, b, const, cfg)
        best = float(
            lam @ g @ lam - 2.0 * b @ lam + const + cfg.l1_penalty * lam.sum()
        )
        assert best == pytest.approx(min(history))
        running = np.minimum.accumulate(history)
        assert np.all(np.diff(running) <= 0)

    def test_deterministic(self):
        a = project(IncidenceMatrix(6, [(0, 1), (1, 2)]))
        u = IncidenceMatrix(6, [(2, 3), (3, 4, 5), (0, 5)])
        target = mask_off(project(IncidenceMatrix(6, [(3, 4, 5)])), a)
        lam1 = solve_lasso(u, target, a, TIGHT)
        lam2 = solve_lasso(u, target, a, TIGHT)
        assert np.array_equal(lam1, lam2)

    def test_dimension_mismatch(self):
        u = IncidenceMatrix(4, [(0, 1)])
        with pytest.raises(ValueError, match="incompatible"):
            solve_lasso(u, AdjacencyMatrix.empty(4), AdjacencyMatrix.empty(5))
        with pytest.raises(ValueError, match="incompatible"):
            solve_lasso(u, AdjacencyMatrix.empty(3), AdjacencyMatrix.empty(4))


class TestIlsqOracle:
    def test_recovers_planted_column(self):
        s = IncidenceMatrix(6, [(0, 1), (1, 2)])
        a = project(s)
        u = IncidenceMatrix(6, [(3, 4, 5), (0, 3), (2, 5)])
        target = mask_off(project(IncidenceMatrix(6, [(3, 4, 5)])), a)
        assert np.array_equal(
            solve_ilsq_oracle(u, target, a), np.array([1.0, 0.0, 0.0])
        )

    def test_matches_independent_enumeration(self, rng):
        from conftest import random_adjacency, random_incidence
        from itertools import product

        for _ in range(15):
            dim = int(rng.integers(4, 9))
            a = random_adjacency(rng, dim, density=0.3)
            u = random_incidence(rng, dim, int(rng.integers(1, 6)))
            target = mask_off(random_adjacency(rng, dim), a)
            got = solve_ilsq_oracle(u, target, a)
            best_val, best_lam = np.inf, None
            for bits in product((0.0, 1.0), repeat=u.num_columns):
                lam = np.array(bits)
                v = matching_residual(u, lam, target, a)
                if v < best_val - 1e-12:
                    best_val, best_lam = v, lam
            assert matching_residual(u, got, target, a) == pytest.approx(
                best_val
            )

    def test_empty_target_prefers_all_zero(self):
        a = AdjacencyMatrix.empty(4)
        u = IncidenceMatrix(4, [(0, 1), (2, 3)])
        got = solve_ilsq_oracle(u, AdjacencyMatrix.empty(4), a)
        assert np.array_equal(got, np.zeros(2))

    def test_tie_breaks_to_lexicographically_smallest(self):
        # duplicate candidates: {0} and {1} both fit the target equally
        a = AdjacencyMatrix.empty(4)
        u = IncidenceMatrix(4, [(0, 1), (0, 1), (2, 3)])
        target = mask_off(project(IncidenceMatrix(4, [(0, 1)])), a)
        got = solve_ilsq_oracle(u, target, a)
        # (0,1,0) and (1,0,0) tie; lexicographic order prefers (0,1,0)
        assert np.array_equal(got, np.array([0.0, 1.0, 0.0]))

    def test_pool_size_limit(self):
        cols = [(i, i + 1) for i in range(21)]
        u = IncidenceMatrix(22, cols)
        with pytest.raises(ValueError, match="oracle limit"):
            solve_ilsq_oracle(
                u, AdjacencyMatrix.empty(22), AdjacencyMatrix.empty(22)
            )


class TestRankCandidates:
    def test_descending_with_index_ties(self):
        assert rank_candidates(np.array([0.2, 0.9, 0.5])).tolist() == [
            1,
            2,
            0,
        ]
        assert rank_candidates(np.array([0.5, 0.5, 0.5])).tolist() == [
            0,
            1,
            2,
        ]
        assert rank_candidates(np.array([])).tolist() == []

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError, match="finite"):
            rank_candidates(np.array([0.1, np.nan]))
        with pytest.raises(ValueError, match="vector"):
            rank_candidates(np.zeros((2, 2)))
