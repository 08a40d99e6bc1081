"""Loop behaviour of the iterative completion-matching scorer."""

import numpy as np
import pytest
from itertools import combinations
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from matboost import (
    IncidenceMatrix,
    MatBoost,
    MatBoostConfig,
    CompletionConfig,
    MatchConfig,
    StopReason,
    drift,
    ensemble_scores,
    rank_candidates,
    run_matboost,
)


def test_drift_identical_vectors_is_zero():
    v = np.array([0.3, 0.7, 0.1])
    assert drift(v, v) == 0.0


def test_drift_unit_difference():
    assert drift(np.array([0.0, 0.0]), np.array([1.0, 0.0])) == 1.0


def test_drift_four_ones():
    assert drift(np.zeros(4), np.ones(4)) == 2.0


def test_drift_length_mismatch():
    with pytest.raises(ValueError, match="equal length"):
        drift(np.zeros(3), np.zeros(4))


def test_ensemble_mean_of_early_rounds():
    lams = (
        np.array([1.0, 0.0]),
        np.array([0.0, 1.0]),
        np.array([0.5, 0.5]),
        np.array([0.9, 0.9]),
    )
    # four rounds recorded: average rounds 1..2, ignore the last two
    expected = np.mean(np.stack(lams[:2]), axis=0)
    assert np.array_equal(ensemble_scores(lams), expected)


def test_ensemble_short_run_returns_last():
    lams = (np.array([0.2, 0.8]), np.array([0.4, 0.6]))
    out = ensemble_scores(lams)
    assert np.array_equal(out, lams[-1])
    out[0] = 99.0
    assert lams[-1][0] == 0.4  # caller gets a copy, not an alias


def test_ensemble_single_round_returns_it():
    lams = (np.array([0.1, 0.9, 0.3]),)
    assert np.array_equal(ensemble_scores(lams), lams[0])


def _scripted_loop(monkeypatch, script):
    """Make each matching solve pop the next vector from ``script``."""
    seq = [np.asarray(v, dtype=float) for v in script]

    def fake_train(adj, cfg):
        return None

    def fake_predict(model, adj):
        return np.zeros_like(adj.to_dense())

    def fake_lasso(u, target, a, cfg):
        return seq.pop(0).copy()

    monkeypatch.setattr("matboost.completion.train", fake_train)
    monkeypatch.setattr("matboost.completion.predict_empty", fake_predict)
    monkeypatch.setattr("matboost.matching.solve_lasso", fake_lasso)


SMALL_S = IncidenceMatrix(3, [(0, 1), (1, 2)])
SMALL_U = IncidenceMatrix(3, [(0, 2), (0, 1, 2)])


def test_scripted_decreasing_drift_runs_to_cap(monkeypatch):
    script = [
        (1.0, 0.0),
        (1.0, 0.5),
        (1.0, 0.75),
        (1.0, 0.85),
        (1.0, 0.9),
    ]
    _scripted_loop(monkeypatch, script)
    cfg = MatBoostConfig(max_iterations=5)
    scores, trace = run_matboost(SMALL_S, SMALL_U, cfg)
    assert trace.stop_reason is StopReason.ITERATION_CAP
    assert trace.num_iterations == 5
    assert trace.drifts == pytest.approx((1.0, 0.5, 0.25, 0.1, 0.05))
    # cap stop still averages rounds 1..k-2 only
    expected = np.mean(np.stack([np.array(v) for v in script[:3]]), axis=0)
    assert np.array_equal(scores, expected)


def test_scripted_criterion_fires_on_first_non_decrease(monkeypatch):
    script = [
        (1.0, 0.0),
        (1.0, 0.4),
        (1.0, 1.0),  # drift 0.6 equals the previous drift: stop here
        (9.0, 9.0),  # must never be requested
    ]
    _scripted_loop(monkeypatch, script)
    scores, trace = run_matboost(SMALL_S, SMALL_U, MatBoostConfig(max_iterations=10))
    assert trace.stop_reason is StopReason.CRITERION
    assert trace.num_iterations == 3
    assert np.array_equal(scores, np.array([1.0, 0.0]))  # mean of round 1 alone


def test_scripted_stop_at_round_two_falls_back_to_last(monkeypatch):
    script = [(0.5, 0.0), (0.5, 2.0)]  # drifts 0.5 then 2.0, immediate stop
    _scripted_loop(monkeypatch, script)
    scores, trace = run_matboost(SMALL_S, SMALL_U, MatBoostConfig(max_iterations=10))
    assert trace.stop_reason is StopReason.CRITERION
    assert trace.num_iterations == 2
    assert np.array_equal(scores, np.array([0.5, 2.0]))


def test_scripted_cap_one_returns_first_round(monkeypatch):
    script = [(0.3, 0.7)]
    _scripted_loop(monkeypatch, script)
    scores, trace = run_matboost(SMALL_S, SMALL_U, MatBoostConfig(max_iterations=1))
    assert trace.stop_reason is StopReason.ITERATION_CAP
    assert trace.num_iterations == 1
    assert np.array_equal(scores, np.array([0.3, 0.7]))


def test_trace_invariants_hold_on_real_run():
    s = IncidenceMatrix(6, [(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 4, 5)])
    u = IncidenceMatrix(6, [(0, 3), (1, 4, 5), (0, 2, 5)])
    cfg = MatBoostConfig(
        max_iterations=6, completion=CompletionConfig(epochs=40, latent_dim=3)
    )
    scores, trace = run_matboost(s, u, cfg)
    assert trace.num_iterations <= 6
    assert all(d >= 0.0 for d in trace.drifts)
    assert len(trace.drifts) == trace.num_iterations
    assert trace.stop_reason in (StopReason.CRITERION, StopReason.ITERATION_CAP)
    assert scores.shape == (3,)
    assert np.all(np.isfinite(scores))


def test_duplicate_pool_over_dense_network_stays_in_box():
    cols = [(0, 1, 2), (1, 2, 3), (0, 2, 3), (0, 1, 3), (1, 2, 4), (0, 3, 4)]
    s = IncidenceMatrix(5, cols)
    u = IncidenceMatrix(5, cols)  # candidates duplicate the training columns
    cfg = MatBoostConfig(
        max_iterations=5, completion=CompletionConfig(epochs=60, latent_dim=3)
    )
    scores, trace = run_matboost(s, u, cfg)
    assert trace.num_iterations <= 5
    assert np.all(scores >= 0.0) and np.all(scores <= 1.0)


ALL_TRIPLES = list(combinations(range(10), 3))


def planted_instance(seed):
    """Ten-vertex network with two deleted columns hidden in a pool of six.

    Training mass sits on vertices 0..7 so pair counts overlap; the two
    deleted columns are chosen so every one of their vertex pairs is absent
    from the training projection and every vertex stays active.
    """
    rng = np.random.default_rng(seed)
    window = list(combinations(range(8), 3))
    while True:
        picks = rng.choice(len(window), size=6, replace=False)
        train_cols = [window[p] for p in picks]
        covered = set()
        deg = np.zeros(10)
        heat = {}
        for c in train_cols:
            for p in combinations(c, 2):
                covered.add(p)
                heat[p] = heat.get(p, 0) + 1
            for v in c:
                deg[v] += 1
        if max(heat.values()) < 2:
            continue  # need at least one repeated pair or the model is flat
        cands = [
            t
            for t in ALL_TRIPLES
            if t not in train_cols
            and all(p not in covered for p in combinations(t, 2))
            and all(deg[v] >= 1 for v in t)
        ]
        rng.shuffle(cands)
        positives = None
        for i in range(len(cands)):
            for j in range(i + 1, len(cands)):
                if not set(combinations(cands[i], 2)) & set(
                    combinations(cands[j], 2)
                ):
                    positives = [cands[i], cands[j]]
                    break
            if positives:
                break
        if positives is None:
            continue
        taken = set(train_cols) | set(positives)
        negatives = []
        while len(negatives) < 4:
            t = ALL_TRIPLES[rng.integers(len(ALL_TRIPLES))]
            if t not in taken:
                negatives.append(t)
                taken.add(t)
        pool = positives + negatives
        order = rng.permutation(6)
        pool = [pool[i] for i in order]
        pos_at = [int(np.where(order == i)[0][0]) for i in range(2)]
        return IncidenceMatrix(10, train_cols), IncidenceMatrix(10, pool), pos_at


def test_planted_recovery_beats_random_rank():
    # random scoring over six candidates has expected rank (6+1)/2 = 3.5
    ranks = []
    for seed in range(12):
        s, u, pos_at = planted_instance(seed)
        cfg = MatBoostConfig(
            max_iterations=4,
            completion=CompletionConfig(latent_dim=4, epochs=150, seed=seed),
            matching=MatchConfig(),
        )
        scores, _ = run_matboost(s, u, cfg)
        order = rank_candidates(scores)
        rank_of = {c: r + 1 for r, c in enumerate(order)}
        ranks.extend(rank_of[i] for i in pos_at)
    assert np.mean(ranks) < 3.5


def test_identical_runs_are_bitwise_equal():
    s, u, _ = planted_instance(3)
    cfg = MatBoostConfig(
        max_iterations=3, completion=CompletionConfig(epochs=50, seed=11)
    )
    scores_a, trace_a = run_matboost(s, u, cfg)
    scores_b, trace_b = run_matboost(s, u, cfg)
    assert np.array_equal(scores_a, scores_b)
    assert trace_a.drifts == trace_b.drifts
    assert trace_a.stop_reason is trace_b.stop_reason
    for la, lb in zip(trace_a.lambdas, trace_b.lambdas):
        assert np.array_equal(la, lb)


def test_empty_training_matrix_rejected():
    with pytest.raises(ValueError, match="no hyperlinks"):
        run_matboost(IncidenceMatrix(4, []), IncidenceMatrix(4, [(0, 1)]))


def test_empty_pool_rejected():
    with pytest.raises(ValueError, match="pool is empty"):
        run_matboost(IncidenceMatrix(4, [(0, 1)]), IncidenceMatrix(4, []))


def test_vertex_universe_mismatch_rejected():
    with pytest.raises(ValueError, match="different vertex universes"):
        run_matboost(IncidenceMatrix(4, [(0, 1)]), IncidenceMatrix(5, [(0, 1)]))


def test_config_rejects_zero_iterations():
    with pytest.raises(ValueError, match="at least 1"):
        MatBoostConfig(max_iterations=0)


def test_estimator_requires_fit_before_scoring():
    with pytest.raises(NotFittedError):
        MatBoost().decision_function(IncidenceMatrix(4, [(0, 1)]))


def test_estimator_fit_score_rank_roundtrip():
    s, u, _ = planted_instance(5)
    est = MatBoost(epochs=40, latent_dim=3, max_iterations=3)
    assert est.fit(s) is est
    scores = est.decision_function(u)
    assert scores.shape == (u.num_columns,)
    assert est.trace_.num_iterations <= 3
    order = est.rank(u)
    assert sorted(order.tolist()) == list(range(u.num_columns))


def test_estimator_clone_preserves_params():
    est = MatBoost(latent_dim=5, epochs=77, l1_penalty=0.3, random_state=9)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
