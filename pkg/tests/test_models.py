"""Tests for the preference models that map history to per-bin logits."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import fill_container
from voxelites.ple.features import FeatureSet
from voxelites.ple.history import SelectionHistory
from voxelites.ple.models import (
    DLTabularModel,
    KNNModel,
    KRRModel,
    LinearModel,
    NeuralModel,
    NoModel,
    RidgeGDModel,
    TabularModel,
    uniform_logits,
)

A, B, C = (0, 0, 0), (1, 0, 0), (2, 0, 0)


def _history(selections, zo=(A, B, C), window=float("inf")) -> SelectionHistory:
    history = SelectionHistory(window_k=window)
    for s in selections:
        history.record_selection(s, list(zo))
    return history


def _row_container(n: int):
    """Container whose first n bins sit on depth-0 centres along one row."""
    centres = [(1.2 + 0.4 * i, 1.45) for i in range(n)]
    container = fill_container(centres)
    return container, [(i, 0, 0) for i in range(n)]


def _central_diff_grads(model, X, y, params, h=1e-6):
    grads = []
    for j, p in enumerate(params):
        g = np.zeros_like(p)
        flat = p.reshape(-1)
        gflat = g.reshape(-1)
        for idx in range(flat.size):
            orig = flat[idx]
            flat[idx] = orig + h
            lp, _ = model.loss_and_grads(X, y, params)
            flat[idx] = orig - h
            lm, _ = model.loss_and_grads(X, y, params)
            flat[idx] = orig
            gflat[idx] = (lp - lm) / (2 * h)
        grads.append(g)
    return grads


def test_uniform_logits_share_mass_equally():
    assert uniform_logits([]) == {}
    assert uniform_logits([A, B]) == {A: 0.5, B: 0.5}


def test_no_model_is_uniform_despite_history():
    logits = NoModel().logits(_history([A, A, A]), None, None, [A, B])
    assert logits == {A: 0.5, B: 0.5}


def test_tabular_falls_back_to_uniform_on_empty_history():
    logits = TabularModel().logits(_history([]), None, None, [A, B])
    assert logits == {A: 0.5, B: 0.5}


def test_tabular_is_counts_over_k_eff():
    logits = TabularModel().logits(_history([A, A, B, A]), None, None, [A, B, C])
    assert logits == {A: 0.75, B: 0.25, C: 0.0}


def test_tabular_matches_recount_of_windowed_records():
    rng = np.random.default_rng(7)
    bins = [A, B, C, (3, 0, 0)]
    history = SelectionHistory(window_k=3)
    for _ in range(10):
        history.record_selection(bins[rng.integers(len(bins))], bins)
    logits = TabularModel().logits(history, None, None, bins)
    recount = {b: 0 for b in bins}
    for r in history.records:
        recount[r.selected] += 1
    assert logits == {b: recount[b] / len(history.records) for b in bins}


def test_tabular_scores_novel_bins_zero():
    logits = TabularModel().logits(_history([A], zo=(A,)), None, None, [A, B])
    assert logits[B] == 0.0


def test_dl_tabular_adds_direct_and_backward_credit():
    history = SelectionHistory()
    history.record_selection(A, [A, B], lineage={B: [(A, 0.25)]})
    history.record_selection(B, [A, B])
    logits = DLTabularModel(delta=1.0, lambda_tab=0.5).logits(
        history, None, None, [A, B]
    )
    assert logits == {A: 0.5 + 0.25, B: 0.5}


def test_dl_tabular_direct_term_scales_with_delta_and_lambda():
    logits = DLTabularModel(delta=2.0, lambda_tab=0.25).logits(
        _history([A]), None, None, [A, B]
    )
    assert logits == {A: 1.5, B: 0.0}


def test_dl_tabular_never_credits_the_selected_bin_itself():
    history = SelectionHistory()
    history.record_selection(A, [A, B], lineage={B: [(B, 0.5)]})
    history.record_selection(B, [A, B])
    logits = DLTabularModel(delta=1.0, lambda_tab=0.5).logits(
        history, None, None, [A, B]
    )
    assert logits[B] == 0.5


def test_dl_tabular_credit_requires_consecutive_records():
    history = SelectionHistory()
    history.record_selection(A, [A, B, C], lineage={C: [(A, 0.5)]})
    history.record_selection(B, [A, B, C])
    history.record_selection(C, [A, B, C])
    logits = DLTabularModel(delta=1.0, lambda_tab=0.5).logits(
        history, None, None, [A, B, C]
    )
    assert logits == {A: 0.5, B: 0.5, C: 0.5}


def test_dl_tabular_with_no_decay_is_k_eff_times_tabular():
    history = _history([A, B, A, A, B])
    zo = [A, B, C]
    dl = DLTabularModel(delta=1.0, lambda_tab=0.0).logits(history, None, None, zo)
    tab = TabularModel().logits(history, None, None, zo)
    assert dl == {b: history.k_eff * tab[b] for b in zo}


def test_regression_model_requires_features():
    with pytest.raises(ValueError):
        LinearModel().logits(_history([A]), None, None, [A])


def test_regression_model_uniform_on_empty_history():
    container, zo = _row_container(2)
    logits = LinearModel().logits(
        _history([]), container, FeatureSet("bc"), zo
    )
    assert logits == {zo[0]: 0.5, zo[1]: 0.5}


def test_regression_model_uniform_when_no_snapshot_bin_is_live():
    container, zo = _row_container(2)
    # A depth-1 index is never allocated until its parent subdivides, so
    # a snapshot made of it alone leaves nothing to train on.
    ghost = (0, 0, 1)
    history = SelectionHistory()
    history.record_selection(ghost, [ghost])
    logits = LinearModel().logits(history, container, FeatureSet("bc"), zo)
    assert logits == {zo[0]: 0.5, zo[1]: 0.5}


def test_regression_model_skips_dead_snapshot_bins_in_training():
    container, zo = _row_container(2)
    ghost = (0, 0, 1)
    history = SelectionHistory()
    history.record_selection(zo[0], [zo[0], zo[1], ghost])
    logits = LinearModel().logits(history, container, FeatureSet("bc"), zo)
    assert set(logits) == set(zo)
    assert all(np.isfinite(v) for v in logits.values())


def test_regression_predictions_are_clamped_to_zero():
    container, zo = _row_container(4)
    history = SelectionHistory()
    train_zo = zo[:3]
    for s in [zo[0], zo[0], zo[0], zo[1]]:
        history.record_selection(s, train_zo)
    logits = LinearModel().logits(history, container, FeatureSet("bc"), zo)
    # The least-squares line through y = (0.75, 0.25, 0.0) at the three
    # training centres goes negative at the third and fourth centres.
    assert logits[zo[0]] == pytest.approx(17 / 24)
    assert logits[zo[1]] == pytest.approx(1 / 3)
    assert logits[zo[2]] == 0.0
    assert logits[zo[3]] == 0.0


def test_linear_fit_satisfies_the_normal_equations():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(40, 3))
    y = rng.normal(size=40)
    model = LinearModel()
    model.fit(X, y)
    Xa = np.hstack([X, np.ones((40, 1))])
    residual_gradient = Xa.T @ (y - Xa @ model.w)
    assert np.allclose(residual_gradient, 0.0, atol=1e-10)


def test_ridge_gd_converges_to_the_closed_form():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(30, 4))
    y = rng.normal(size=30)
    model = RidgeGDModel(l2=0.7)
    model.fit(X, y)
    Xa = np.hstack([X, np.ones((30, 1))])
    closed = np.linalg.solve(Xa.T @ Xa + 0.7 * np.eye(5), Xa.T @ y)
    assert np.allclose(model.w, closed, atol=1e-10)


def test_ridge_gd_descends_on_ill_conditioned_designs():
    rng = np.random.default_rng(3)
    base = rng.normal(size=(25, 1))
    X = np.hstack([base, base * 1.0000001, rng.normal(size=(25, 1))])
    y = rng.normal(size=25)
    model = RidgeGDModel(l2=1e-3)
    model.fit(X, y)
    Xa = np.hstack([X, np.ones((25, 1))])

    def objective(w):
        return np.sum((y - Xa @ w) ** 2) + 1e-3 * np.sum(w**2)

    # The fixed step keeps the iteration stable even when two columns are
    # nearly collinear; it descends from zero, though full convergence to
    # the closed form would need more than the fixed iteration budget.
    assert np.isfinite(model.w).all()
    assert objective(model.w) < objective(np.zeros(4))


def test_neural_gradients_match_finite_differences():
    rng = np.random.default_rng(5)
    model = NeuralModel(hidden=(8, 6), l2=1e-3, seed=3, dtype=np.float64)
    model.init_params(4)
    # Jitter away from zero-initialised biases so no ReLU pre-activation
    # sits exactly on its kink, where central differences are invalid.
    params = [p + rng.normal(0.0, 0.05, p.shape) for p in model.params]
    X = rng.normal(size=(6, 4))
    y = rng.normal(size=6)
    _, analytic = model.loss_and_grads(X, y, params)
    numeric = _central_diff_grads(model, X, y, params)
    for a, n in zip(analytic, numeric):
        denom = max(np.linalg.norm(a), np.linalg.norm(n), 1e-12)
        assert np.linalg.norm(a - n) / denom < 1e-6


def test_neural_fit_reduces_training_loss():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(20, 3)).astype(np.float32)
    y = (X[:, 0] * 0.5 + 0.2).astype(np.float32)
    model = NeuralModel(hidden=(16, 16), epochs=50, lr=1e-2, seed=0)
    model.fit(X, y)
    first, _ = model.loss_and_grads(X, y)
    for _ in range(5):
        model.fit(X, y)
    final, _ = model.loss_and_grads(X, y)
    assert final < first


def test_neural_fit_warm_starts_from_previous_parameters():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(10, 3)).astype(np.float32)
    y = rng.normal(size=10).astype(np.float32)
    model = NeuralModel(hidden=(4,), epochs=5, seed=0)
    model.fit(X, y)
    after_first = [p.copy() for p in model.params]
    assert model._adam_t == 5
    model.fit(X, y)
    assert model._adam_t == 10
    assert any(not np.array_equal(a, b) for a, b in zip(after_first, model.params))


def test_neural_fit_reinitialises_when_input_width_changes():
    rng = np.random.default_rng(8)
    model = NeuralModel(hidden=(4,), epochs=5, seed=0)
    model.fit(rng.normal(size=(8, 3)).astype(np.float32), np.zeros(8, np.float32))
    model.fit(rng.normal(size=(8, 5)).astype(np.float32), np.zeros(8, np.float32))
    assert model._in_dim == 5
    assert model._adam_t == 5


def test_knn_caps_neighbours_at_the_training_size():
    model = KNNModel(k=5)
    X = np.array([[0.0], [1.0]])
    model.fit(X, np.array([0.0, 1.0]))
    assert np.isfinite(model.predict(np.array([[0.5]]))).all()


def test_knn_is_exact_at_training_points():
    model = KNNModel(k=3)
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    y = np.array([0.1, 0.4, 0.7, 1.0])
    model.fit(X, y)
    assert np.allclose(model.predict(X), y)


def test_krr_rejects_unknown_kernels():
    with pytest.raises(ValueError):
        KRRModel(kernel="poly")


def test_krr_linear_kernel_recovers_a_linear_map():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(30, 3))
    y = X @ np.array([1.0, -2.0, 0.5])
    model = KRRModel(kernel="linear", l2=1e-8)
    model.fit(X, y)
    assert np.allclose(model.predict(X), y, atol=1e-4)


def test_reset_clears_neural_parameters():
    model = NeuralModel(hidden=(4,), epochs=2, seed=0)
    model.fit(np.zeros((4, 2), np.float32), np.zeros(4, np.float32))
    model.reset()
    assert model.params is None
    assert model._in_dim is None
