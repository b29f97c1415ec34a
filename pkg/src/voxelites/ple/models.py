"""Preference models: from selection history to per-bin logits.

Counting models (tabular and its decayed, credit-assigning variant)
score bins straight from the history and give novel bins zero mass.
Regression models fit per-bin features against the time-averaged
selection indicator and can score bins they have never seen. All
models fall back to uniform logits over the occupied bins while the
history is empty, and every logit is finite and non-negative.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np
from sklearn.kernel_ridge import KernelRidge
from sklearn.neighbors import KNeighborsRegressor

from ..archive import BinIndex, Container
from .features import FeatureSet
from .history import SelectionHistory

Logits = dict[BinIndex, float]


def uniform_logits(zo: list[BinIndex]) -> Logits:
    if not zo:
        return {}
    v = 1.0 / len(zo)
    return {b: v for b in zo}


class PreferenceModel(ABC):
    needs_features = False

    @abstractmethod
    def logits(
        self,
        history: SelectionHistory,
        container: Container,
        features: FeatureSet | None,
        zo: list[BinIndex],
    ) -> Logits: ...

    def reset(self) -> None:
        pass


class NoModel(PreferenceModel):
    """Uniform scores; the random emitter's stand-in for a model."""

    def logits(self, history, container, features, zo) -> Logits:
        return uniform_logits(zo)


class TabularModel(PreferenceModel):
    """Average selection indicator per bin: L = counts / k_eff."""

    def logits(self, history, container, features, zo) -> Logits:
        if len(history) == 0:
            return uniform_logits(zo)
        counts = history.selection_counts()
        k = history.k_eff
        return {b: counts.get(b, 0) / k for b in zo}


class DLTabularModel(PreferenceModel):
    """Decayed counts plus backward credit through offspring lineage.

    Each selection adds delta*(1-lambda_tab) to its own bin. When the
    bin selected at step t received offspring at step t-1 from a
    different source bin, that source gains delta*share per offspring,
    shares being 1/n_s of the generating update.
    """

    def __init__(self, delta: float = 1.0, lambda_tab: float = 0.5):
        self.delta = delta
        self.lambda_tab = lambda_tab

    def logits(self, history, container, features, zo) -> Logits:
        if len(history) == 0:
            return uniform_logits(zo)
        L = {b: 0.0 for b in zo}
        direct = self.delta * (1.0 - self.lambda_tab)
        recs = history.records
        for r in recs:
            if r.selected in L:
                L[r.selected] += direct
        for prev, cur in zip(recs, recs[1:]):
            for src, share in prev.lineage.get(cur.selected, []):
                if src != cur.selected and src in L:
                    L[src] += self.delta * share
        return L


class RegressionModel(PreferenceModel):
    """Shared fit/predict plumbing for the feature-based models."""

    needs_features = True

    def logits(self, history, container, features, zo) -> Logits:
        if features is None:
            raise ValueError(f"{type(self).__name__} requires a feature set")
        if len(history) == 0:
            return uniform_logits(zo)
        train_bins = [b for b in history.snapshot_bins() if b in container.bins]
        if not train_bins:
            return uniform_logits(zo)
        counts = history.selection_counts()
        k = history.k_eff
        y = np.array([counts.get(b, 0) / k for b in train_bins])
        X = features.matrix(container, train_bins)
        self.fit(X, y)
        preds = np.maximum(self.predict(features.matrix(container, zo)), 0.0)
        return {b: float(p) for b, p in zip(zo, preds)}

    @abstractmethod
    def fit(self, X: np.ndarray, y: np.ndarray) -> None: ...

    @abstractmethod
    def predict(self, X: np.ndarray) -> np.ndarray: ...


def _augment(X: np.ndarray) -> np.ndarray:
    return np.hstack([X, np.ones((X.shape[0], 1))])


class LinearModel(RegressionModel):
    """Exact least squares over [X | 1]."""

    def __init__(self):
        self.w: np.ndarray | None = None

    def fit(self, X, y) -> None:
        self.w = np.linalg.lstsq(_augment(X), y, rcond=None)[0]

    def predict(self, X) -> np.ndarray:
        return _augment(X) @ self.w


class RidgeGDModel(RegressionModel):
    """L2-penalised least squares solved by full-batch gradient descent.

    Objective: ||y - Xa w||^2 + l2 ||w||^2 over the bias-augmented
    design Xa, every coefficient penalised, so the optimum is the
    closed-form (Xa'Xa + l2 I)^-1 Xa'y. The step size is the optimal
    fixed step 2/(L+mu) for this quadratic, which keeps the iteration
    a contraction for any conditioning.
    """

    def __init__(self, l2: float = 1.0, iterations: int = 200):
        self.l2 = l2
        self.iterations = iterations
        self.w: np.ndarray | None = None

    def fit(self, X, y) -> None:
        Xa = _augment(X)
        A = Xa.T @ Xa
        ev = np.linalg.eigvalsh(A)
        lip = 2.0 * (ev[-1] + self.l2)
        mu = 2.0 * (max(ev[0], 0.0) + self.l2)
        lr = 2.0 / (lip + mu)
        Xty = Xa.T @ y
        w = np.zeros(Xa.shape[1])
        for _ in range(self.iterations):
            grad = 2.0 * (A @ w - Xty + self.l2 * w)
            w = w - lr * grad
        self.w = w

    def predict(self, X) -> np.ndarray:
        return _augment(X) @ self.w


class NeuralModel(RegressionModel):
    """Two-hidden-layer ReLU regressor trained by warm-started Adam.

    Each fit runs `epochs` full-batch Adam steps from the previous
    parameters (fresh He init on the first fit or when the input
    dimension changes). The loss is mean squared error plus an L2
    penalty of l2/2 times the squared weight norms (biases free).
    """

    def __init__(
        self,
        hidden: tuple[int, ...] = (200, 200),
        l2: float = 1e-3,
        epochs: int = 20,
        lr: float = 1e-3,
        seed: int = 0,
        dtype=np.float32,
    ):
        self.hidden = tuple(hidden)
        self.l2 = l2
        self.epochs = epochs
        self.lr = lr
        self.seed = seed
        self.dtype = dtype
        self.params: list[np.ndarray] | None = None  # [W1, b1, W2, b2, ...]
        self._adam_m: list[np.ndarray] | None = None
        self._adam_v: list[np.ndarray] | None = None
        self._adam_t = 0
        self._in_dim: int | None = None

    # ---- parameter handling ----

    def init_params(self, in_dim: int) -> None:
        rng = np.random.default_rng(self.seed)
        dims = (in_dim, *self.hidden, 1)
        params: list[np.ndarray] = []
        for d_in, d_out in zip(dims, dims[1:]):
            scale = np.sqrt(2.0 / d_in)
            params.append(rng.normal(0.0, scale, (d_in, d_out)).astype(self.dtype))
            params.append(np.zeros(d_out, dtype=self.dtype))
        self.params = params
        self._adam_m = [np.zeros_like(p) for p in params]
        self._adam_v = [np.zeros_like(p) for p in params]
        self._adam_t = 0
        self._in_dim = in_dim

    def reset(self) -> None:
        self.params = None
        self._in_dim = None

    # ---- forward / backward ----

    def _forward(self, X: np.ndarray, params: list[np.ndarray]):
        acts = [X]
        pre: list[np.ndarray] = []
        a = X
        n_layers = len(params) // 2
        for i in range(n_layers):
            W, b = params[2 * i], params[2 * i + 1]
            z = a @ W + b
            pre.append(z)
            a = np.maximum(z, 0.0) if i < n_layers - 1 else z
            acts.append(a)
        return acts, pre

    def loss_and_grads(self, X: np.ndarray, y: np.ndarray, params=None):
        """Training loss and analytic parameter gradients."""
        if params is None:
            params = self.params
        n = X.shape[0]
        acts, pre = self._forward(X, params)
        pred = acts[-1][:, 0]
        err = pred - y
        n_layers = len(params) // 2
        loss = float(np.mean(err**2))
        for i in range(n_layers):
            loss += 0.5 * self.l2 * float(np.sum(params[2 * i] ** 2))

        grads: list[np.ndarray] = [np.zeros(0)] * len(params)
        delta = (2.0 * err / n)[:, None]
        for i in reversed(range(n_layers)):
            W = params[2 * i]
            grads[2 * i] = acts[i].T @ delta + self.l2 * W
            grads[2 * i + 1] = delta.sum(axis=0)
            if i > 0:
                delta = (delta @ W.T) * (pre[i - 1] > 0)
        return loss, grads

    def fit(self, X, y) -> None:
        X = np.asarray(X, dtype=self.dtype)
        y = np.asarray(y, dtype=self.dtype)
        if self.params is None or self._in_dim != X.shape[1]:
            self.init_params(X.shape[1])
        b1, b2, eps = 0.9, 0.999, 1e-8
        for _ in range(self.epochs):
            _, grads = self.loss_and_grads(X, y)
            self._adam_t += 1
            t = self._adam_t
            for j, g in enumerate(grads):
                self._adam_m[j] = b1 * self._adam_m[j] + (1 - b1) * g
                self._adam_v[j] = b2 * self._adam_v[j] + (1 - b2) * g * g
                m_hat = self._adam_m[j] / (1 - b1**t)
                v_hat = self._adam_v[j] / (1 - b2**t)
                self.params[j] = self.params[j] - self.lr * m_hat / (
                    np.sqrt(v_hat) + eps
                )

    def predict(self, X) -> np.ndarray:
        acts, _ = self._forward(np.asarray(X, dtype=self.dtype), self.params)
        return acts[-1][:, 0].astype(float)


class KNNModel(RegressionModel):
    """k-nearest-neighbour regression, inverse-distance weighted."""

    def __init__(self, k: int = 5):
        self.k = k
        self._reg: KNeighborsRegressor | None = None

    def fit(self, X, y) -> None:
        self._reg = KNeighborsRegressor(
            n_neighbors=min(self.k, X.shape[0]), weights="distance"
        )
        self._reg.fit(X, y)

    def predict(self, X) -> np.ndarray:
        return np.asarray(self._reg.predict(X), dtype=float)


class KRRModel(RegressionModel):
    """Kernel ridge regression with a linear or RBF kernel."""

    def __init__(self, kernel: str = "rbf", l2: float = 1.0):
        if kernel not in ("linear", "rbf"):
            raise ValueError(f"unsupported kernel {kernel!r}")
        self.kernel = kernel
        self.l2 = l2
        self._reg: KernelRidge | None = None

    def fit(self, X, y) -> None:
        self._reg = KernelRidge(alpha=self.l2, kernel=self.kernel)
        self._reg.fit(X, y)

    def predict(self, X) -> np.ndarray:
        return np.asarray(self._reg.predict(X), dtype=float)
