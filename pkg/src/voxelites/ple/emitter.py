"""Emitters: history + features + model + sampler, composed by config.

An emitter observes human selections (recording history and posterior
updates), then proposes bins for automated evolution by running the
occupied bins through feature extraction, the preference model, and
the sampler. Presets cover the baselines: the null emitter (never
invoked), the random emitter (no history, no model, uniform choice),
the greedy emitter (window 1, tabular counts, argmax), and the default
preference emitter (neural model, full history, Boltzmann sampling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..archive import BinIndex, Container
from .features import FeatureSet
from .history import Lineage, SelectionHistory
from .models import (
    DLTabularModel,
    KNNModel,
    KRRModel,
    LinearModel,
    NeuralModel,
    NoModel,
    PreferenceModel,
    RidgeGDModel,
    TabularModel,
)
from .samplers import (
    BoltzmannSampler,
    EpsGreedySampler,
    GreedySampler,
    Sampler,
    ThompsonSampler,
    UniformSampler,
)

MODEL_KINDS = (
    "none",
    "tabular",
    "dl_tabular",
    "linear",
    "ridge",
    "neural",
    "knn",
    "krr_linear",
    "krr_rbf",
)
SAMPLER_KINDS = ("uniform", "greedy", "eps_greedy", "boltzmann", "thompson")
FEATURE_KINDS = ("none", "bc", "s_axes", "s_full")


@dataclass(frozen=True)
class EmitterConfig:
    """Component choices plus every tunable hyperparameter."""

    name: str = "preference"
    history_k: float = math.inf
    feature_kind: str = "s_axes"
    model_kind: str = "neural"
    sampler_kind: str = "boltzmann"
    # counting-model decay
    delta: float = 1.0
    lambda_tab: float = 0.5
    # sampler schedules and priors
    eps0: float = 0.9
    lambda_eps: float = 0.1
    tau0: float = 0.5
    lambda_tau: float = 0.05
    alpha0: float = 1.0
    beta0: float = 1.0
    # regressor hyperparameters
    ridge_l2: float = 1.0
    ridge_iterations: int = 200
    nn_hidden: tuple[int, ...] = (200, 200)
    nn_l2: float = 1e-3
    nn_epochs: int = 20
    nn_lr: float = 1e-3
    knn_k: int = 5
    krr_l2: float = 1.0

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.model_kind!r}")
        if self.sampler_kind not in SAMPLER_KINDS:
            raise ValueError(f"unknown sampler kind {self.sampler_kind!r}")
        if self.feature_kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {self.feature_kind!r}")
        if self.sampler_kind == "thompson" and self.model_kind != "tabular":
            raise ValueError("thompson sampling requires the tabular model")
        if self._needs_features() and self.feature_kind == "none":
            raise ValueError(f"{self.model_kind} model requires features")
        for decay in (self.lambda_eps, self.lambda_tau, self.lambda_tab):
            if not 0.0 <= decay <= 1.0:
                raise ValueError("decay rates must lie in [0, 1]")
        if self.tau0 <= 0:
            raise ValueError("tau0 must be positive")
        if self.history_k != math.inf and (
            self.history_k < 0 or int(self.history_k) != self.history_k
        ):
            raise ValueError("history_k must be a non-negative integer or inf")

    def _needs_features(self) -> bool:
        return self.model_kind in ("linear", "ridge", "neural", "knn", "krr_linear", "krr_rbf")

    @property
    def is_null(self) -> bool:
        return self.name == "null"

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "history_k": "inf" if self.history_k == math.inf else int(self.history_k),
            "feature_kind": self.feature_kind,
            "model_kind": self.model_kind,
            "sampler_kind": self.sampler_kind,
            "delta": self.delta,
            "lambda_tab": self.lambda_tab,
            "eps0": self.eps0,
            "lambda_eps": self.lambda_eps,
            "tau0": self.tau0,
            "lambda_tau": self.lambda_tau,
            "alpha0": self.alpha0,
            "beta0": self.beta0,
            "ridge_l2": self.ridge_l2,
            "ridge_iterations": self.ridge_iterations,
            "nn_hidden": list(self.nn_hidden),
            "nn_l2": self.nn_l2,
            "nn_epochs": self.nn_epochs,
            "nn_lr": self.nn_lr,
            "knn_k": self.knn_k,
            "krr_l2": self.krr_l2,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EmitterConfig":
        d = dict(d)
        k = d.get("history_k", "inf")
        d["history_k"] = math.inf if k in ("inf", None) else float(k)
        if "nn_hidden" in d:
            d["nn_hidden"] = tuple(d["nn_hidden"])
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


def build_model(config: EmitterConfig, seed: int = 0) -> PreferenceModel:
    kind = config.model_kind
    if kind == "none":
        return NoModel()
    if kind == "tabular":
        return TabularModel()
    if kind == "dl_tabular":
        return DLTabularModel(delta=config.delta, lambda_tab=config.lambda_tab)
    if kind == "linear":
        return LinearModel()
    if kind == "ridge":
        return RidgeGDModel(l2=config.ridge_l2, iterations=config.ridge_iterations)
    if kind == "neural":
        return NeuralModel(
            hidden=config.nn_hidden,
            l2=config.nn_l2,
            epochs=config.nn_epochs,
            lr=config.nn_lr,
            seed=seed,
        )
    if kind == "knn":
        return KNNModel(k=config.knn_k)
    if kind == "krr_linear":
        return KRRModel(kernel="linear", l2=config.krr_l2)
    return KRRModel(kernel="rbf", l2=config.krr_l2)


def build_sampler(config: EmitterConfig) -> Sampler:
    kind = config.sampler_kind
    if kind == "uniform":
        return UniformSampler()
    if kind == "greedy":
        return GreedySampler()
    if kind == "eps_greedy":
        return EpsGreedySampler(eps0=config.eps0, decay=config.lambda_eps)
    if kind == "boltzmann":
        return BoltzmannSampler(tau0=config.tau0, decay=config.lambda_tau)
    return ThompsonSampler(alpha0=config.alpha0, beta0=config.beta0)


class Emitter:
    """Session-local emitter state and the emit pipeline."""

    def __init__(self, config: EmitterConfig, rng: np.random.Generator, seed: int = 0):
        self.config = config
        self.rng = rng
        self.history = SelectionHistory(config.history_k)
        self.features = (
            FeatureSet(config.feature_kind) if config.feature_kind != "none" else None
        )
        self.model = build_model(config, seed=seed)
        self.sampler = build_sampler(config)

    def observe_selection(
        self, selected: BinIndex, zo: list[BinIndex], lineage: Lineage | None = None
    ) -> None:
        """Record one human selection (history + posterior updates)."""
        self.history.record_selection(selected, zo, lineage)
        self.sampler.observe_selection(selected, zo)

    def extend_lineage(self, lineage: Lineage) -> None:
        self.history.extend_last_lineage(lineage)

    def logits(self, container: Container, zo: list[BinIndex] | None = None):
        if zo is None:
            zo = container.occupied_bins()
        return self.model.logits(self.history, container, self.features, zo)

    def emit(self, container: Container) -> BinIndex:
        """Propose the next bin to evolve."""
        zo = container.occupied_bins()
        if not zo:
            raise ValueError("cannot emit from an empty container")
        return self.sampler.sample(self.logits(container, zo), self.rng)

    def reset(self) -> None:
        self.history.clear()
        self.sampler.reset()
        self.model.reset()


def preset(name: str) -> EmitterConfig:
    """Named emitter configurations, including the study baselines."""
    presets = {
        "null": EmitterConfig(
            name="null",
            history_k=0,
            feature_kind="none",
            model_kind="none",
            sampler_kind="uniform",
        ),
        "random": EmitterConfig(
            name="random",
            history_k=0,
            feature_kind="none",
            model_kind="none",
            sampler_kind="uniform",
        ),
        "greedy": EmitterConfig(
            name="greedy",
            history_k=1,
            feature_kind="none",
            model_kind="tabular",
            sampler_kind="greedy",
        ),
        "preference": EmitterConfig(name="preference"),
    }
    if name not in presets:
        raise ValueError(f"unknown emitter preset {name!r}")
    return presets[name]


def named_config(name: str, **overrides) -> EmitterConfig:
    return replace(preset(name), **overrides)
