"""Preference-learning emitters: history, features, models, samplers."""

from .emitter import Emitter, EmitterConfig, build_model, build_sampler, named_config, preset
from .features import FEATURE_DIMS, FeatureSet
from .history import HistoryError, Lineage, SelectionHistory, SelectionRecord
from .models import (
    DLTabularModel,
    KNNModel,
    KRRModel,
    LinearModel,
    NeuralModel,
    NoModel,
    PreferenceModel,
    RegressionModel,
    RidgeGDModel,
    TabularModel,
    uniform_logits,
)
from .samplers import (
    BoltzmannSampler,
    EpsGreedySampler,
    GreedySampler,
    Sampler,
    SamplerError,
    ThompsonSampler,
    UniformSampler,
)

__all__ = [
    "Emitter",
    "EmitterConfig",
    "FeatureSet",
    "FEATURE_DIMS",
    "SelectionHistory",
    "SelectionRecord",
    "HistoryError",
    "Lineage",
    "PreferenceModel",
    "RegressionModel",
    "NoModel",
    "TabularModel",
    "DLTabularModel",
    "LinearModel",
    "RidgeGDModel",
    "NeuralModel",
    "KNNModel",
    "KRRModel",
    "uniform_logits",
    "Sampler",
    "SamplerError",
    "UniformSampler",
    "GreedySampler",
    "EpsGreedySampler",
    "BoltzmannSampler",
    "ThompsonSampler",
    "preset",
    "named_config",
    "build_model",
    "build_sampler",
]
