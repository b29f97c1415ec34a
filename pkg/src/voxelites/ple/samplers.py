"""Bin sampling strategies over preference logits.

Samplers own their exploration state (decayed epsilon or temperature,
Beta posteriors) and mutate it as they are used: epsilon and tau decay
multiplicatively per sample, posteriors update per human selection.
Greedy ties resolve to the first bin in logit order, which callers
provide row-major.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..archive import BinIndex

Logits = dict[BinIndex, float]


class SamplerError(ValueError):
    """Raised for sampling from no bins or updating with a bad bin."""


def _argmax(logits: Logits) -> BinIndex:
    best_bin, best_val = None, -np.inf
    for b, v in logits.items():
        if v > best_val:
            best_bin, best_val = b, v
    return best_bin


class Sampler(ABC):
    @abstractmethod
    def sample(self, logits: Logits, rng: np.random.Generator) -> BinIndex: ...

    def observe_selection(self, selected: BinIndex, zo: list[BinIndex]) -> None:
        pass

    def reset(self) -> None:
        pass


class UniformSampler(Sampler):
    def sample(self, logits, rng) -> BinIndex:
        if not logits:
            raise SamplerError("no occupied bins to sample")
        keys = list(logits)
        return keys[rng.choice(len(keys))]


class GreedySampler(Sampler):
    def sample(self, logits, rng) -> BinIndex:
        if not logits:
            raise SamplerError("no occupied bins to sample")
        return _argmax(logits)


class EpsGreedySampler(Sampler):
    """Argmax with probability 1-eps, uniform otherwise; eps decays by
    eps <- eps - lambda*eps after every sample, so after n samples
    eps = eps0*(1-lambda)^n."""

    def __init__(self, eps0: float = 0.9, decay: float = 0.1):
        if not 0.0 <= decay <= 1.0:
            raise ValueError("decay must lie in [0, 1]")
        self.eps0 = eps0
        self.decay = decay
        self.eps = eps0

    def sample(self, logits, rng) -> BinIndex:
        if not logits:
            raise SamplerError("no occupied bins to sample")
        explore = rng.random() < self.eps
        if explore:
            keys = list(logits)
            choice = keys[rng.choice(len(keys))]
        else:
            choice = _argmax(logits)
        self.eps -= self.decay * self.eps
        return choice

    def reset(self) -> None:
        self.eps = self.eps0


class BoltzmannSampler(Sampler):
    """Softmax over logits/tau; tau decays like epsilon does."""

    def __init__(self, tau0: float = 0.5, decay: float = 0.05):
        if tau0 <= 0:
            raise ValueError("tau0 must be positive")
        if not 0.0 <= decay <= 1.0:
            raise ValueError("decay must lie in [0, 1]")
        self.tau0 = tau0
        self.decay = decay
        self.tau = tau0

    def sample(self, logits, rng) -> BinIndex:
        if not logits:
            raise SamplerError("no occupied bins to sample")
        keys = list(logits)
        vals = np.array([logits[k] for k in keys]) / self.tau
        vals -= vals.max()  # shift-invariant softmax
        probs = np.exp(vals)
        probs /= probs.sum()
        choice = keys[rng.choice(len(keys), p=probs)]
        self.tau -= self.decay * self.tau
        return choice

    def reset(self) -> None:
        self.tau = self.tau0


class ThompsonSampler(Sampler):
    """Per-bin Beta posteriors; sample by drawn-value argmax.

    A human selection updates the selected bin to (alpha+1, beta+1)
    and every other occupied bin to (alpha, beta+1); unseen bins sit
    at the prior.
    """

    def __init__(self, alpha0: float = 1.0, beta0: float = 1.0):
        if alpha0 <= 0 or beta0 <= 0:
            raise ValueError("Beta prior parameters must be positive")
        self.alpha0 = alpha0
        self.beta0 = beta0
        self.posteriors: dict[BinIndex, tuple[float, float]] = {}

    def posterior(self, b: BinIndex) -> tuple[float, float]:
        return self.posteriors.get(b, (self.alpha0, self.beta0))

    def sample(self, logits, rng) -> BinIndex:
        if not logits:
            raise SamplerError("no occupied bins to sample")
        draws = {b: rng.beta(*self.posterior(b)) for b in logits}
        return _argmax(draws)

    def observe_selection(self, selected, zo) -> None:
        if selected not in zo:
            raise SamplerError(f"selected bin {selected} not occupied")
        for b in zo:
            a, bb = self.posterior(b)
            if b == selected:
                self.posteriors[b] = (a + 1.0, bb + 1.0)
            else:
                self.posteriors[b] = (a, bb + 1.0)

    def reset(self) -> None:
        self.posteriors.clear()
