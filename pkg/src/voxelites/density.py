"""Density-model fitness over the four phenotype descriptors.

Fitness is the sum of the density values (pdf, not CDF) of each
descriptor under its configured univariate model. Defaults are four
Gaussians; values are on an arbitrary scale set by the config, so they
are only comparable within one configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy import stats

from .voxel import Phenotype, PhenotypeDescriptors, descriptors

DESCRIPTOR_NAMES = (
    "functional_ratio",
    "filled_ratio",
    "major_medium_ratio",
    "major_smallest_ratio",
)

_FAMILIES = {
    "gaussian": lambda p: stats.norm(loc=p["mean"], scale=p["std"]),
    "uniform": lambda p: stats.uniform(loc=p["low"], scale=p["high"] - p["low"]),
    "lognormal": lambda p: stats.lognorm(s=p["sigma"], scale=p["scale"]),
}


@dataclass(frozen=True)
class Density:
    """One univariate density: a named family plus its parameters."""

    family: str
    params: dict

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown density family {self.family!r}")

    def pdf(self, x: float) -> float:
        return float(_FAMILIES[self.family](self.params).pdf(x))


@dataclass(frozen=True)
class DensityModelSet:
    """Per-descriptor densities, evaluated descriptor-wise and summed."""

    functional_ratio: Density
    filled_ratio: Density
    major_medium_ratio: Density
    major_smallest_ratio: Density

    def terms(self, desc: PhenotypeDescriptors) -> dict[str, float]:
        return {
            name: getattr(self, name).pdf(getattr(desc, name))
            for name in DESCRIPTOR_NAMES
        }

    def score(self, desc: PhenotypeDescriptors) -> float:
        return sum(self.terms(desc).values())

    def to_dict(self) -> dict:
        return {
            name: {"family": d.family, **d.params}
            for name in DESCRIPTOR_NAMES
            for d in [getattr(self, name)]
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DensityModelSet":
        def parse(spec: dict) -> Density:
            spec = dict(spec)
            family = spec.pop("family")
            return Density(family=family, params=spec)

        return cls(**{name: parse(d[name]) for name in DESCRIPTOR_NAMES})


def default_densities() -> DensityModelSet:
    """Gaussian stand-ins for the empirical shape statistics."""
    return DensityModelSet(
        functional_ratio=Density("gaussian", {"mean": 0.2, "std": 0.1}),
        filled_ratio=Density("gaussian", {"mean": 0.5, "std": 0.2}),
        major_medium_ratio=Density("gaussian", {"mean": 1.5, "std": 0.5}),
        major_smallest_ratio=Density("gaussian", {"mean": 3.0, "std": 1.0}),
    )


def fitness(p: Phenotype, densities: DensityModelSet) -> float:
    """Sum of per-descriptor density values; errors on degenerate boxes."""
    return densities.score(descriptors(p))
