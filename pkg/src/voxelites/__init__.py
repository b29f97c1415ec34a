"""Interactive constrained MAP-Elites with preference-learning emitters.

A human (or simulated user) steers a quality-diversity search over
L-system voxel ships by selecting archive bins; emitters learn the
selection pattern and propose further bins for automated evolution.
"""

from .archive import Bin, BinIndex, Container, DomainError
from .config import EngineConfig
from .density import Density, DensityModelSet, default_densities, fitness
from .domain import Solution, VoxelDomain
from .evolution import EmptyBinError, EvolutionConfig, fi2pop_step
from .grammar import Genotype, MutationConfig, Production, RuleSet, crossover, expand, load_rules, mutate
from .hull import build_hull, erode_added, hull_fill, smooth
from .ple import Emitter, EmitterConfig, FeatureSet, SelectionHistory, named_config, preset
from .session import Session, SessionError, StepReport, StudyReport, study_session
from .voxel import (
    ConstraintReport,
    ConstraintWeights,
    Phenotype,
    PhenotypeDescriptors,
    build_phenotype,
    check_constraints,
    descriptors,
    export_blueprint,
)

__version__ = "0.1.0"

__all__ = [
    "Bin",
    "BinIndex",
    "Container",
    "DomainError",
    "EngineConfig",
    "Density",
    "DensityModelSet",
    "default_densities",
    "fitness",
    "Solution",
    "VoxelDomain",
    "EmptyBinError",
    "EvolutionConfig",
    "fi2pop_step",
    "Genotype",
    "MutationConfig",
    "Production",
    "RuleSet",
    "crossover",
    "expand",
    "load_rules",
    "mutate",
    "build_hull",
    "erode_added",
    "hull_fill",
    "smooth",
    "Emitter",
    "EmitterConfig",
    "FeatureSet",
    "SelectionHistory",
    "named_config",
    "preset",
    "Session",
    "SessionError",
    "StepReport",
    "StudyReport",
    "study_session",
    "ConstraintReport",
    "ConstraintWeights",
    "Phenotype",
    "PhenotypeDescriptors",
    "build_phenotype",
    "check_constraints",
    "descriptors",
    "export_blueprint",
]
