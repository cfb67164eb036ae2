"""Privacy-preserving pooled sequencing toolkit.

Simulates a pooling scheme in which a trusted collector hides the genomes of
unknown individuals among decoy individuals whose genotypes it already knows,
assigning each pool member a power-of-two coverage depth so that the collector
can decode every genotype from unlabeled read counts while the sequencing
machine learns at most one bit per variant site.
"""

__version__ = "0.1.0"

from .bounds import BoundsReport, bounds_report, min_M, min_alpha0_constant, min_alpha0_random
from .collector import (
    DecodeResult,
    NoiseModel,
    Observation,
    aggregate,
    column_error_rate,
    decode_constant,
    decode_random,
    noise_model,
)
from .leakage import LeakageReport, carry_bit_entropy, exact_leakage, integer_sum_pmf, leakage_curve
from .model import GenotypeMatrix, PopulationModel, build_population, sample_known, sample_unknown
from .pool import PooledCounts, SchemeParams, read_channel, sequence_pool

__all__ = [
    "__version__",
    "BoundsReport",
    "DecodeResult",
    "GenotypeMatrix",
    "LeakageReport",
    "NoiseModel",
    "Observation",
    "PooledCounts",
    "PopulationModel",
    "SchemeParams",
    "aggregate",
    "bounds_report",
    "build_population",
    "carry_bit_entropy",
    "column_error_rate",
    "decode_constant",
    "decode_random",
    "exact_leakage",
    "integer_sum_pmf",
    "leakage_curve",
    "min_M",
    "min_alpha0_constant",
    "min_alpha0_random",
    "noise_model",
    "read_channel",
    "sample_known",
    "sample_unknown",
    "sequence_pool",
]
