"""Population priors and genotype sampling.

Each variant site is biallelic: 1 encodes the allele that is more common in
the population, 0 the rarer one. A cohort is a binary matrix with one row per
individual and one column per site. Unknown individuals are drawn from the
per-site allele frequencies; decoy (known) individuals are fair coin flips.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "PopulationModel",
    "GenotypeMatrix",
    "build_population",
    "load_frequency_file",
    "sample_unknown",
    "sample_known",
]


@dataclass(frozen=True)
class PopulationModel:
    """Per-site prior probability that an individual carries the common allele."""

    num_snps: int
    major_freq: np.ndarray

    def __post_init__(self) -> None:
        if self.num_snps < 1:
            raise ValueError("num_snps must be >= 1")
        freq = np.asarray(self.major_freq, dtype=float)
        if freq.shape != (self.num_snps,):
            raise ValueError(
                f"expected {self.num_snps} frequencies, got shape {freq.shape}"
            )
        if np.any(freq < 0.0) or np.any(freq > 1.0):
            raise ValueError("allele frequencies must lie in [0, 1]")
        object.__setattr__(self, "major_freq", freq)


@dataclass(frozen=True)
class GenotypeMatrix:
    """Binary genotype matrix: rows are individuals, columns are variant sites."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits)
        if bits.ndim != 2:
            raise ValueError("genotype matrix must be 2-D")
        if bits.size and not np.isin(bits, (0, 1)).all():
            raise ValueError("genotype entries must be 0 or 1")
        object.__setattr__(self, "bits", bits.astype(np.uint8))

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]


def build_population(num_snps: int, freq: float | list[float] | np.ndarray = 0.5) -> PopulationModel:
    """Materialize a per-site frequency vector from a scalar or explicit list.

    A scalar is broadcast to every site; a sequence must supply exactly one
    probability per site.
    """
    if num_snps < 1:
        raise ValueError("num_snps must be >= 1")
    if np.isscalar(freq):
        vec = np.full(num_snps, float(freq))
    else:
        vec = np.asarray(freq, dtype=float)
    return PopulationModel(num_snps=num_snps, major_freq=vec)


def load_frequency_file(path: str | Path, num_snps: int | None = None) -> PopulationModel:
    """Read allele frequencies from UTF-8 text, one probability per line.

    The line count must equal ``num_snps`` when given.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    try:
        values = [float(line) for line in lines]
    except ValueError as exc:
        raise ValueError(f"frequency file {path}: {exc}") from None
    if num_snps is not None and len(values) != num_snps:
        raise ValueError(
            f"frequency file {path} has {len(values)} entries, expected {num_snps}"
        )
    return build_population(len(values), values)


def sample_unknown(pop: PopulationModel, num_individuals: int, rng: np.random.Generator) -> GenotypeMatrix:
    """Draw the unknown cohort: independent per-entry coin flips with the site's prior."""
    if num_individuals < 1:
        raise ValueError("num_individuals must be >= 1")
    bits = rng.random((num_individuals, pop.num_snps)) < pop.major_freq
    return GenotypeMatrix(bits.astype(np.uint8))


def sample_known(num_snps: int, num_individuals: int, rng: np.random.Generator) -> GenotypeMatrix:
    """Draw the decoy cohort: i.i.d. fair-coin genotypes."""
    if num_snps < 1:
        raise ValueError("num_snps must be >= 1")
    if num_individuals < 1:
        raise ValueError("num_individuals must be >= 1")
    bits = rng.integers(0, 2, size=(num_individuals, num_snps), dtype=np.uint8)
    return GenotypeMatrix(bits)
