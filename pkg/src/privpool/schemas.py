"""Request and response models shared by the HTTP service and the CLI client.

Every response echoes the fully resolved configuration (including the seed and
the package version) so that any emitted artifact can be reproduced exactly.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from . import __version__

GRID_CELL_CAP = 10_000


class BoundsRequest(BaseModel):
    """Operating point for the sizing rules."""

    eta: float = Field(gt=0, lt=0.5, description="per-read flip probability")
    eps: float = Field(gt=0, lt=1, description="target per-site decoding error")
    beta: float | None = Field(default=None, gt=0, lt=1, description="target per-bit leakage")
    m: int | None = Field(default=None, ge=1, description="pool size; defaults to the privacy minimum")
    sigma_alpha: float = Field(default=0.0, ge=0, description="depth standard deviation at base level")
    diploid: bool = Field(default=False, description="double the pool size (two chromosome copies each)")

    @model_validator(mode="after")
    def _need_m_or_beta(self) -> "BoundsRequest":
        if self.m is None and self.beta is None:
            raise ValueError("supply m, beta, or both")
        return self


class BoundsResponse(BaseModel):
    eta: float
    eps: float
    beta: float | None
    sigma_alpha: float
    m_user: int | None
    m_effective: int
    m_min: int | None
    alpha0_min_constant: int | float
    e1: float
    e2: float
    alpha0_min_random: int | float
    overflow: bool
    version: str = __version__


class SimulateRequest(BaseModel):
    """One seeded end-to-end run: sample cohorts, pool, decode, score."""

    m: int = Field(ge=1)
    alpha0: int | Literal["auto"] = Field(default="auto", description="base depth, or 'auto' to size from eps")
    eta: float = Field(gt=0, lt=0.5)
    eps: float = Field(default=0.1, gt=0, lt=1)
    snps: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0)
    depth: Literal["constant", "random"] = "constant"
    sigma_alpha: float = Field(default=0.0, ge=0)
    freq: float | list[float] | None = Field(
        default=None, description="prior(s) for the common allele; default 0.5 everywhere"
    )
    diploid: bool = False
    workers: int = Field(default=1, ge=1)
    include_rows: bool = Field(default=True, description="include per-site decisions in the response")

    @model_validator(mode="after")
    def _alpha_positive(self) -> "SimulateRequest":
        if isinstance(self.alpha0, int) and self.alpha0 < 1:
            raise ValueError("alpha0 must be a positive integer or 'auto'")
        return self


class ResolvedRunConfig(BaseModel):
    """The exact configuration a run executed with."""

    m_user: int
    m_effective: int
    alpha0: int
    eta: float
    eps: float
    snps: int
    seed: int
    depth: Literal["constant", "random"]
    sigma_alpha: float
    freq: float | list[float]


class SnpDecision(BaseModel):
    n: int
    s_decoded: int
    error: int


class SimulateResponse(BaseModel):
    config: ResolvedRunConfig
    error_rate: float
    analytic_bound: float
    meets_eps: bool
    sigma2: float
    total_var: float
    rows: list[SnpDecision] | None = None
    version: str = __version__


class LeakageRequest(BaseModel):
    m_max: int = Field(ge=1, le=20)
    freq: float | list[float] = Field(default=0.5, description="per-level prior(s) for the unknown bits")


class LeakageEntry(BaseModel):
    m: int
    i_bits: float
    per_bit: float


class LeakageResponse(BaseModel):
    m_max: int
    freq: float | list[float]
    entries: list[LeakageEntry]
    bound_ok: bool
    monotone_ok: bool
    version: str = __version__


class SweepRequest(BaseModel):
    """Cartesian grid over operating points, bounds-only or with Monte Carlo."""

    m: list[int] = Field(min_length=1)
    eta: list[float] = Field(min_length=1)
    eps: list[float] = Field(min_length=1)
    sigma_alpha: list[float] = Field(default=[0.0], min_length=1)
    mc_trials: int = Field(default=0, ge=0, description="simulated sites per cell; 0 skips simulation")
    seed: int = Field(default=0, ge=0)
    diploid: bool = False

    @model_validator(mode="after")
    def _validate_grid(self) -> "SweepRequest":
        cells = len(self.m) * len(self.eta) * len(self.eps) * len(self.sigma_alpha)
        if cells > GRID_CELL_CAP:
            raise ValueError(f"grid has {cells} cells, cap is {GRID_CELL_CAP}")
        if any(v < 1 for v in self.m):
            raise ValueError("every m must be >= 1")
        if any(not 0 < v < 0.5 for v in self.eta):
            raise ValueError("every eta must lie in (0, 0.5)")
        if any(not 0 < v < 1 for v in self.eps):
            raise ValueError("every eps must lie in (0, 1)")
        if any(v < 0 for v in self.sigma_alpha):
            raise ValueError("every sigma_alpha must be >= 0")
        return self


class SweepCell(BaseModel):
    m: int
    eta: float
    eps: float
    sigma_alpha: float
    alpha0_min_constant: int | float
    e1: float
    e2: float
    alpha0_min_random: int | float
    overflow: bool
    policy: Literal["constant", "random"]
    alpha0_used: int | float
    predicted_bound: float
    mc_trials: int
    mc_error: float | None = None


class SweepResponse(BaseModel):
    cells: list[SweepCell]
    seed: int
    diploid: bool
    version: str = __version__
