"""The trusted collector: normalize tallies, strip decoys, decode genotypes.

Scaling the allele-1 tally by ``1 / (alpha0 * (1 - 2*eta))``, subtracting the
decoys' weighted contribution ``sum_k 2^k * y_k`` and the flip-bias offset
``(2^(m+1) - 2) * eta / (1 - 2*eta)`` leaves, per site, the integer
``s = sum_i 2^i * x_i`` plus approximately Gaussian noise. Decoding is
nearest-integer (equivalently, likelihood-maximizing over the 2^m candidate
genotype columns) followed by binary expansion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .model import GenotypeMatrix
from .pool import PooledCounts, SchemeParams

__all__ = [
    "Observation",
    "DecodeResult",
    "NoiseModel",
    "noise_model",
    "noise_model_values",
    "aggregate",
    "decode_constant",
    "decode_random",
    "column_error_rate",
    "decode_result_csv",
    "decode_result_summary",
]

# Exhaustive candidate search is capped; beyond this the rounding fast path
# (provably the same rule) is used.
_EXHAUSTIVE_MAX_M = 20
_EXHAUSTIVE_MAX_CELLS = 2 * 10**7


@dataclass(frozen=True)
class NoiseModel:
    """Variance budget of the normalized observation.

    ``sigma2`` is the read-noise variance, ``sigma1_2 = (sigma_alpha/alpha0)^2``
    the relative depth-noise variance (zero under constant depths), and
    ``total_var = (2^(m+1) - 2) * sigma1_2 + sigma2`` the decoder-facing total.
    """

    sigma2: float
    sigma1_2: float
    total_var: float

    def __post_init__(self) -> None:
        if self.sigma2 < 0 or self.sigma1_2 < 0 or self.total_var < 0:
            raise ValueError("variances must be >= 0")


def noise_model_values(m: int, alpha0: float, eta: float, sigma_alpha: float, depth: str) -> NoiseModel:
    """Noise budget from raw scheme values (``alpha0`` may be non-integral)."""
    span = 2 ** (m + 1) - 2
    sigma1_2 = (sigma_alpha / alpha0) ** 2 if depth == "random" else 0.0
    sigma2 = span / (1.0 - 2.0 * eta) ** 2 * (
        eta * (1.0 - eta) / alpha0 + eta**2 * sigma1_2
    )
    return NoiseModel(sigma2=sigma2, sigma1_2=sigma1_2, total_var=span * sigma1_2 + sigma2)


def noise_model(params: SchemeParams) -> NoiseModel:
    """Noise budget of the scheme; a zero ``sigma_alpha`` random policy collapses
    to the constant-policy model."""
    return noise_model_values(params.m, params.alpha0, params.eta, params.sigma_alpha, params.depth)


@dataclass(frozen=True)
class Observation:
    """Normalized, decoy-free observation per site."""

    g: np.ndarray
    params: SchemeParams

    def __post_init__(self) -> None:
        g = np.asarray(self.g, dtype=float)
        if g.ndim != 1:
            raise ValueError("observation must be a 1-D vector")
        if not np.isfinite(g).all():
            raise ValueError("observation values must be finite")
        object.__setattr__(self, "g", g)


@dataclass(frozen=True)
class DecodeResult:
    """Decoded genotypes plus per-site error flags when truth is available."""

    x_hat: GenotypeMatrix
    s_hat: np.ndarray
    column_errors: np.ndarray | None = None
    error_rate: float | None = None


def aggregate(counts: PooledCounts, Y: GenotypeMatrix, params: SchemeParams) -> Observation:
    """Turn tallies into the decoder's observation.

    Uses only the tallies and the known decoy genotypes; realized depths, even
    when recorded for diagnostics, are deliberately ignored.
    """
    if Y.rows != params.m:
        raise ValueError(f"decoy cohort must have {params.m} rows, got {Y.rows}")
    if Y.cols != counts.num_snps:
        raise ValueError("decoy cohort and tallies must cover the same sites")
    scale = params.alpha0 * (1.0 - 2.0 * params.eta)
    offset = (2 ** (params.m + 1) - 2) * params.eta / (1.0 - 2.0 * params.eta)
    known = params.levels.astype(float) @ Y.bits
    g = counts.ones / scale - known - offset
    return Observation(g=g, params=params)


def _round_codewords(g: np.ndarray, m: int) -> np.ndarray:
    """Nearest integer in [0, 2^m - 1]; halves round away from zero, then clamp."""
    s = np.where(g >= 0, np.floor(g + 0.5), np.ceil(g - 0.5))
    return np.clip(s, 0, 2**m - 1).astype(np.int64)


def _exhaustive_codewords(g: np.ndarray, m: int) -> np.ndarray:
    """Closest candidate integer by explicit search; ties resolve upward so the
    rule coincides with :func:`_round_codewords` everywhere."""
    candidates = np.arange(2**m, dtype=np.int64)
    out = np.empty(g.shape[0], dtype=np.int64)
    chunk = max(1, _EXHAUSTIVE_MAX_CELLS // candidates.shape[0])
    for start in range(0, g.shape[0], chunk):
        block = g[start : start + chunk]
        dist = np.abs(block[:, None] - candidates[None, :])
        out[start : start + chunk] = (
            candidates.shape[0] - 1 - np.argmin(dist[:, ::-1], axis=1)
        )
    return out


def _bits_of(s: np.ndarray, m: int) -> GenotypeMatrix:
    """Binary expansion, least significant bit first: bit ``i`` is row ``i``."""
    bits = (s[None, :] >> np.arange(m)[:, None]) & 1
    return GenotypeMatrix(bits.astype(np.uint8))


def _finish(s_hat: np.ndarray, m: int, x_true: GenotypeMatrix | None) -> DecodeResult:
    x_hat = _bits_of(s_hat, m)
    if x_true is None:
        return DecodeResult(x_hat=x_hat, s_hat=s_hat)
    errors = np.any(x_hat.bits != x_true.bits, axis=0)
    return DecodeResult(
        x_hat=x_hat,
        s_hat=s_hat,
        column_errors=errors,
        error_rate=float(errors.mean()),
    )


def decode_constant(obs: Observation, x_true: GenotypeMatrix | None = None) -> DecodeResult:
    """Decode under constant depths: clamp-round each observation and expand."""
    return _finish(_round_codewords(obs.g, obs.params.m), obs.params.m, x_true)


def decode_random(
    obs: Observation,
    Y: GenotypeMatrix,
    params: SchemeParams,
    x_true: GenotypeMatrix | None = None,
    method: str = "auto",
) -> DecodeResult:
    """Decode under random depths by minimizing the residual magnitude.

    The decoy contribution is already removed in ``obs``, so minimizing
    ``|g - s|`` over the 2^m candidates is exactly nearest-integer rounding;
    ``method`` selects the explicit search ("exhaustive"), the shortcut
    ("round"), or a size-based choice ("auto"). Both paths implement the same
    rule and are tested to agree.
    """
    if Y.rows != params.m or Y.cols != obs.g.shape[0]:
        raise ValueError("decoy cohort dimensions must match the observation")
    if method == "auto":
        small = (
            params.m <= _EXHAUSTIVE_MAX_M
            and obs.g.shape[0] * 2**params.m <= _EXHAUSTIVE_MAX_CELLS
        )
        method = "exhaustive" if small else "round"
    if method == "exhaustive":
        if params.m > _EXHAUSTIVE_MAX_M:
            raise ValueError(f"exhaustive search supports m <= {_EXHAUSTIVE_MAX_M}")
        s_hat = _exhaustive_codewords(obs.g, params.m)
    elif method == "round":
        s_hat = _round_codewords(obs.g, params.m)
    else:
        raise ValueError("method must be 'auto', 'exhaustive', or 'round'")
    return _finish(s_hat, params.m, x_true)


def column_error_rate(x_hat: GenotypeMatrix, x_true: GenotypeMatrix) -> float:
    """Fraction of sites whose decoded genotype column differs in any bit."""
    if x_hat.bits.shape != x_true.bits.shape:
        raise ValueError("matrices must have identical dimensions")
    return float(np.any(x_hat.bits != x_true.bits, axis=0).mean())


def decode_result_csv(result: DecodeResult) -> str:
    """Render per-site decisions as CSV with columns ``n,s_decoded,error``."""
    lines = ["n,s_decoded,error"]
    for n, s in enumerate(result.s_hat):
        flag = "" if result.column_errors is None else int(result.column_errors[n])
        lines.append(f"{n},{s},{flag}")
    return "\n".join(lines) + "\n"


def decode_result_summary(result: DecodeResult, params: SchemeParams, seed: int | None = None) -> str:
    """JSON summary with stable key order."""
    payload = {
        "error_rate": result.error_rate,
        "num_snps": int(result.s_hat.shape[0]),
        "params": {
            "alpha0": params.alpha0,
            "depth": params.depth,
            "eta": params.eta,
            "m": params.m,
            "sigma_alpha": params.sigma_alpha,
        },
        "seed": seed,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
