"""Pooled sequencing simulation.

Individual ``m`` of either cohort contributes ``2^m * alpha0`` reads per site
(in expectation, under the random-depth policy), every read passes through a
symmetric bit-flip channel with error probability ``eta``, and the pool is
unlabeled: the only observable output per site is the total read count and the
number of reads showing allele 1.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from .model import GenotypeMatrix

__all__ = [
    "SchemeParams",
    "PooledCounts",
    "draw_depth",
    "read_channel",
    "sequence_pool",
    "expected_ones",
    "counts_csv",
]

# Total reads per site must stay well inside int64 for the count tallies.
_MAX_TOTAL_DEPTH = 2**62


@dataclass(frozen=True)
class SchemeParams:
    """Pooling scheme configuration.

    ``m`` unknown individuals are pooled with ``m`` known decoys; member ``i``
    of each cohort gets base depth ``2^i * alpha0``. Under the ``random``
    policy the depth of member ``i`` is drawn around that base with variance
    ``2^i * sigma_alpha**2`` (normal by default, moment-matched binomial when
    ``binomial_depths`` is set).
    """

    m: int
    alpha0: int
    eta: float
    depth: str = "constant"
    sigma_alpha: float = 0.0
    binomial_depths: bool = False

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if int(self.alpha0) != self.alpha0 or self.alpha0 < 1:
            raise ValueError("alpha0 must be a positive integer")
        # eta = 0 is rejected on purpose: the channel is assumed noisy, and an
        # effectively noiseless run should use a tiny positive eta instead.
        if not 0.0 < self.eta < 0.5:
            raise ValueError("eta must lie in (0, 0.5)")
        if self.depth not in ("constant", "random"):
            raise ValueError("depth policy must be 'constant' or 'random'")
        if self.sigma_alpha < 0:
            raise ValueError("sigma_alpha must be >= 0")
        if self.binomial_depths and self.sigma_alpha**2 >= self.alpha0:
            raise ValueError(
                "binomial depth matching requires sigma_alpha**2 < alpha0"
            )
        if self.total_depth > _MAX_TOTAL_DEPTH:
            raise ValueError("total depth budget exceeds the supported count range")

    @property
    def levels(self) -> np.ndarray:
        """Per-member depth multipliers ``[1, 2, ..., 2^(m-1)]``."""
        return 2 ** np.arange(self.m, dtype=np.int64)

    @property
    def ladder(self) -> np.ndarray:
        """Depth multipliers for the stacked pool: unknown cohort then decoys."""
        return np.concatenate([self.levels, self.levels])

    @property
    def total_depth(self) -> int:
        """Total reads per site under constant depths: ``(2^(m+1) - 2) * alpha0``."""
        return (2 ** (self.m + 1) - 2) * self.alpha0


@dataclass(frozen=True)
class PooledCounts:
    """Unlabeled per-site read tallies, the only thing the pool reveals.

    ``depths`` retains the realized per-member depths under the random policy
    for diagnostics; decoding must never look at them.
    """

    totals: np.ndarray
    ones: np.ndarray
    depths: np.ndarray | None = None

    def __post_init__(self) -> None:
        totals = np.asarray(self.totals, dtype=np.int64)
        ones = np.asarray(self.ones, dtype=np.int64)
        if totals.ndim != 1 or totals.shape != ones.shape:
            raise ValueError("totals and ones must be 1-D arrays of equal length")
        if np.any(ones < 0) or np.any(ones > totals):
            raise ValueError("ones counts must satisfy 0 <= ones <= totals")
        object.__setattr__(self, "totals", totals)
        object.__setattr__(self, "ones", ones)

    @property
    def num_snps(self) -> int:
        return self.totals.shape[0]


def _ladder_depths(params: SchemeParams, multipliers: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Realize depths for the given multipliers (one draw per entry)."""
    base = multipliers * params.alpha0
    if params.depth == "constant":
        return base
    if params.binomial_depths:
        # Match mean 2^i*alpha0 and variance 2^i*sigma_alpha^2 per member:
        # success probability is level-independent, trial count is rounded.
        p = 1.0 - params.sigma_alpha**2 / params.alpha0
        trials = np.rint(base / p).astype(np.int64)
        return rng.binomial(trials, base / trials)
    sd = params.sigma_alpha * np.sqrt(multipliers.astype(float))
    drawn = np.rint(rng.normal(base.astype(float), sd)).astype(np.int64)
    return np.maximum(drawn, 0)


def draw_depth(params: SchemeParams, level: int, rng: np.random.Generator) -> int:
    """Realize the read depth for cohort member ``level`` at one site."""
    if not 0 <= level < params.m:
        raise ValueError(f"level must lie in [0, {params.m - 1}]")
    mult = np.array([2**level], dtype=np.int64)
    return int(_ladder_depths(params, mult, rng)[0])


def read_channel(true_bit, eta: float, rng: np.random.Generator):
    """Pass a bit (or array of bits) through the symmetric flip channel."""
    if not 0.0 < eta < 0.5:
        raise ValueError("eta must lie in (0, 0.5)")
    bits = np.asarray(true_bit)
    flips = rng.random(bits.shape) < eta
    out = np.where(flips, 1 - bits, bits)
    return int(out) if bits.ndim == 0 else out.astype(np.uint8)


def _column_ones(
    params: SchemeParams,
    p_one: np.ndarray,
    rng: np.random.Generator,
    per_read: bool,
) -> tuple[int, int, np.ndarray]:
    """Simulate one site: realize depths, then count reads showing allele 1."""
    depths = _ladder_depths(params, params.ladder, rng)
    if per_read:
        ones = sum(
            int((rng.random(int(d)) < p).sum()) for d, p in zip(depths, p_one)
        )
    else:
        # One binomial per pool member is distributionally identical to
        # simulating the member's reads individually.
        ones = int(rng.binomial(depths, p_one).sum())
    return int(depths.sum()), ones, depths


def sequence_pool(
    X: GenotypeMatrix,
    Y: GenotypeMatrix,
    params: SchemeParams,
    seed: int | np.random.SeedSequence,
    workers: int = 1,
    per_read: bool = False,
) -> PooledCounts:
    """Run the pooled pipeline and return the unlabeled per-site tallies.

    Each site uses its own random sub-stream spawned from the master seed, so
    the result is bit-identical for any ``workers`` count. ``per_read`` forces
    read-by-read simulation (slow; intended for validating the count-level
    fast path on small runs).
    """
    if X.rows != params.m or Y.rows != params.m:
        raise ValueError(
            f"cohorts must each have {params.m} rows, got {X.rows} and {Y.rows}"
        )
    if X.cols != Y.cols:
        raise ValueError("cohorts must cover the same sites")
    num_snps = X.cols
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(num_snps)

    stacked = np.vstack([X.bits, Y.bits])
    p_one = np.where(stacked == 1, 1.0 - params.eta, params.eta)

    totals = np.empty(num_snps, dtype=np.int64)
    ones = np.empty(num_snps, dtype=np.int64)
    keep_depths = params.depth == "random"
    depths = np.empty((2 * params.m, num_snps), dtype=np.int64) if keep_depths else None

    def run_column(n: int) -> None:
        rng = np.random.default_rng(children[n])
        totals[n], ones[n], column_depths = _column_ones(params, p_one[:, n], rng, per_read)
        if keep_depths:
            depths[:, n] = column_depths

    if workers <= 1:
        for n in range(num_snps):
            run_column(n)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_column, range(num_snps)))

    return PooledCounts(totals=totals, ones=ones, depths=depths)


def expected_ones(X: GenotypeMatrix, Y: GenotypeMatrix, params: SchemeParams) -> np.ndarray:
    """Exact per-site expectation of the allele-1 tally.

    ``E[c_n] = sum_i depth_i * ((1 - 2*eta) * bit_i + eta)`` over all pool
    members, with mean depths; valid for both depth policies.
    """
    if X.rows != params.m or Y.rows != params.m or X.cols != Y.cols:
        raise ValueError("cohort dimensions must match the scheme")
    stacked = np.vstack([X.bits, Y.bits]).astype(float)
    mean_depth = (params.ladder * params.alpha0).astype(float)
    return mean_depth @ ((1.0 - 2.0 * params.eta) * stacked + params.eta)


def counts_csv(counts: PooledCounts) -> str:
    """Render tallies as diagnostic CSV with columns ``n,t,c``."""
    lines = ["n,t,c"]
    lines.extend(
        f"{n},{t},{c}" for n, (t, c) in enumerate(zip(counts.totals, counts.ones))
    )
    return "\n".join(lines) + "\n"
