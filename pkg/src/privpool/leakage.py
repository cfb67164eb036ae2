"""Exact information leakage toward the sequencing machine.

Per site, everything the sequencer can learn is captured by the integer
``Z = sum_i 2^i * (X_i + Y_i)`` formed from unknown bits X and fair-coin decoy
bits Y; its mutual information with the unknown bits therefore upper-bounds
what any processing of the noisy reads can extract. Two independent routes
compute it:

* convolution of the per-level distributions of ``2^i * (X_i + Y_i)`` to get
  the exact distribution of Z, then ``I = H(Z) - m`` (the decoys contribute
  exactly m bits of conditional entropy);
* a carry-chain pass over the binary digits of Z, accumulating the joint
  distribution of (emitted low bits, pending carry) level by level, ending in
  the conditional entropy of the top carry bit given the lower digits.

Both are the same quantity; the toolkit requires them to agree to 1e-10. The
top carry bit is the only digit that can leak, so the leakage never exceeds
one bit per site regardless of m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "IntegerSumPmf",
    "LeakageReport",
    "integer_sum_pmf",
    "exact_leakage",
    "carry_bit_entropy",
    "leakage_curve",
    "leakage_csv",
]

MAX_PMF_M = 24
MAX_CARRY_M = 20
MAX_CURVE_M = 20

_PMF_SUM_TOL = 1e-12


def _entropy_bits(p: np.ndarray) -> float:
    """Shannon entropy in bits with the 0*log(0) = 0 convention."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def _level_freqs(m: int, freqs: float | list[float] | np.ndarray) -> np.ndarray:
    if m < 1:
        raise ValueError("m must be >= 1")
    if np.isscalar(freqs):
        vec = np.full(m, float(freqs))
    else:
        vec = np.asarray(freqs, dtype=float)
        if vec.shape != (m,):
            raise ValueError(f"expected {m} level priors, got shape {vec.shape}")
    if np.any(vec < 0.0) or np.any(vec > 1.0):
        raise ValueError("level priors must lie in [0, 1]")
    return vec


def _level_probs(f: float) -> tuple[float, float, float]:
    """P(X + Y = 0, 1, 2) for X ~ Bernoulli(f) and a fair-coin Y."""
    return (1.0 - f) / 2.0, 0.5, f / 2.0


@dataclass(frozen=True)
class IntegerSumPmf:
    """Exact distribution of the disclosed integer on ``{0, ..., 2^(m+1) - 2}``."""

    m: int
    pmf: np.ndarray

    def __post_init__(self) -> None:
        pmf = np.asarray(self.pmf, dtype=float)
        support = 2 ** (self.m + 1) - 1
        if pmf.shape != (support,):
            raise ValueError(f"pmf must have {support} entries, got {pmf.shape}")
        if np.any(pmf < -_PMF_SUM_TOL):
            raise ValueError("pmf entries must be >= 0")
        if abs(pmf.sum() - 1.0) > _PMF_SUM_TOL:
            raise ValueError("pmf must sum to 1")
        object.__setattr__(self, "pmf", pmf)


@dataclass(frozen=True)
class LeakageReport:
    """Per-m leakage with the one-bit ceiling and monotonicity flags."""

    entries: list[tuple[int, float, float]]
    bound_ok: bool
    monotone_ok: bool


def integer_sum_pmf(m: int, freqs: float | list[float] | np.ndarray = 0.5) -> IntegerSumPmf:
    """Exact pmf of ``sum_i 2^i * (X_i + Y_i)`` by sequential convolution.

    Level i contributes offsets {0, 2^i, 2^(i+1)}, so each step is three
    shifted adds; total cost is O(m * 2^m).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > MAX_PMF_M:
        raise ValueError(f"m > {MAX_PMF_M} unsupported: support has 2^(m+1)-1 values")
    f = _level_freqs(m, freqs)
    pmf = np.ones(1)
    for level in range(m):
        step = 1 << level
        p0, p1, p2 = _level_probs(f[level])
        grown = np.zeros(pmf.shape[0] + 2 * step)
        grown[: pmf.shape[0]] += p0 * pmf
        grown[step : step + pmf.shape[0]] += p1 * pmf
        grown[2 * step : 2 * step + pmf.shape[0]] += p2 * pmf
        pmf = grown
    return IntegerSumPmf(m=m, pmf=pmf)


def exact_leakage(m: int, freqs: float | list[float] | np.ndarray = 0.5) -> float:
    """Leakage in bits via the convolution route: ``H(Z) - m``.

    Subtracting m is exact because, given the unknown bits, Z is a shifted
    weighted sum of m independent fair coins with distinct binary weights.
    """
    dist = integer_sum_pmf(m, freqs)
    return max(0.0, _entropy_bits(dist.pmf) - m)


def carry_bit_entropy(m: int, freqs: float | list[float] | np.ndarray = 0.5) -> float:
    """Leakage in bits via the carry-chain route.

    Writing ``Z = (B b_{m-1} ... b_0)_2``, each level satisfies
    ``X_i + Y_i + carry_i = 2 * carry_{i+1} + b_i``. A forward pass tracks the
    joint distribution of (emitted digits, pending carry); the leakage is the
    conditional entropy of the final carry B given the emitted digits. Never
    touches the pmf of Z, which makes it an independent cross-check of
    :func:`exact_leakage`.
    """
    if m > MAX_CARRY_M:
        raise ValueError(f"carry-chain route supports m <= {MAX_CARRY_M}")
    f = _level_freqs(m, freqs)
    # joint[prefix, carry]: prefix packs digits b_0..b_{level-1}, bit j at 2^j
    joint = np.zeros((1, 2))
    joint[0, 0] = 1.0
    for level in range(m):
        probs = _level_probs(f[level])
        width = 1 << level
        grown = np.zeros((2 * width, 2))
        for carry in (0, 1):
            column = joint[:, carry]
            if not column.any():
                continue
            for total, q in ((s + carry, probs[s]) for s in range(3)):
                bit, nxt = total & 1, total >> 1
                grown[bit * width : (bit + 1) * width, nxt] += q * column
        joint = grown
    return max(0.0, _entropy_bits(joint.ravel()) - _entropy_bits(joint.sum(axis=1)))


def leakage_curve(
    m_max: int,
    freqs: float | list[float] | np.ndarray = 0.5,
    monotone_tol: float = 1e-12,
) -> LeakageReport:
    """Exact leakage for m = 1..m_max with the supplied (or uniform) priors.

    A scalar prior applies to every level; a vector must cover ``m_max``
    levels, of which each m uses the first m.
    """
    if not 1 <= m_max <= MAX_CURVE_M:
        raise ValueError(f"m_max must lie in [1, {MAX_CURVE_M}]")
    full = _level_freqs(m_max, freqs)
    entries = []
    for m in range(1, m_max + 1):
        bits = exact_leakage(m, full[:m])
        entries.append((m, bits, bits / m))
    values = [bits for _, bits, _ in entries]
    bound_ok = all(v <= 1.0 + monotone_tol for v in values)
    monotone_ok = all(b >= a - monotone_tol for a, b in zip(values, values[1:]))
    return LeakageReport(entries=entries, bound_ok=bound_ok, monotone_ok=monotone_ok)


def leakage_csv(report: LeakageReport) -> str:
    """Render the curve as CSV with columns ``m,i_bits,per_bit``."""
    lines = ["m,i_bits,per_bit"]
    lines.extend(f"{m},{bits!r},{per_bit!r}" for m, bits, per_bit in report.entries)
    return "\n".join(lines) + "\n"
