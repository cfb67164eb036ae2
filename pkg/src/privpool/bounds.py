"""Closed-form sizing rules for the pooling scheme.

Three sufficient conditions tie the design knobs together:

* privacy: pooling ``m >= 1/beta`` unknowns caps the per-bit leakage at beta;
* reconstruction, constant depths: the decoder's error stays below epsilon
  once ``alpha0 >= (2^(m+1) - 2) * 8*eta*(1-eta)/(1-2*eta)^2 * ln(1/eps)``;
* reconstruction, random depths: both the read-noise term ``e1`` (twice the
  constant-depth requirement) and the depth-noise term ``e2`` must be covered,
  ``alpha0 >= max(e1, e2)``.

All rules come from the Chernoff envelope ``exp(-1 / (8 * total_var))`` of the
Gaussian decoding error, so they are sufficient, not tight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .collector import NoiseModel
from .pool import SchemeParams

__all__ = [
    "BoundsReport",
    "min_M",
    "min_alpha0_constant",
    "min_alpha0_random",
    "random_depth_requirements",
    "predict_error_bound",
    "q_function",
    "bounds_report",
]

# Values above this are reported as floats with an overflow flag instead of
# exact integers (their float precision is far coarser than 1 anyway).
_INT_REPORT_MAX = 2**63

_CEIL_SLACK = 1e-9


def q_function(x: float) -> float:
    """Gaussian tail probability ``P(N(0,1) > x)``."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _check_eta_eps(eta: float, epsilon: float) -> None:
    if not 0.0 < eta < 0.5:
        raise ValueError("eta must lie in (0, 0.5)")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")


def _ceil_report(value: float) -> int | float:
    """Ceiling with float-noise slack; huge values stay floats."""
    if value > _INT_REPORT_MAX:
        return float(value)
    return max(1, math.ceil(value - _CEIL_SLACK))


def min_M(beta: float) -> int:
    """Smallest pool size meeting privacy level ``beta``: ``ceil(1/beta)``."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    return max(1, math.ceil(1.0 / beta - _CEIL_SLACK))


def min_alpha0_constant(m: int, eta: float, epsilon: float) -> int | float:
    """Smallest base depth meeting accuracy ``epsilon`` under constant depths."""
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_eta_eps(eta, epsilon)
    coeff = 8.0 * eta * (1.0 - eta) / (1.0 - 2.0 * eta) ** 2 * math.log(1.0 / epsilon)
    # Log-space guard: the depth span 2^(m+1) - 2 outgrows floats near m ~ 1020.
    log2_value = math.log2(coeff) + _log2_span(m)
    if log2_value > 1023:
        return math.inf
    if m > 900:
        return _ceil_report(2.0**log2_value)
    return _ceil_report(coeff * (2 ** (m + 1) - 2))


def _log2_span(m: int) -> float:
    return (m + 1) + math.log2(1.0 - 2.0 ** (-(m + 1)) * 2.0)


def random_depth_requirements(m: int, eta: float, epsilon: float, sigma_alpha: float) -> tuple[float, float]:
    """The two random-depth requirements: read-noise ``e1`` and depth-noise ``e2``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_eta_eps(eta, epsilon)
    if sigma_alpha < 0:
        raise ValueError("sigma_alpha must be >= 0")
    if m > 1020:
        return math.inf, math.inf if sigma_alpha > 0 else 0.0
    span = float(2 ** (m + 1) - 2)
    log_target = math.log(1.0 / epsilon)
    e1 = 16.0 * eta * (1.0 - eta) / (1.0 - 2.0 * eta) ** 2 * span * log_target
    e2 = math.sqrt(
        16.0 * sigma_alpha**2 * (1.0 + eta**2 / (1.0 - 2.0 * eta) ** 2) * span * log_target
    )
    return e1, e2


def min_alpha0_random(m: int, eta: float, epsilon: float, sigma_alpha: float) -> int | float:
    """Smallest base depth meeting accuracy ``epsilon`` under random depths."""
    e1, e2 = random_depth_requirements(m, eta, epsilon, sigma_alpha)
    return _ceil_report(max(e1, e2))


def predict_error_bound(params: SchemeParams | None, noise: NoiseModel) -> float:
    """Analytic per-site decoding-error ceiling ``min(1, exp(-1/(8*total_var)))``.

    The variance budget fully determines the bound; ``params`` is accepted for
    interface symmetry with the simulation entry points.
    """
    if noise.total_var <= 0.0:
        return 0.0
    return min(1.0, math.exp(-1.0 / (8.0 * noise.total_var)))


@dataclass(frozen=True)
class BoundsReport:
    """Sizing summary for one operating point."""

    eta: float
    epsilon: float
    beta: float | None
    sigma_alpha: float
    m: int
    m_min: int | None
    alpha0_min_constant: int | float
    e1: float
    e2: float
    alpha0_min_random: int | float
    overflow: bool


def bounds_report(
    eta: float,
    epsilon: float,
    beta: float | None = None,
    m: int | None = None,
    sigma_alpha: float = 0.0,
) -> BoundsReport:
    """Evaluate every sizing rule at one operating point.

    ``m`` defaults to the privacy-driven minimum when only ``beta`` is given.
    """
    m_min = min_M(beta) if beta is not None else None
    if m is None:
        if m_min is None:
            raise ValueError("either m or beta must be supplied")
        m = m_min
    alpha_const = min_alpha0_constant(m, eta, epsilon)
    e1, e2 = random_depth_requirements(m, eta, epsilon, sigma_alpha)
    alpha_rand = min_alpha0_random(m, eta, epsilon, sigma_alpha)
    overflow = not (isinstance(alpha_const, int) and isinstance(alpha_rand, int))
    return BoundsReport(
        eta=eta,
        epsilon=epsilon,
        beta=beta,
        sigma_alpha=sigma_alpha,
        m=m,
        m_min=m_min,
        alpha0_min_constant=alpha_const,
        e1=e1,
        e2=e2,
        alpha0_min_random=alpha_rand,
        overflow=overflow,
    )
