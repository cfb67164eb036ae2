"""End-to-end runners behind the service endpoints, plus artifact rendering.

Runners accept the request models from :mod:`privpool.schemas` and return the
matching response models, so the HTTP layer and the CLI share one code path.
CSV artifacts start with ``#``-prefixed metadata lines (package version and
the resolved configuration as compact JSON) followed by a header row; columns
are comma-separated with ``.`` decimals and LF line endings, and floats use
shortest round-trip formatting, so identical configurations yield identical
bytes.
"""

from __future__ import annotations

import itertools
import json

import numpy as np

from . import __version__, schemas
from .bounds import bounds_report, predict_error_bound
from .collector import (
    DecodeResult,
    aggregate,
    decode_constant,
    decode_random,
    noise_model,
    noise_model_values,
)
from .leakage import leakage_curve
from .model import PopulationModel, build_population, sample_known, sample_unknown
from .pool import SchemeParams, sequence_pool

__all__ = [
    "run_bounds",
    "run_simulate",
    "run_leakage",
    "run_sweep",
    "simulate_csv",
    "leakage_csv",
    "sweep_csv",
    "stable_json",
]

# Per-cell Monte Carlo in sweeps is skipped above this read budget per site.
_SWEEP_MC_DEPTH_CAP = 10**8


def run_bounds(req: schemas.BoundsRequest) -> schemas.BoundsResponse:
    """Evaluate the sizing rules at one operating point."""
    report = bounds_report(
        eta=req.eta, epsilon=req.eps, beta=req.beta, m=req.m, sigma_alpha=req.sigma_alpha
    )
    m_effective = 2 * report.m if req.diploid else report.m
    if req.diploid:
        report = bounds_report(
            eta=req.eta, epsilon=req.eps, beta=req.beta, m=m_effective, sigma_alpha=req.sigma_alpha
        )
    for value in (report.alpha0_min_constant, report.alpha0_min_random):
        if not np.isfinite(value):
            raise ValueError("operating point overflows double precision; reduce m")
    return schemas.BoundsResponse(
        eta=req.eta,
        eps=req.eps,
        beta=req.beta,
        sigma_alpha=req.sigma_alpha,
        m_user=req.m,
        m_effective=m_effective,
        m_min=report.m_min,
        alpha0_min_constant=report.alpha0_min_constant,
        e1=report.e1,
        e2=report.e2,
        alpha0_min_random=report.alpha0_min_random,
        overflow=report.overflow,
        version=__version__,
    )


def _resolve_alpha0(req: schemas.SimulateRequest, m_effective: int, sigma_alpha: float) -> int:
    if req.alpha0 != "auto":
        return int(req.alpha0)
    report = bounds_report(eta=req.eta, epsilon=req.eps, m=m_effective, sigma_alpha=sigma_alpha)
    value = report.alpha0_min_random if req.depth == "random" else report.alpha0_min_constant
    if not isinstance(value, int):
        raise ValueError("auto-sized alpha0 is too large to simulate; supply it explicitly")
    return value


def _execute(
    pop: PopulationModel,
    params: SchemeParams,
    seed_seq: np.random.SeedSequence,
    workers: int,
) -> DecodeResult:
    """Sample cohorts, pool, and decode once; truth-scored."""
    ss_x, ss_y, ss_pool = seed_seq.spawn(3)
    X = sample_unknown(pop, params.m, np.random.default_rng(ss_x))
    Y = sample_known(pop.num_snps, params.m, np.random.default_rng(ss_y))
    counts = sequence_pool(X, Y, params, ss_pool, workers=workers)
    obs = aggregate(counts, Y, params)
    if params.depth == "random":
        return decode_random(obs, Y, params, x_true=X)
    return decode_constant(obs, x_true=X)


def run_simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    """One seeded end-to-end run, scored against the sampled ground truth."""
    m_effective = 2 * req.m if req.diploid else req.m
    sigma_alpha = req.sigma_alpha if req.depth == "random" else 0.0
    alpha0 = _resolve_alpha0(req, m_effective, sigma_alpha)
    params = SchemeParams(
        m=m_effective, alpha0=alpha0, eta=req.eta, depth=req.depth, sigma_alpha=sigma_alpha
    )
    freq = 0.5 if req.freq is None else req.freq
    pop = build_population(req.snps, freq)

    result = _execute(pop, params, np.random.SeedSequence(req.seed), req.workers)
    noise = noise_model(params)
    bound = predict_error_bound(params, noise)

    rows = None
    if req.include_rows:
        rows = [
            schemas.SnpDecision(n=n, s_decoded=int(s), error=int(err))
            for n, (s, err) in enumerate(zip(result.s_hat, result.column_errors))
        ]
    return schemas.SimulateResponse(
        config=schemas.ResolvedRunConfig(
            m_user=req.m,
            m_effective=m_effective,
            alpha0=alpha0,
            eta=req.eta,
            eps=req.eps,
            snps=req.snps,
            seed=req.seed,
            depth=req.depth,
            sigma_alpha=sigma_alpha,
            freq=freq,
        ),
        error_rate=result.error_rate,
        analytic_bound=bound,
        meets_eps=result.error_rate <= req.eps,
        sigma2=noise.sigma2,
        total_var=noise.total_var,
        rows=rows,
        version=__version__,
    )


def run_leakage(req: schemas.LeakageRequest) -> schemas.LeakageResponse:
    """Exact per-m leakage curve with ceiling and monotonicity flags."""
    report = leakage_curve(req.m_max, req.freq)
    return schemas.LeakageResponse(
        m_max=req.m_max,
        freq=req.freq,
        entries=[
            schemas.LeakageEntry(m=m, i_bits=i_bits, per_bit=per_bit)
            for m, i_bits, per_bit in report.entries
        ],
        bound_ok=report.bound_ok,
        monotone_ok=report.monotone_ok,
        version=__version__,
    )


def run_sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    """Evaluate the sizing rules over a grid, optionally with Monte Carlo.

    Each cell sizes ``alpha0`` for its policy (constant when ``sigma_alpha`` is
    zero, random otherwise) and reports the analytic error ceiling there; with
    ``mc_trials > 0`` the cell is also simulated at that operating point unless
    its read budget is impractically large.
    """
    grid = list(itertools.product(req.m, req.eta, req.eps, req.sigma_alpha))
    root = np.random.SeedSequence(req.seed)
    children = root.spawn(len(grid)) if req.mc_trials > 0 else [None] * len(grid)

    cells = []
    for (m, eta, eps, sigma_alpha), child in zip(grid, children):
        m_effective = 2 * m if req.diploid else m
        report = bounds_report(eta=eta, epsilon=eps, m=m_effective, sigma_alpha=sigma_alpha)
        policy = "random" if sigma_alpha > 0 else "constant"
        alpha0_used = report.alpha0_min_random if policy == "random" else report.alpha0_min_constant
        predicted = predict_error_bound(
            None, noise_model_values(m_effective, float(alpha0_used), eta, sigma_alpha, policy)
        )
        mc_error = None
        feasible = (
            req.mc_trials > 0
            and isinstance(alpha0_used, int)
            and (2 ** (m_effective + 1) - 2) * alpha0_used <= _SWEEP_MC_DEPTH_CAP
        )
        if feasible:
            params = SchemeParams(
                m=m_effective, alpha0=alpha0_used, eta=eta, depth=policy, sigma_alpha=sigma_alpha
            )
            pop = build_population(req.mc_trials, 0.5)
            mc_error = _execute(pop, params, child, workers=1).error_rate
        cells.append(
            schemas.SweepCell(
                m=m,
                eta=eta,
                eps=eps,
                sigma_alpha=sigma_alpha,
                alpha0_min_constant=report.alpha0_min_constant,
                e1=report.e1,
                e2=report.e2,
                alpha0_min_random=report.alpha0_min_random,
                overflow=report.overflow,
                policy=policy,
                alpha0_used=alpha0_used,
                predicted_bound=predicted,
                mc_trials=req.mc_trials if feasible else 0,
                mc_error=mc_error,
            )
        )
    return schemas.SweepResponse(cells=cells, seed=req.seed, diploid=req.diploid, version=__version__)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _meta_lines(config: dict) -> list[str]:
    return [
        f"# privpool {__version__}",
        "# config " + json.dumps(config, sort_keys=True, separators=(",", ":")),
    ]


def simulate_csv(resp: schemas.SimulateResponse) -> str:
    """Per-site decisions as CSV (``n,s_decoded,error``) with config metadata."""
    if resp.rows is None:
        raise ValueError("response carries no per-site rows; rerun with include_rows")
    lines = _meta_lines(resp.config.model_dump(mode="json"))
    lines.append("n,s_decoded,error")
    lines.extend(f"{r.n},{r.s_decoded},{r.error}" for r in resp.rows)
    return "\n".join(lines) + "\n"


def leakage_csv(resp: schemas.LeakageResponse) -> str:
    """Leakage curve as CSV (``m,i_bits,per_bit``) with config metadata."""
    lines = _meta_lines({"freq": resp.freq, "m_max": resp.m_max})
    lines.append("m,i_bits,per_bit")
    lines.extend(f"{e.m},{_fmt(e.i_bits)},{_fmt(e.per_bit)}" for e in resp.entries)
    return "\n".join(lines) + "\n"


_SWEEP_COLUMNS = [
    "m",
    "eta",
    "eps",
    "sigma_alpha",
    "alpha0_min_constant",
    "e1",
    "e2",
    "alpha0_min_random",
    "overflow",
    "policy",
    "alpha0_used",
    "predicted_bound",
    "mc_trials",
    "mc_error",
]


def sweep_csv(resp: schemas.SweepResponse) -> str:
    """Grid results as long-form CSV, one row per cell."""
    lines = _meta_lines({"diploid": resp.diploid, "seed": resp.seed})
    lines.append(",".join(_SWEEP_COLUMNS))
    for cell in resp.cells:
        values = cell.model_dump()
        lines.append(",".join(_fmt(values[col]) for col in _SWEEP_COLUMNS))
    return "\n".join(lines) + "\n"


def stable_json(model) -> str:
    """Serialize a response model as JSON with sorted keys."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
