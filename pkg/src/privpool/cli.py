"""Command-line client for the toolkit.

Each subcommand builds the same request model the HTTP service accepts and,
by default, executes it in-process; pass ``--server URL`` to send it to a
running service instead. Artifacts are written exactly as rendered by
:mod:`privpool.experiment`, so reruns with the same configuration and seed
are byte-identical regardless of worker count or transport.
"""

from __future__ import annotations

from pathlib import Path

import click
import httpx
from pydantic import ValidationError

from . import __version__, experiment, schemas
from .model import load_frequency_file

_ENDPOINTS = {
    "/bounds": (experiment.run_bounds, schemas.BoundsResponse),
    "/simulate": (experiment.run_simulate, schemas.SimulateResponse),
    "/leakage": (experiment.run_leakage, schemas.LeakageResponse),
    "/sweep": (experiment.run_sweep, schemas.SweepResponse),
}


def _client(server: str) -> httpx.Client:
    return httpx.Client(base_url=server, timeout=600.0)


def _dispatch(server: str | None, path: str, request):
    runner, response_cls = _ENDPOINTS[path]
    if server is None:
        try:
            return runner(request)
        except ValueError as exc:
            raise click.ClickException(str(exc)) from None
    with _client(server) as client:
        reply = client.post(path, json=request.model_dump(mode="json"))
        if reply.status_code >= 400:
            raise click.ClickException(f"server rejected request: {reply.text}")
        return response_cls.model_validate(reply.json())


def _build(model_cls, **kwargs):
    try:
        return model_cls(**kwargs)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first["loc"]) or "request"
        raise click.UsageError(f"{loc}: {first['msg']}")


def _write(path: str, content: str) -> None:
    Path(path).write_bytes(content.encode("utf-8"))
    click.echo(f"wrote {path}", err=True)


def _float_list(_ctx, _param, value: str) -> list[float]:
    return [float(tok) for tok in value.split(",") if tok.strip()]


def _int_list(_ctx, _param, value: str) -> list[int]:
    return [int(tok) for tok in value.split(",") if tok.strip()]


def _alpha0_value(_ctx, _param, value: str):
    if value == "auto":
        return "auto"
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter("must be a positive integer or 'auto'")


_server_option = click.option("--server", default=None, help="base URL of a running service; default runs in-process")
_out_option = click.option("--out", default=None, type=click.Path(dir_okay=False), help="artifact output path")


@click.group()
@click.version_option(__version__, prog_name="privpool")
def main() -> None:
    """Privacy-preserving pooled sequencing: sizing, leakage, and simulation."""


@main.command()
@click.option("--eta", type=float, required=True, help="per-read flip probability, in (0, 0.5)")
@click.option("--eps", type=float, required=True, help="target per-site decoding error, in (0, 1)")
@click.option("--beta", type=float, default=None, help="target per-bit leakage, in (0, 1)")
@click.option("--m", type=int, default=None, help="pool size; defaults to the privacy minimum ceil(1/beta)")
@click.option("--sigma-alpha", type=float, default=0.0, help="depth standard deviation at base level")
@click.option("--diploid", is_flag=True, help="double the pool size (two chromosome copies per individual)")
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json", show_default=True)
@_out_option
@_server_option
def bounds(eta, eps, beta, m, sigma_alpha, diploid, fmt, out, server) -> None:
    """Evaluate the sizing rules at one operating point."""
    req = _build(
        schemas.BoundsRequest, eta=eta, eps=eps, beta=beta, m=m, sigma_alpha=sigma_alpha, diploid=diploid
    )
    resp = _dispatch(server, "/bounds", req)
    click.echo(f"eta={resp.eta!r}  eps={resp.eps!r}  beta={resp.beta!r}  sigma_alpha={resp.sigma_alpha!r}")
    click.echo(f"pool size: user={resp.m_user}  privacy_min={resp.m_min}  effective={resp.m_effective}")
    click.echo(f"alpha0 (constant depths) >= {resp.alpha0_min_constant}")
    click.echo(f"alpha0 (random depths)   >= {resp.alpha0_min_random}  [e1={resp.e1:.6g}, e2={resp.e2:.6g}]")
    if resp.overflow:
        click.echo("note: values above 2^63 are floating point, not exact integers")
    if out:
        _write(out, experiment.stable_json(resp))


@main.command()
@click.option("--m", type=int, required=True, help="number of unknown individuals in the pool")
@click.option("--alpha0", default="auto", callback=_alpha0_value, help="base depth, or 'auto' to size from --eps")
@click.option("--eta", type=float, required=True)
@click.option("--eps", type=float, default=0.1, show_default=True)
@click.option("--snps", type=int, default=1000, show_default=True, help="number of variant sites")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--depth", type=click.Choice(["constant", "random"]), default="constant", show_default=True)
@click.option("--sigma-alpha", type=float, default=0.0)
@click.option("--freq-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="per-site priors, one probability per line")
@click.option("--diploid", is_flag=True)
@click.option("--workers", type=int, default=1, show_default=True, help="threads for the pooling stage")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True,
              help="artifact format for --out (csv: per-site decisions; json: full response)")
@_out_option
@_server_option
def simulate(m, alpha0, eta, eps, snps, seed, depth, sigma_alpha, freq_file, diploid, workers, fmt, out, server) -> None:
    """Run one seeded end-to-end experiment and report the error rate."""
    freq = None
    if freq_file is not None:
        try:
            freq = [float(v) for v in load_frequency_file(freq_file, snps).major_freq]
        except ValueError as exc:
            raise click.ClickException(str(exc)) from None
    req = _build(
        schemas.SimulateRequest,
        m=m,
        alpha0=alpha0,
        eta=eta,
        eps=eps,
        snps=snps,
        seed=seed,
        depth=depth,
        sigma_alpha=sigma_alpha,
        freq=freq,
        diploid=diploid,
        workers=workers,
        include_rows=True,
    )
    resp = _dispatch(server, "/simulate", req)
    summary = resp.model_copy(update={"rows": None})
    click.echo(experiment.stable_json(summary), nl=False)
    if out:
        _write(out, experiment.simulate_csv(resp) if fmt == "csv" else experiment.stable_json(resp))


@main.command()
@click.option("--m-max", type=int, required=True, help="largest pool size to evaluate (<= 20)")
@click.option("--freq-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="per-level priors for the unknown bits, one probability per line")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@_out_option
@_server_option
def leakage(m_max, freq_file, fmt, out, server) -> None:
    """Exact per-pool-size leakage curve toward the sequencing machine."""
    freq: float | list[float] = 0.5
    if freq_file is not None:
        try:
            freq = [float(v) for v in load_frequency_file(freq_file, m_max).major_freq]
        except ValueError as exc:
            raise click.ClickException(str(exc)) from None
    req = _build(schemas.LeakageRequest, m_max=m_max, freq=freq)
    resp = _dispatch(server, "/leakage", req)
    for entry in resp.entries:
        click.echo(f"m={entry.m}  i_bits={entry.i_bits!r}  per_bit={entry.per_bit!r}")
    click.echo(f"ceiling<=1bit: {'ok' if resp.bound_ok else 'VIOLATED'}  "
               f"monotone: {'ok' if resp.monotone_ok else 'VIOLATED'}")
    if out:
        _write(out, experiment.leakage_csv(resp) if fmt == "csv" else experiment.stable_json(resp))


@main.command()
@click.option("--m", required=True, callback=_int_list, help="comma-separated pool sizes")
@click.option("--eta", required=True, callback=_float_list, help="comma-separated flip probabilities")
@click.option("--eps", default="0.1", callback=_float_list, help="comma-separated error targets")
@click.option("--sigma-alpha", default="0", callback=_float_list, help="comma-separated depth deviations")
@click.option("--mc-trials", type=int, default=0, show_default=True,
              help="simulated sites per grid cell; 0 emits bounds-only rows")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--diploid", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@_out_option
@_server_option
def sweep(m, eta, eps, sigma_alpha, mc_trials, seed, diploid, fmt, out, server) -> None:
    """Evaluate the sizing rules over a parameter grid."""
    req = _build(
        schemas.SweepRequest,
        m=m,
        eta=eta,
        eps=eps,
        sigma_alpha=sigma_alpha,
        mc_trials=mc_trials,
        seed=seed,
        diploid=diploid,
    )
    resp = _dispatch(server, "/sweep", req)
    click.echo(f"{len(resp.cells)} grid cells evaluated")
    if out:
        _write(out, experiment.sweep_csv(resp) if fmt == "csv" else experiment.stable_json(resp))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("privpool.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
