"""Command-line front end: a thin client over the HTTP service.

By default requests are dispatched to an in-process instance of the FastAPI
app (no server needed); ``--server URL`` points the same commands at a remote
instance started with ``tbl serve``.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical-domain
error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .config import load_run_config
from .errors import ConfigError
from .service.app import create_app
from .service.schemas import encode_nonfinite

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DOMAIN = 4


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # In-process dispatch to the ASGI app; same wire format as a remote server.
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    return TestClient(create_app())


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    try:
        response = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        _fail(EXIT_IO, f"request to {path} failed: {exc}")
    if response.status_code == 422:
        body = response.json()
        category = body.get("category", "config")
        code = EXIT_DOMAIN if category == "domain" else EXIT_CONFIG
        _fail(code, body.get("detail", response.text))
    if response.status_code != 200:
        _fail(EXIT_IO, f"{path} returned HTTP {response.status_code}: {response.text}")
    return response.json()


def _write_text(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {path}: {exc}")


def _load_config(path: str):
    try:
        return load_run_config(path)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read {path}: {exc}")
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))


def _parse_beta_grid(spec: str) -> dict:
    parts = spec.split(":")
    if len(parts) != 4:
        _fail(EXIT_CONFIG, f"beta grid must be lo:hi:n:log|lin, got {spec!r}")
    lo_s, hi_s, n_s, spacing = parts
    try:
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        _fail(EXIT_CONFIG, f"bad beta grid {spec!r}: {exc}")
    if spacing not in ("log", "lin"):
        _fail(EXIT_CONFIG, f"beta grid spacing must be log or lin, got {spacing!r}")
    if n < 1:
        _fail(EXIT_CONFIG, "beta grid must contain at least one point")
    return {"lo": lo, "hi": hi, "n": n, "spacing": spacing}


@click.group()
def main():
    """Tachyon-communication bounds and Bell-test coincidence simulations."""


_server_option = click.option("--server", default=None, help="Base URL of a running service; default is in-process.")
_out_option = click.option("--out", default=".", type=click.Path(file_okay=False), help="Output directory.")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config with a [bounds] section.")
@click.option("--preset", "presets", multiple=True, help="Bundled bound preset (repeatable), e.g. fig4-III.")
@click.option("--beta-grid", default="1e-9:0.999999999:200:log", show_default=True, help="Frame-speed grid lo:hi:n:log|lin.")
@_out_option
@_server_option
def bounds(config_path, presets, beta_grid, out, server):
    """Sweep the detectable tachyon-velocity lower bound; one CSV per curve."""
    grid = _parse_beta_grid(beta_grid)
    requests: list[dict] = [{"preset": name, "beta_grid": grid} for name in presets]
    if config_path:
        cfg = _load_config(config_path)
        if cfg.bounds is None:
            _fail(EXIT_CONFIG, f"{config_path} has no [bounds] section")
        requests.append({"inputs": cfg.bounds.model_dump(), "beta_grid": grid})
    if not requests:
        _fail(EXIT_CONFIG, "give at least one --preset or a --config with [bounds]")
    out_dir = Path(out)
    with _client(server) as client:
        for request in requests:
            body = _post(client, "/bounds", request)
            label = body["label"] or "bounds"
            _write_text(out_dir / f"{label}.csv", body["csv"])
            provenance = {k: v for k, v in body.items() if k not in ("csv", "points")}
            provenance["points"] = body["points"]
            _write_text(out_dir / f"{label}.json", json.dumps(provenance, indent=2) + "\n")
            click.echo(
                f"{label}: {len(body['points'])} points, "
                f"plateau {body['points'][0][1]:.6g}, crossover beta {body['crossover_beta']:.6g}"
            )


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config with a [simulation] section.")
@click.option("--preset", default=None, help="Bundled simulation preset, e.g. ego-subbound.")
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@_out_option
@_server_option
def simulate(config_path, preset, seed, out, server):
    """Run the seven-pass coincidence simulation; writes CSV plus metadata JSON."""
    if (config_path is None) == (preset is None):
        _fail(EXIT_CONFIG, "give exactly one of --config or --preset")
    request: dict = {"seed": seed}
    if preset:
        request["preset"] = preset
    else:
        cfg = _load_config(config_path)
        if cfg.simulation is None:
            _fail(EXIT_CONFIG, f"{config_path} has no [simulation] section")
        section = cfg.simulation.model_dump()
        section["beta_t"] = encode_nonfinite(section["beta_t"])
        request["config"] = section
    out_dir = Path(out)
    with _client(server) as client:
        body = _post(client, "/simulate", request)
    _write_text(out_dir / "coincidences.csv", body["csv"])
    _write_text(out_dir / "metadata.json", json.dumps(body["metadata"], indent=2) + "\n")
    meta = body["metadata"]
    click.echo(
        f"simulated {meta['n_bins']} bins x 7 passes, seed {meta['seed']}, "
        f"{sum(meta['pairs_drawn'].values())} pairs total"
    )


@main.command()
@click.argument("input_csv", type=click.Path())
@click.option("--n-sigma", default=3.0, show_default=True, help="Verdict confidence multiplier.")
@_out_option
@_server_option
def analyze(input_csv, n_sigma, out, server):
    """Compute the BCHSH M series from a coincidence CSV and scan for anomalies."""
    try:
        text = Path(input_csv).read_text()
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read {input_csv}: {exc}")
    with _client(server) as client:
        body = _post(client, "/analyze", {"csv": text, "n_sigma": n_sigma})
    _write_text(Path(out) / "m_series.csv", body["csv"])
    estimates = body["estimates"]
    counts: dict[str, int] = {}
    for e in estimates:
        counts[e["verdict"]] = counts.get(e["verdict"], 0) + 1
    click.echo(f"{len(estimates)} bins: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    if body["windows"]:
        for w in body["windows"]:
            click.echo(
                f"anomaly window: center {w['center']:.1f} s "
                f"({w['n_bins']} bins, {w['start']:.1f}..{w['end']:.1f} s)"
            )
    else:
        click.echo("no anomaly windows detected")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config with a [drift] section.")
@click.option("--preset", default=None, help="Bundled drift preset, e.g. ego-drift.")
@_server_option
def drift(config_path, preset, server):
    """Thermal optical-path drift against the equalization budget."""
    if (config_path is None) == (preset is None):
        _fail(EXIT_CONFIG, "give exactly one of --config or --preset")
    request: dict = {}
    if preset:
        request["preset"] = preset
    else:
        cfg = _load_config(config_path)
        if cfg.drift is None:
            _fail(EXIT_CONFIG, f"{config_path} has no [drift] section")
        request["config"] = cfg.drift.model_dump()
    with _client(server) as client:
        body = _post(client, "/drift", request)
    click.echo(body["report"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
