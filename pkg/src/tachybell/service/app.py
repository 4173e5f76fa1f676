"""FastAPI service wrapping the bound calculator, simulator, and analyzer."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..analysis import analyze_tables, inequality_verdict, series_to_csv, window_scan
from ..bounds import (
    acquisition_condition,
    crossover_beta,
    curve_to_csv,
    drift_exceeds_budget,
    drift_length,
    sweep_bound_curve,
)
from ..errors import ConfigError, DomainError, TachybellError
from ..presets import (
    get_bound_preset,
    get_drift_preset,
    get_sim_preset,
    preset_names,
    preset_run_config,
)
from ..simulation import result_to_csv, run_simulation, tables_from_csv
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    BoundsRequest,
    BoundsResponse,
    DriftRequest,
    DriftResponse,
    EstimateOut,
    SimulateRequest,
    SimulateResponse,
    SimulateRow,
    WindowOut,
    encode_nonfinite,
)


def _beta_grid_values(grid) -> list[float]:
    if grid.values is not None:
        return [float(b) for b in grid.values]
    if grid.lo is None or grid.hi is None or grid.n is None:
        raise ConfigError("beta_grid needs either explicit values or lo/hi/n")
    if grid.n < 1:
        raise ConfigError("beta_grid n must be >= 1")
    if grid.n == 1:
        return [float(grid.lo)]
    if grid.spacing == "log":
        if grid.lo <= 0:
            raise ConfigError("log-spaced beta grid requires lo > 0")
        return list(np.geomspace(grid.lo, grid.hi, grid.n))
    return list(np.linspace(grid.lo, grid.hi, grid.n))


def create_app() -> FastAPI:
    app = FastAPI(title="tachybell", version=__version__)

    @app.exception_handler(TachybellError)
    async def tachybell_error_handler(request: Request, exc: TachybellError):
        category = "domain" if isinstance(exc, DomainError) else "config"
        return JSONResponse(
            status_code=422,
            content={"detail": str(exc), "category": category},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/presets")
    def presets():
        return preset_names()

    @app.get("/presets/{name}")
    def preset_detail(name: str):
        cfg = preset_run_config(name)
        doc = cfg.model_dump(exclude_none=True)
        if "simulation" in doc:
            doc["simulation"]["beta_t"] = encode_nonfinite(doc["simulation"]["beta_t"])
        return doc

    @app.post("/bounds", response_model=BoundsResponse)
    def bounds(req: BoundsRequest) -> BoundsResponse:
        if (req.preset is None) == (req.inputs is None):
            raise ConfigError("specify exactly one of preset or inputs")
        section = get_bound_preset(req.preset) if req.preset else req.inputs
        betas = _beta_grid_values(req.beta_grid)
        if not betas:
            raise ConfigError("beta grid is empty")
        base = section.to_inputs()
        curve = sweep_bound_curve(base, betas, label=section.label)
        ratio, satisfied = acquisition_condition(base)
        return BoundsResponse(
            label=curve.label,
            rho_bar=curve.rho_bar,
            delta_t_acq=curve.delta_t_acq,
            sidereal_period=curve.sidereal_period,
            chi=curve.chi,
            points=[[b, v] for b, v in curve.points],
            crossover_beta=crossover_beta(base),
            acquisition_ratio=ratio,
            acquisition_satisfied=satisfied,
            csv=curve_to_csv(curve),
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        if (req.preset is None) == (req.config is None):
            raise ConfigError("specify exactly one of preset or config")
        section = get_sim_preset(req.preset) if req.preset else req.config
        config = section.to_config(seed=req.seed)
        result = run_simulation(config)
        rows = [
            SimulateRow(bin_center_s=t.bin_center, combo=label, count=t.counts[label])
            for t in result.tables
            for label in t.counts
        ]
        metadata = {
            "seed": config.seed,
            "n_bins": len(result.tables),
            "bin_width_s": config.bin_width,
            "duration_s": config.duration,
            "dropped_seconds": result.dropped_seconds,
            "pairs_drawn": result.pairs_drawn,
            "geometry": {
                "d_ab_m": config.geometry.d_ab,
                "delta_d_m": config.geometry.delta_d,
                "delta_t_acq_s": config.geometry.delta_t_acq,
                "gamma_align_rad": config.geometry.gamma_align,
                "sidereal_period_s": config.geometry.sidereal_period,
            },
            "preferred_frame": {
                "beta": config.pf.beta,
                "chi_rad": config.pf.chi,
                "t0_s": config.pf.t0,
            },
            "tachyon": {
                "beta_t": encode_nonfinite(config.tachyon.beta_t),
                "fallback": config.tachyon.fallback.value,
            },
            "state_phi_rad": config.state.phi,
            "settings_rad": {
                "a": config.settings.a,
                "a_prime": config.settings.a_prime,
                "b": config.settings.b,
                "b_prime": config.settings.b_prime,
            },
            "pairs_per_second": config.pairs_per_second,
            "path_mismatch_m": config.path_mismatch,
        }
        return SimulateResponse(rows=rows, metadata=metadata, csv=result_to_csv(result))

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        tables = tables_from_csv(req.csv)
        series = analyze_tables(tables)
        if not series:
            raise ConfigError("no bins found in input")
        period = tables[-1].bin_center - tables[0].bin_center
        scan = window_scan(series, T=period, n_sigma=req.n_sigma)
        estimates = [
            EstimateOut(
                bin_center_s=e.bin_center,
                m=e.m,
                sigma_m=e.sigma_m,
                n_norm=e.n_norm,
                verdict=inequality_verdict(e, req.n_sigma).value,
            )
            for e in series
        ]
        windows = [
            WindowOut(center=w.center, start=w.start, end=w.end, n_bins=w.n_bins)
            for w in scan.windows
        ]
        return AnalyzeResponse(
            estimates=estimates,
            windows=windows,
            anomaly_times=list(scan.anomaly_times),
            csv=series_to_csv(series, n_sigma=req.n_sigma),
        )

    @app.post("/drift", response_model=DriftResponse)
    def drift(req: DriftRequest) -> DriftResponse:
        if (req.preset is None) == (req.config is None):
            raise ConfigError("specify exactly one of preset or config")
        section = get_drift_preset(req.preset) if req.preset else req.config
        budget = section.to_budget()
        length = drift_length(budget)
        exceeds = None
        if section.delta_d is not None:
            exceeds = drift_exceeds_budget(budget, section.delta_d)
        report = f"optical-path drift {length * 1e3:.3g} mm"
        if exceeds is None:
            report += " (no equalization budget given)"
        elif exceeds:
            report += (
                f", exceeds {section.delta_d * 1e6:.3g} um budget: feedback required"
            )
        else:
            report += f", within {section.delta_d * 1e6:.3g} um budget"
        return DriftResponse(
            drift_length_m=length,
            delta_d_m=section.delta_d,
            exceeds_budget=exceeds,
            report=report,
        )

    return app
