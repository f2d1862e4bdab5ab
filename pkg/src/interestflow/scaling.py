"""Growth scaling exponents from simulation sweeps.

A sweep runs replicate sessions over a ladder of community sizes N and
fits straight lines in log10-log10 space:

    activity   ~ N**alpha
    diversity  ~ N**beta
    edges      ~ N**gamma
    edges      ~ diversity**theta   (densification)

A response surface repeats the sweep over a (p, lambda) grid; the
inference module inverts observed exponents against it.
"""

import concurrent.futures
import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .engine import SimConfig, run_session
from .errors import FitError, ParameterError, SweepError
from .flownet import build_network, metrics
from .levy import DEFAULT_L_MAX, DEFAULT_L_MIN, StepLawParams
from .seeding import derive_seed

DEFAULT_N_LIST = [64, 128, 256, 512, 1024, 2048, 4096]
DEFAULT_REPLICATES = 5

# Grid defaults: midpoints of ten equal intervals over p in [0, 1] and
# lambda in [1, 3].  p = 1.0 is excluded by construction (sessions never
# terminate there).
DEFAULT_P_GRID = [round(0.05 + 0.1 * i, 2) for i in range(10)]
DEFAULT_LAMBDA_GRID = [round(1.1 + 0.2 * j, 1) for j in range(10)]

MIN_SWEEP_DECADES = 1.5


@dataclass(frozen=True)
class ScalingFit:
    """One log-log OLS fit: y ~ prefactor * x**exponent."""

    exponent: float
    prefactor: float
    r_squared: float
    stderr: float
    n_points: int


@dataclass(frozen=True)
class ExponentSet:
    alpha: ScalingFit
    beta: ScalingFit
    gamma: ScalingFit
    theta: ScalingFit


@dataclass(frozen=True)
class SweepPoint:
    """Raw outcome of one session inside a sweep."""

    p: float
    lam: float
    n_walkers: int
    replicate: int
    activity: int
    diversity: int
    edge_count: int
    t_end: int


def fit_power_law(points) -> ScalingFit:
    """OLS in log10-log10 space over (x, y) pairs, all strictly positive."""
    pts = list(points)
    if len(pts) < 3:
        raise FitError(f"power-law fit needs >= 3 points, got {len(pts)}")
    xs = np.array([x for x, _ in pts], dtype=float)
    ys = np.array([y for _, y in pts], dtype=float)
    if np.any(xs <= 0.0) or np.any(ys <= 0.0):
        raise FitError("power-law fit needs strictly positive coordinates")
    res = stats.linregress(np.log10(xs), np.log10(ys))
    return ScalingFit(
        exponent=float(res.slope),
        prefactor=float(10.0 ** res.intercept),
        r_squared=float(res.rvalue**2),
        stderr=float(res.stderr),
        n_points=len(pts),
    )


def _check_sweep_plan(n_list, replicates) -> list[int]:
    ns = sorted(set(int(n) for n in n_list))
    if len(ns) < 4:
        raise ParameterError(f"sweep needs >= 4 distinct N values, got {len(ns)}")
    decades = math.log10(ns[-1] / ns[0])
    if decades < MIN_SWEEP_DECADES:
        raise ParameterError(
            f"sweep N range spans {decades:.2f} decades, needs >= {MIN_SWEEP_DECADES}"
        )
    if replicates < 3:
        raise ParameterError(f"sweep needs >= 3 replicates, got {replicates}")
    return ns


def run_sweep(
    cfg: SimConfig, n_list=None, replicates: int = DEFAULT_REPLICATES, jobs: int = 1
) -> list[SweepPoint]:
    """Run the full replicate-by-size grid of sessions for one (p, lambda).

    ``cfg`` serves as the template; its ``rng_seed`` acts as the master
    seed from which each session derives its own stream keyed by
    (p, lambda, N, replicate), so any ``jobs`` value yields the same
    points in the same order.
    """
    ns = _check_sweep_plan(n_list or DEFAULT_N_LIST, replicates)
    tasks = [(cfg, n, rep) for n in ns for rep in range(replicates)]
    if jobs <= 1:
        return [_sweep_session(*task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_session_task, tasks, chunksize=1))


def _sweep_session_task(args) -> SweepPoint:
    return _sweep_session(*args)


def _sweep_session(cfg: SimConfig, n: int, rep: int) -> SweepPoint:
    lam = cfg.step_law.lam
    seed = derive_seed(cfg.rng_seed, cfg.p, lam, n, rep)
    session_cfg = SimConfig(
        n_walkers=n,
        p=cfg.p,
        step_law=cfg.step_law,
        seed_origin=cfg.seed_origin,
        origin_deposit_trial=cfg.origin_deposit_trial,
        max_ticks=cfg.max_ticks,
        rng_seed=seed,
    )
    result = run_session(session_cfg)
    m = metrics(build_network(result.trajectories), n)
    return SweepPoint(
        p=cfg.p,
        lam=lam,
        n_walkers=n,
        replicate=rep,
        activity=m.activity,
        diversity=m.diversity,
        edge_count=m.edge_count,
        t_end=result.t_end,
    )


def fit_exponent_set(points) -> ExponentSet:
    """Fit all four exponents from sweep points.

    Sessions with zero activity (every walker dead at tick 0) carry no
    usable signal on a log scale and are excluded.
    """
    usable = [pt for pt in points if pt.activity > 0]
    if not usable:
        raise SweepError("all sessions degenerate (zero activity)")
    return ExponentSet(
        alpha=fit_power_law((pt.n_walkers, pt.activity) for pt in usable),
        beta=fit_power_law((pt.n_walkers, pt.diversity) for pt in usable),
        gamma=fit_power_law((pt.n_walkers, pt.edge_count) for pt in usable),
        theta=fit_power_law((pt.diversity, pt.edge_count) for pt in usable),
    )


def sweep_exponents(cfg: SimConfig, n_list=None, replicates: int = DEFAULT_REPLICATES) -> ExponentSet:
    return fit_exponent_set(run_sweep(cfg, n_list, replicates))


def significant_decreases(fits) -> int:
    """Count adjacent decreases beyond one combined standard error.

    Adjacent fitted exponents a, b with standard errors sa, sb count as
    a violation of monotone growth only when b < a - sqrt(sa^2 + sb^2);
    smaller dips are within fit noise.
    """
    count = 0
    for a, b in zip(fits, fits[1:]):
        tol = math.sqrt(a.stderr**2 + b.stderr**2)
        if b.exponent < a.exponent - tol:
            count += 1
    return count


@dataclass
class ResponseSurface:
    """Exponent sets over a (p, lambda) grid, plus build provenance.

    ``cells`` maps (p-index, lambda-index) to an ExponentSet; cells whose
    sweep failed are absent from ``cells`` and recorded in ``failures``.
    """

    p_grid: list[float]
    lambda_grid: list[float]
    cells: dict[tuple[int, int], ExponentSet] = field(default_factory=dict)
    failures: dict[tuple[int, int], str] = field(default_factory=dict)
    sweep_config: dict = field(default_factory=dict)

    def params_at(self, i: int, j: int) -> tuple[float, float]:
        return self.p_grid[i], self.lambda_grid[j]

    def to_dict(self) -> dict:
        return {
            "p_grid": list(self.p_grid),
            "lambda_grid": list(self.lambda_grid),
            "cells": [
                {
                    "i": i,
                    "j": j,
                    "p": self.p_grid[i],
                    "lambda": self.lambda_grid[j],
                    "exponents": exponent_set_to_dict(self.cells[(i, j)]),
                }
                for (i, j) in sorted(self.cells)
            ],
            "failures": [
                {"i": i, "j": j, "error": self.failures[(i, j)]}
                for (i, j) in sorted(self.failures)
            ],
            "sweep_config": self.sweep_config,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResponseSurface":
        surface = cls(
            p_grid=list(d["p_grid"]),
            lambda_grid=list(d["lambda_grid"]),
            sweep_config=dict(d.get("sweep_config", {})),
        )
        for cell in d["cells"]:
            surface.cells[(cell["i"], cell["j"])] = exponent_set_from_dict(cell["exponents"])
        for cell in d.get("failures", []):
            surface.failures[(cell["i"], cell["j"])] = cell["error"]
        return surface

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ResponseSurface":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _fit_to_dict(fit: ScalingFit) -> dict:
    return {
        "exponent": fit.exponent,
        "prefactor": fit.prefactor,
        "r_squared": fit.r_squared,
        "stderr": fit.stderr,
        "n_points": fit.n_points,
    }


def _fit_from_dict(d: dict) -> ScalingFit:
    return ScalingFit(
        exponent=d["exponent"],
        prefactor=d["prefactor"],
        r_squared=d["r_squared"],
        stderr=d["stderr"],
        n_points=d["n_points"],
    )


def exponent_set_to_dict(es: ExponentSet) -> dict:
    return {name: _fit_to_dict(getattr(es, name)) for name in ("alpha", "beta", "gamma", "theta")}


def exponent_set_from_dict(d: dict) -> ExponentSet:
    return ExponentSet(**{name: _fit_from_dict(d[name]) for name in ("alpha", "beta", "gamma", "theta")})


def _surface_cell(args) -> tuple[int, int, ExponentSet | None, str | None]:
    i, j, p, lam, base, n_list, replicates = args
    cfg = SimConfig(
        n_walkers=1,
        p=p,
        step_law=StepLawParams(lam=lam, l_min=base["l_min"], l_max=base["l_max"]),
        seed_origin=base["seed_origin"],
        origin_deposit_trial=base["origin_deposit_trial"],
        max_ticks=base["max_ticks"],
        rng_seed=base["master_seed"],
    )
    try:
        return i, j, sweep_exponents(cfg, n_list, replicates), None
    except SweepError as exc:
        return i, j, None, str(exc)


def build_response_surface(
    p_grid=None,
    lambda_grid=None,
    n_list=None,
    replicates: int = DEFAULT_REPLICATES,
    master_seed: int = 0,
    l_min: float = DEFAULT_L_MIN,
    l_max: float = DEFAULT_L_MAX,
    seed_origin: bool = True,
    origin_deposit_trial: bool = True,
    max_ticks: int = 1_000_000,
    jobs: int = 1,
    progress=None,
) -> ResponseSurface:
    """Sweep every grid cell and collect its exponents.

    Cells run independently (optionally across ``jobs`` processes); all
    randomness derives from (master_seed, p, lambda, N, replicate), so
    output is identical for any jobs value.  Failed cells are recorded,
    not fatal.  ``progress`` is an optional callback (i, j) -> None.
    """
    p_grid = list(p_grid) if p_grid is not None else list(DEFAULT_P_GRID)
    lambda_grid = list(lambda_grid) if lambda_grid is not None else list(DEFAULT_LAMBDA_GRID)
    if not p_grid or not lambda_grid:
        raise ParameterError("surface grids must be non-empty")
    if list(p_grid) != sorted(set(p_grid)) or list(lambda_grid) != sorted(set(lambda_grid)):
        raise ParameterError("surface grids must be strictly increasing")
    n_list = list(n_list) if n_list is not None else list(DEFAULT_N_LIST)
    _check_sweep_plan(n_list, replicates)

    base = {
        "l_min": l_min,
        "l_max": l_max,
        "seed_origin": seed_origin,
        "origin_deposit_trial": origin_deposit_trial,
        "max_ticks": max_ticks,
        "master_seed": master_seed,
    }
    tasks = [
        (i, j, p, lam, base, n_list, replicates)
        for i, p in enumerate(p_grid)
        for j, lam in enumerate(lambda_grid)
    ]

    surface = ResponseSurface(
        p_grid=p_grid,
        lambda_grid=lambda_grid,
        sweep_config={
            "n_list": n_list,
            "replicates": replicates,
            "master_seed": master_seed,
            "l_min": l_min,
            "l_max": l_max,
            "seed_origin": seed_origin,
            "origin_deposit_trial": origin_deposit_trial,
            "max_ticks": max_ticks,
        },
    )
    if jobs <= 1:
        results = map(_surface_cell, tasks)
    else:
        pool = concurrent.futures.ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_surface_cell, tasks, chunksize=1)
    for i, j, exponents, error in results:
        if exponents is not None:
            surface.cells[(i, j)] = exponents
        else:
            surface.failures[(i, j)] = error
        if progress is not None:
            progress(i, j)
    if jobs > 1:
        pool.shutdown()
    return surface


def write_points_csv(points, fh) -> None:
    """Raw sweep points as ``p,lambda,N,replicate,A,D,E,t_end`` rows."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "lambda", "N", "replicate", "A", "D", "E", "t_end"])
    for pt in points:
        writer.writerow(
            [pt.p, pt.lam, pt.n_walkers, pt.replicate, pt.activity, pt.diversity, pt.edge_count, pt.t_end]
        )


def write_scatter_svg(points, fh, width: int = 640, height: int = 480) -> None:
    """Minimal log-log scatter of A, D, E versus N for eyeballing sweeps.

    Hand-rolled SVG so the bytes are fully deterministic.
    """
    series = [
        ("A", "#1f77b4", [(pt.n_walkers, pt.activity) for pt in points if pt.activity > 0]),
        ("D", "#ff7f0e", [(pt.n_walkers, pt.diversity) for pt in points if pt.diversity > 0]),
        ("E", "#2ca02c", [(pt.n_walkers, pt.edge_count) for pt in points if pt.edge_count > 0]),
    ]
    values = [(x, y) for _, _, pts in series for x, y in pts]
    if not values:
        raise SweepError("nothing to plot: all sessions degenerate")
    log_x = [math.log10(x) for x, _ in values]
    log_y = [math.log10(y) for _, y in values]
    x_lo, x_hi = min(log_x), max(log_x)
    y_lo, y_hi = min(log_y), max(log_y)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0
    margin = 40.0

    def sx(v):
        return margin + (math.log10(v) - x_lo) / x_span * (width - 2 * margin)

    def sy(v):
        return height - margin - (math.log10(v) - y_lo) / y_span * (height - 2 * margin)

    fh.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
    )
    fh.write(f'<rect width="{width}" height="{height}" fill="white"/>\n')
    fh.write(
        f'<text x="{width / 2:.1f}" y="{height - 8}" text-anchor="middle" '
        f'font-size="12">log10 N (A, D, E on log10 y)</text>\n'
    )
    for idx, (label, color, pts) in enumerate(series):
        for x, y in pts:
            fh.write(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}" fill-opacity="0.6"/>\n')
        fh.write(
            f'<text x="{width - 36}" y="{20 + 14 * idx}" font-size="12" fill="{color}">{label}</text>\n'
        )
    fh.write("</svg>\n")
