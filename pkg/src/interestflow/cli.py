"""Command line entry points.

Every command writes its outputs plus a ``manifest.json`` into a single
output directory.  The manifest records the command name, the fully
resolved configuration, and the list of output files, and contains no
volatile data (no timestamps, no host info), so ``rerun`` against a
manifest reproduces every output byte for byte.  ``--jobs`` controls
process-level parallelism only and is deliberately kept out of the
manifest: it never changes numerical results.

The output directory resolves in this order: the ``--out-dir`` flag,
the ``INTERESTFLOW_OUT_DIR`` environment variable, then a per-command
default such as ``simulate-out``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .engine import SimConfig, config_from_dict, config_to_dict, run_session, write_session_jsonl
from .errors import InterestFlowError
from .flownet import build_network, write_edge_csv
from .inference import InferredParams, ObservedExponents, gamma_diagnostic, infer, log_likelihood
from .ingest import (
    DEFAULT_SESSION_GAP,
    community_exponents,
    default_checkpoints,
    growth_curve,
    network_from_sessions,
    parse_events,
    sessionize,
    write_growth_csv,
)
from .levy import DEFAULT_L_MAX, DEFAULT_L_MIN, StepLawParams
from .scaling import (
    DEFAULT_LAMBDA_GRID,
    DEFAULT_N_LIST,
    DEFAULT_P_GRID,
    DEFAULT_REPLICATES,
    ResponseSurface,
    build_response_surface,
    exponent_set_to_dict,
    fit_exponent_set,
    run_sweep,
    write_points_csv,
    write_scatter_svg,
)

MANIFEST_NAME = "manifest.json"


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


def dispatch(argv) -> int:
    """Parse ``argv`` and run the selected command, returning an exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and usage errors
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (InterestFlowError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interestflow",
        description="Simulate and analyze collective interest mobility.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentDefaultsHelpFormatter

    sim = sub.add_parser("simulate", formatter_class=fmt, help="run one session and dump it")
    sim.add_argument("--n", type=int, default=100, help="number of walkers")
    _add_model_args(sim)
    sim.add_argument("--seed", type=int, default=0, help="session RNG seed")
    sim.add_argument("--dump-sites", action="store_true", help="also write site counts as sites.csv")
    _add_out_arg(sim)
    sim.set_defaults(handler=_cmd_simulate)

    swp = sub.add_parser("sweep", formatter_class=fmt, help="size sweep at one (p, lambda)")
    _add_model_args(swp)
    swp.add_argument("--n-list", default=_fmt_ints(DEFAULT_N_LIST), help="comma-separated walker counts")
    swp.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES, help="sessions per size")
    swp.add_argument("--seed", type=int, default=0, help="master seed for the sweep")
    swp.add_argument("--svg", action="store_true", help="also write a scatter plot as scatter.svg")
    swp.add_argument("--jobs", type=int, default=1, help="worker processes (does not affect results)")
    _add_out_arg(swp)
    swp.set_defaults(handler=_cmd_sweep)

    srf = sub.add_parser("surface", formatter_class=fmt, help="exponent surface over a (p, lambda) grid")
    srf.add_argument("--config", default=None, help="JSON file with any of the flag values below")
    srf.add_argument("--p-grid", default=None, help=f"comma-separated p values (default {_fmt_floats(DEFAULT_P_GRID)})")
    srf.add_argument("--lambda-grid", dest="lambda_grid", default=None,
                     help=f"comma-separated lambda values (default {_fmt_floats(DEFAULT_LAMBDA_GRID)})")
    srf.add_argument("--n-list", default=None, help=f"comma-separated walker counts (default {_fmt_ints(DEFAULT_N_LIST)})")
    srf.add_argument("--replicates", type=int, default=None, help=f"sessions per size (default {DEFAULT_REPLICATES})")
    srf.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    srf.add_argument("--l-min", type=float, default=None, help=f"minimum step length (default {DEFAULT_L_MIN})")
    srf.add_argument("--l-max", type=float, default=None, help=f"step length cutoff (default {DEFAULT_L_MAX})")
    srf.add_argument("--max-ticks", type=int, default=None, help="per-session tick cap (default 1000000)")
    srf.add_argument("--jobs", type=int, default=1, help="worker processes (does not affect results)")
    _add_out_arg(srf)
    srf.set_defaults(handler=_cmd_surface)

    inf = sub.add_parser("infer", formatter_class=fmt, help="invert observed exponents on a surface")
    inf.add_argument("--surface", required=True, help="surface.json produced by the surface command")
    inf.add_argument("--alpha", type=float, default=None, help="observed activity exponent")
    inf.add_argument("--beta", type=float, default=None, help="observed diversity exponent")
    inf.add_argument("--theta", type=float, default=None, help="observed edge-vs-diversity exponent")
    inf.add_argument("--exponents", default=None,
                     help="exponents.json from sweep/analyze, used for any exponent not given as a flag")
    inf.add_argument("--gamma", type=float, default=None,
                     help="observed lifetime exponent, reported as a diagnostic only")
    inf.add_argument("--sigma", type=float, default=1.0, help="likelihood width (does not move the optimum)")
    _add_out_arg(inf)
    inf.set_defaults(handler=_cmd_infer)

    ana = sub.add_parser("analyze", formatter_class=fmt, help="growth curve and exponents from an event log")
    ana.add_argument("--input", required=True, help="event CSV with header user_id,timestamp,resource_id")
    ana.add_argument("--gap", type=float, default=DEFAULT_SESSION_GAP, help="session inactivity gap in seconds")
    ana.add_argument("--checkpoints", default=None,
                     help="comma-separated user-count thresholds (default: powers of two)")
    ana.add_argument("--drop-self-loops", action="store_true",
                     help="collapse consecutive repeats of the same resource within a session")
    _add_out_arg(ana)
    ana.set_defaults(handler=_cmd_analyze)

    rer = sub.add_parser("rerun", formatter_class=fmt, help="replay a recorded run from its manifest")
    rer.add_argument("--manifest", required=True, help="manifest.json from a previous run")
    rer.add_argument("--jobs", type=int, default=1, help="worker processes (does not affect results)")
    _add_out_arg(rer)
    rer.set_defaults(handler=_cmd_rerun)

    return parser


def _add_model_args(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--p", type=float, default=0.5, help="deposition probability per tick")
    cmd.add_argument("--lambda", dest="lam", type=float, default=2.0, help="step length exponent")
    cmd.add_argument("--l-min", type=float, default=DEFAULT_L_MIN, help="minimum step length")
    cmd.add_argument("--l-max", type=float, default=DEFAULT_L_MAX, help="step length cutoff")
    cmd.add_argument("--max-ticks", type=int, default=1_000_000, help="per-session tick cap")
    cmd.add_argument("--no-seed-origin", action="store_true", help="start on an empty origin site")
    cmd.add_argument("--no-origin-deposit", action="store_true",
                     help="skip the deposition trial at the starting site")


def _add_out_arg(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--out-dir", default=None,
                     help="output directory (default: $INTERESTFLOW_OUT_DIR or <command>-out)")


def _fmt_ints(values) -> str:
    return ",".join(str(v) for v in values)


def _fmt_floats(values) -> str:
    return ",".join(repr(v) for v in values)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from None


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from None


def _resolve_out_dir(args, command: str) -> str:
    if args.out_dir:
        return args.out_dir
    env = os.environ.get("INTERESTFLOW_OUT_DIR")
    if env:
        return env
    return f"{command}-out"


# ---------------------------------------------------------------------------
# manifest plumbing


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _finish_run(command: str, config: dict, out_dir: str, outputs: dict) -> int:
    """Write every output file and then the manifest naming them all."""
    os.makedirs(out_dir, exist_ok=True)
    for name, writer in outputs.items():
        path = os.path.join(out_dir, name)
        if name.endswith(".jsonl") or name.endswith(".csv") or name.endswith(".svg"):
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer(fh)
        else:
            _write_json(path, writer)
    manifest = {
        "command": command,
        "config": config,
        "outputs": sorted(outputs),
        "tool_version": __version__,
    }
    _write_json(os.path.join(out_dir, MANIFEST_NAME), manifest)
    return 0


# ---------------------------------------------------------------------------
# simulate


def _cmd_simulate(args) -> int:
    cfg = SimConfig(
        n_walkers=args.n,
        p=args.p,
        step_law=StepLawParams(lam=args.lam, l_min=args.l_min, l_max=args.l_max),
        seed_origin=not args.no_seed_origin,
        origin_deposit_trial=not args.no_origin_deposit,
        max_ticks=args.max_ticks,
        rng_seed=args.seed,
    )
    config = config_to_dict(cfg)
    config["dump_sites"] = bool(args.dump_sites)
    return _run_simulate(config, _resolve_out_dir(args, "simulate"))


def _run_simulate(config: dict, out_dir: str) -> int:
    cfg = config_from_dict(config)
    result = run_session(cfg)
    net = build_network(result.trajectories)
    outputs = {
        "session.jsonl": lambda fh: write_session_jsonl(result, cfg, fh),
        "edges.csv": lambda fh: write_edge_csv(net, fh),
    }
    if config.get("dump_sites"):
        outputs["sites.csv"] = result.space.write_csv
    return _finish_run("simulate", config, out_dir, outputs)


# ---------------------------------------------------------------------------
# sweep


def _cmd_sweep(args) -> int:
    config = {
        "p": args.p,
        "lambda": args.lam,
        "l_min": args.l_min,
        "l_max": args.l_max,
        "seed_origin": not args.no_seed_origin,
        "origin_deposit_trial": not args.no_origin_deposit,
        "max_ticks": args.max_ticks,
        "n_list": _parse_int_list(args.n_list),
        "replicates": args.replicates,
        "master_seed": args.seed,
        "svg": bool(args.svg),
    }
    return _run_sweep(config, _resolve_out_dir(args, "sweep"), args.jobs)


def _sweep_template(config: dict) -> SimConfig:
    return SimConfig(
        n_walkers=1,
        p=config["p"],
        step_law=StepLawParams(
            lam=config["lambda"], l_min=config["l_min"], l_max=config["l_max"]
        ),
        seed_origin=config["seed_origin"],
        origin_deposit_trial=config["origin_deposit_trial"],
        max_ticks=config["max_ticks"],
        rng_seed=config["master_seed"],
    )


def _run_sweep(config: dict, out_dir: str, jobs: int) -> int:
    cfg = _sweep_template(config)
    points = run_sweep(cfg, config["n_list"], config["replicates"], jobs=jobs)
    exponents = fit_exponent_set(points)
    outputs = {
        "points.csv": lambda fh: write_points_csv(points, fh),
        "exponents.json": exponent_set_to_dict(exponents),
    }
    if config.get("svg"):
        outputs["scatter.svg"] = lambda fh: write_scatter_svg(points, fh)
    return _finish_run("sweep", config, out_dir, outputs)


# ---------------------------------------------------------------------------
# surface


_SURFACE_DEFAULTS = {
    "p_grid": list(DEFAULT_P_GRID),
    "lambda_grid": list(DEFAULT_LAMBDA_GRID),
    "n_list": list(DEFAULT_N_LIST),
    "replicates": DEFAULT_REPLICATES,
    "master_seed": 0,
    "l_min": DEFAULT_L_MIN,
    "l_max": DEFAULT_L_MAX,
    "seed_origin": True,
    "origin_deposit_trial": True,
    "max_ticks": 1_000_000,
}


def _cmd_surface(args) -> int:
    file_cfg = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - set(_SURFACE_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown surface config keys: {sorted(unknown)}")
    flag_cfg = {
        "p_grid": None if args.p_grid is None else _parse_float_list(args.p_grid),
        "lambda_grid": None if args.lambda_grid is None else _parse_float_list(args.lambda_grid),
        "n_list": None if args.n_list is None else _parse_int_list(args.n_list),
        "replicates": args.replicates,
        "master_seed": args.seed,
        "l_min": args.l_min,
        "l_max": args.l_max,
        "max_ticks": args.max_ticks,
    }
    config = dict(_SURFACE_DEFAULTS)
    config.update(file_cfg)
    config.update({k: v for k, v in flag_cfg.items() if v is not None})
    return _run_surface(config, _resolve_out_dir(args, "surface"), args.jobs)


def _run_surface(config: dict, out_dir: str, jobs: int) -> int:
    total = len(config["p_grid"]) * len(config["lambda_grid"])
    done = 0

    def progress(i: int, j: int) -> None:
        nonlocal done
        done += 1
        if done % 10 == 0 or done == total:
            print(f"surface: {done}/{total} cells", file=sys.stderr)

    surface = build_response_surface(
        p_grid=config["p_grid"],
        lambda_grid=config["lambda_grid"],
        n_list=config["n_list"],
        replicates=config["replicates"],
        master_seed=config["master_seed"],
        l_min=config["l_min"],
        l_max=config["l_max"],
        seed_origin=config["seed_origin"],
        origin_deposit_trial=config["origin_deposit_trial"],
        max_ticks=config["max_ticks"],
        jobs=jobs,
        progress=progress,
    )
    return _finish_run("surface", config, out_dir, {"surface.json": surface.to_dict()})


# ---------------------------------------------------------------------------
# infer


def _cmd_infer(args) -> int:
    from_file = {}
    if args.exponents:
        with open(args.exponents, "r", encoding="utf-8") as fh:
            stored = json.load(fh)
        for key in ("alpha", "beta", "theta"):
            if key in stored and stored[key] is not None:
                from_file[key] = float(stored[key]["exponent"])
    observed = {}
    for key, flag in (("alpha", args.alpha), ("beta", args.beta), ("theta", args.theta)):
        value = flag if flag is not None else from_file.get(key)
        if value is None:
            raise ValueError(f"missing observed exponent {key}: pass --{key} or --exponents")
        observed[key] = value
    config = {
        "alpha": observed["alpha"],
        "beta": observed["beta"],
        "theta": observed["theta"],
        "gamma": args.gamma,
        "sigma": args.sigma,
        "surface_path": os.path.abspath(args.surface),
    }
    return _run_infer(config, _resolve_out_dir(args, "infer"))


def _run_infer(config: dict, out_dir: str) -> int:
    surface = ResponseSurface.load(config["surface_path"])
    obs = ObservedExponents(alpha=config["alpha"], beta=config["beta"], theta=config["theta"])
    result = infer(obs, surface)
    payload = _inferred_to_dict(result)
    payload["sigma"] = config["sigma"]
    payload["log_likelihood"] = log_likelihood(
        obs, surface.cells[result.cell_index], sigma=config["sigma"]
    )
    if config.get("gamma") is not None:
        payload["gamma_diagnostic"] = gamma_diagnostic(config["gamma"], surface, result.cell_index)
    else:
        payload["gamma_diagnostic"] = None
    return _finish_run("infer", config, out_dir, {"inferred.json": payload})


def _inferred_to_dict(result: InferredParams) -> dict:
    return {
        "p_hat": result.p_hat,
        "lambda_hat": result.lambda_hat,
        "distance": result.distance,
        "cell_index": list(result.cell_index),
    }


# ---------------------------------------------------------------------------
# analyze


def _cmd_analyze(args) -> int:
    config = {
        "input_path": os.path.abspath(args.input),
        "gap": args.gap,
        "checkpoints": None if args.checkpoints is None else _parse_int_list(args.checkpoints),
        "drop_self_loops": bool(args.drop_self_loops),
    }
    return _run_analyze(config, _resolve_out_dir(args, "analyze"))


def _run_analyze(config: dict, out_dir: str) -> int:
    with open(config["input_path"], "r", encoding="utf-8", newline="") as fh:
        events = parse_events(fh)
    sessions = sessionize(events, gap=config["gap"], drop_repeats=config["drop_self_loops"])
    checkpoints = config["checkpoints"]
    if checkpoints is None:
        checkpoints = default_checkpoints(len({s.user_id for s in sessions}))
    curve = growth_curve(sessions, checkpoints)
    exponents = community_exponents(curve)
    net = network_from_sessions(sessions)
    outputs = {
        "growth.csv": lambda fh: write_growth_csv(curve, fh),
        "exponents.json": exponent_set_to_dict(exponents),
        "edges.csv": lambda fh: write_edge_csv(net, fh),
    }
    return _finish_run("analyze", config, out_dir, outputs)


# ---------------------------------------------------------------------------
# rerun


_RUNNERS = {
    "simulate": lambda config, out_dir, jobs: _run_simulate(config, out_dir),
    "sweep": _run_sweep,
    "surface": _run_surface,
    "infer": lambda config, out_dir, jobs: _run_infer(config, out_dir),
    "analyze": lambda config, out_dir, jobs: _run_analyze(config, out_dir),
}


def _cmd_rerun(args) -> int:
    with open(args.manifest, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    command = manifest.get("command")
    if command not in _RUNNERS:
        raise ValueError(f"manifest names unknown command {command!r}")
    config = manifest.get("config")
    if not isinstance(config, dict):
        raise ValueError("manifest is missing its config block")
    out_dir = args.out_dir or os.environ.get("INTERESTFLOW_OUT_DIR") or f"{command}-rerun"
    return _RUNNERS[command](config, out_dir, args.jobs)
