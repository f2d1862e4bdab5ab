"""One session of N interacting walkers on the shared interest space.

Walkers all start at the origin and move with heavy-tailed jumps.  A
walker stays in the community only while it keeps landing on active
cells; on every arrival it deposits a resource unit with probability p.
Interaction is purely indirect, through the deposited resources.

Tick semantics are synchronous and order-independent.  At t=0 the
origin is seeded and every walker runs its deposit trial there; walkers
enter (and record the origin) only if the origin is active.  Each later
tick:

  (a) every live walker jumps by an independent displacement;
  (b) each walker deposits one unit at its arrival cell with
      probability p; all deposits of the tick are applied together;
  (c) each walker then needs resource at its arrival cell that it did
      not just deposit itself: if the count there, minus its own
      deposit of this tick, is zero, the walker exits.  Either way the
      arrival cell is appended to its trajectory.

A walker's own deposit therefore seeds the cell for everyone else but
never retains the walker itself; retention comes from resources left
by other walkers (or earlier passes).  This is what couples session
lifetime to community size.  The final cell of an exited walker is the
one where it found nothing; it stays in the trajectory because the
walker left the space from there.

Reproducibility contract: the engine draws one uniform batch for the
origin trials, then per tick one batch for jump lengths, one for jump
angles, and one for the deposit trials, each sized to the live walkers
in walker-id order.  A config with the same seed therefore reproduces
a session bit for bit.
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError
from .levy import StepLawParams, sample_displacements
from .seeding import derive_seed
from .space import ORIGIN, InterestSpace, LatticePoint

Trajectory = list[LatticePoint]

DEFAULT_MAX_TICKS = 1_000_000


@dataclass(frozen=True)
class SimConfig:
    """Full configuration of one session.

    ``seed_origin`` places one resource unit at the origin before anyone
    acts; ``origin_deposit_trial`` additionally gives every walker a
    deposit trial at the origin at t=0, treating the start as an arrival.
    Both default on; with neither the origin is empty and every walker
    exits at tick 0.
    """

    n_walkers: int
    p: float
    step_law: StepLawParams = field(default_factory=lambda: StepLawParams(lam=2.0))
    seed_origin: bool = True
    origin_deposit_trial: bool = True
    max_ticks: int = DEFAULT_MAX_TICKS
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_walkers < 1:
            raise ParameterError(f"n_walkers must be >= 1, got {self.n_walkers}")
        if not (0.0 <= self.p <= 1.0):
            raise ParameterError(f"deposit probability must be in [0, 1], got {self.p}")
        if self.max_ticks < 1:
            raise ParameterError(f"max_ticks must be >= 1, got {self.max_ticks}")


@dataclass
class SessionResult:
    """Trajectories of all walkers, final space state, and stop tick.

    ``trajectories[i]`` lists every cell walker ``i`` occupied, in visit
    order: the origin, each arrival, and finally the cell from which it
    left the space.  Walkers that never entered (inactive origin) have
    empty trajectories.  ``truncated`` is set when walkers were still
    alive at ``max_ticks``; their trajectories end at their current
    cell.
    """

    trajectories: list[Trajectory]
    space: InterestSpace
    t_end: int
    truncated: bool


def run_session(cfg: SimConfig) -> SessionResult:
    rng = np.random.default_rng(cfg.rng_seed)
    space = InterestSpace()
    if cfg.seed_origin:
        space.deposit(ORIGIN)
    if cfg.origin_deposit_trial:
        hits = int(np.count_nonzero(rng.random(cfg.n_walkers) < cfg.p))
        for _ in range(hits):
            space.deposit(ORIGIN)

    trajectories: list[Trajectory] = [[] for _ in range(cfg.n_walkers)]
    if space.count(ORIGIN) == 0:
        return SessionResult(trajectories=trajectories, space=space, t_end=0, truncated=False)
    for traj in trajectories:
        traj.append(ORIGIN)

    ids = list(range(cfg.n_walkers))
    xs = [0] * cfg.n_walkers
    ys = [0] * cfg.n_walkers

    truncated = True
    t_end = cfg.max_ticks
    counts = space.counts
    deposit = space.deposit
    for t in range(1, cfg.max_ticks + 1):
        n = len(ids)

        # (a) jumps, batched over live walkers in walker-id order
        dx, dy = sample_displacements(rng, cfg.step_law, n)
        xs = (np.asarray(xs, dtype=np.int64) + dx).tolist()
        ys = (np.asarray(ys, dtype=np.int64) + dy).tolist()

        # (b) deposit trials at the arrival cells, applied together
        deposits = rng.random(n) < cfg.p
        for i in np.flatnonzero(deposits):
            deposit((xs[i], ys[i]))

        # (c) arrival check: resource beyond the walker's own deposit
        next_ids: list[int] = []
        next_xs: list[int] = []
        next_ys: list[int] = []
        for i, wid in enumerate(ids):
            cell = (xs[i], ys[i])
            trajectories[wid].append(cell)
            if counts.get(cell, 0) - (1 if deposits[i] else 0) > 0:
                next_ids.append(wid)
                next_xs.append(xs[i])
                next_ys.append(ys[i])
        if not next_ids:
            truncated = False
            t_end = t
            break
        ids, xs, ys = next_ids, next_xs, next_ys

    return SessionResult(trajectories=trajectories, space=space, t_end=t_end, truncated=truncated)


def session_lifetimes(cfg: SimConfig, n_walkers: int, replicates: int) -> list[int]:
    """Stop ticks of ``replicates`` independent sessions at size ``n_walkers``.

    Each replicate runs on its own stream derived from the config seed
    and the task coordinates (p, lambda, N, replicate), the same scheme
    the sweep machinery uses, so results are schedule-independent.
    """
    out = []
    for rep in range(replicates):
        seed = derive_seed(cfg.rng_seed, cfg.p, cfg.step_law.lam, n_walkers, rep)
        result = run_session(replace(cfg, n_walkers=n_walkers, rng_seed=seed))
        out.append(result.t_end)
    return out


def simulate_lifetimes(cfg: SimConfig, n_list: list[int], replicates: int = 10) -> list[tuple[int, float]]:
    """Mean stop tick per community size, for interaction-effect studies."""
    return [(n, float(np.mean(session_lifetimes(cfg, n, replicates)))) for n in n_list]


def config_to_dict(cfg: SimConfig) -> dict:
    return {
        "n_walkers": cfg.n_walkers,
        "p": cfg.p,
        "lambda": cfg.step_law.lam,
        "l_min": cfg.step_law.l_min,
        "l_max": cfg.step_law.l_max,
        "seed_origin": cfg.seed_origin,
        "origin_deposit_trial": cfg.origin_deposit_trial,
        "max_ticks": cfg.max_ticks,
        "rng_seed": cfg.rng_seed,
    }


def config_from_dict(d: dict) -> SimConfig:
    return SimConfig(
        n_walkers=d["n_walkers"],
        p=d["p"],
        step_law=StepLawParams(lam=d["lambda"], l_min=d["l_min"], l_max=d["l_max"]),
        seed_origin=d["seed_origin"],
        origin_deposit_trial=d["origin_deposit_trial"],
        max_ticks=d["max_ticks"],
        rng_seed=d["rng_seed"],
    )


def write_session_jsonl(result: SessionResult, cfg: SimConfig, fh) -> None:
    """Export a session as JSON lines.

    First line is a header with the config and stop tick; then one
    record per walker: ``{"walker_id": i, "trajectory": [[x, y], ...]}``.
    """
    header = {
        "cfg": config_to_dict(cfg),
        "t_end": result.t_end,
        "truncated": result.truncated,
    }
    fh.write(json.dumps(header, sort_keys=True) + "\n")
    for wid, traj in enumerate(result.trajectories):
        record = {"walker_id": wid, "trajectory": [[x, y] for x, y in traj]}
        fh.write(json.dumps(record, sort_keys=True) + "\n")
