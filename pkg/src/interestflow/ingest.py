"""Empirical event logs -> sessions -> growth curves -> exponents.

The input is a CSV of (user_id, timestamp, resource_id) click/post
events.  Events split into per-user sessions on an inactivity gap, each
session becomes one trajectory over resource ids, and the cumulative
flow network is checkpointed as the community grows to yield the same
(N, A, D, E) scaling data the simulator produces.
"""

import csv
import warnings
from dataclasses import dataclass

from .errors import FitError, IngestError
from .flownet import SINK, SOURCE, build_network
from .scaling import ExponentSet, fit_power_law

DEFAULT_SESSION_GAP = 1800.0

EVENT_HEADER = ["user_id", "timestamp", "resource_id"]


@dataclass(frozen=True)
class Event:
    user_id: str
    timestamp: float
    resource_id: str


@dataclass(frozen=True)
class Session:
    """One user's uninterrupted run of visits, time-ordered."""

    user_id: str
    resources: list
    start_time: float


@dataclass(frozen=True)
class GrowthPoint:
    n_users: int
    activity: int
    diversity: int
    edge_count: int


@dataclass
class GrowthCurve:
    checkpoints: list


def parse_events(fh) -> list[Event]:
    """Read an event CSV and return events sorted by timestamp.

    The header must name exactly ``user_id,timestamp,resource_id``.
    Malformed rows raise with their line number; sorting is stable, so
    simultaneous events keep file order.
    """
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("event log is empty (missing header)") from None
    if [col.strip() for col in header] != EVENT_HEADER:
        raise IngestError(f"expected header {','.join(EVENT_HEADER)!r}, got {','.join(header)!r}")
    events = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise IngestError(f"line {lineno}: expected 3 fields, got {len(row)}")
        user_id, raw_ts, resource_id = (f.strip() for f in row)
        if not user_id or not resource_id:
            raise IngestError(f"line {lineno}: empty user or resource id")
        if resource_id in (SOURCE, SINK):
            raise IngestError(f"line {lineno}: resource id {resource_id!r} is reserved")
        try:
            ts = float(raw_ts)
        except ValueError:
            raise IngestError(f"line {lineno}: bad timestamp {raw_ts!r}") from None
        if ts != ts or ts in (float("inf"), float("-inf")):
            raise IngestError(f"line {lineno}: non-finite timestamp {raw_ts!r}")
        events.append(Event(user_id=user_id, timestamp=ts, resource_id=resource_id))
    events.sort(key=lambda e: e.timestamp)
    return events


def sessionize(events, gap: float = DEFAULT_SESSION_GAP, drop_repeats: bool = False) -> list[Session]:
    """Split each user's event stream on inactivity gaps longer than ``gap``.

    ``drop_repeats`` collapses consecutive identical resources within a
    session (reload clicks).  Returned sessions are sorted by start
    time; appending events later than all existing ones never changes
    previously closed sessions.
    """
    if gap <= 0.0:
        raise IngestError(f"session gap must be positive, got {gap}")
    per_user: dict[str, list[list[Event]]] = {}
    for event in events:
        runs = per_user.setdefault(event.user_id, [])
        if runs and event.timestamp - runs[-1][-1].timestamp <= gap:
            runs[-1].append(event)
        else:
            runs.append([event])
    sessions = []
    for runs in per_user.values():
        for run in runs:
            resources = []
            for event in run:
                if drop_repeats and resources and resources[-1] == event.resource_id:
                    continue
                resources.append(event.resource_id)
            sessions.append(
                Session(user_id=run[0].user_id, resources=resources, start_time=run[0].timestamp)
            )
    sessions.sort(key=lambda s: s.start_time)
    return sessions


def default_checkpoints(total_users: int) -> list[int]:
    """Powers of two up to the community size: even leverage in log space."""
    out = []
    n = 1
    while n <= total_users:
        out.append(n)
        n *= 2
    return out


def growth_curve(sessions, checkpoints) -> GrowthCurve:
    """Replay sessions in start order, checkpointing the cumulative network.

    When the count of distinct users first reaches a threshold, the
    (N, A, D, E) of the network built from all sessions so far is
    recorded.  Thresholds beyond the total user count are dropped with a
    warning.
    """
    thresholds = list(checkpoints)
    if thresholds != sorted(set(thresholds)) or any(t < 1 for t in thresholds):
        raise IngestError("checkpoints must be strictly increasing positive integers")

    ordered = sorted(sessions, key=lambda s: s.start_time)
    edges: dict[tuple, int] = {}
    internal_nodes: set = set()
    distinct_edges: set = set()
    activity = 0
    seen_users: set = set()
    points = []
    next_idx = 0

    for session in ordered:
        seen_users.add(session.user_id)
        prev = SOURCE
        for site in session.resources:
            key = (prev, site)
            edges[key] = edges.get(key, 0) + 1
            internal_nodes.add(site)
            if prev is not SOURCE:
                activity += 1
                if prev != site:
                    distinct_edges.add(key)
            prev = site
        if session.resources:
            key = (prev, SINK)
            edges[key] = edges.get(key, 0) + 1
        while next_idx < len(thresholds) and len(seen_users) >= thresholds[next_idx]:
            points.append(
                GrowthPoint(
                    n_users=len(seen_users),
                    activity=activity,
                    diversity=len(internal_nodes),
                    edge_count=len(distinct_edges),
                )
            )
            next_idx += 1

    for threshold in thresholds[next_idx:]:
        warnings.warn(
            f"checkpoint {threshold} exceeds total distinct users ({len(seen_users)}); omitted",
            stacklevel=2,
        )
    return GrowthCurve(checkpoints=points)


def community_exponents(curve: GrowthCurve) -> ExponentSet:
    """Fit the four growth exponents from a checkpointed curve."""
    pts = curve.checkpoints
    if len(pts) < 4:
        raise FitError(f"insufficient span: need >= 4 checkpoints, got {len(pts)}")
    n_vals = [pt.n_users for pt in pts]
    if max(n_vals) < 10 * min(n_vals):
        raise FitError(
            f"insufficient span: user counts cover {max(n_vals) / min(n_vals):.2f}x, need >= 10x"
        )
    return ExponentSet(
        alpha=fit_power_law((pt.n_users, pt.activity) for pt in pts if pt.activity > 0),
        beta=fit_power_law((pt.n_users, pt.diversity) for pt in pts if pt.diversity > 0),
        gamma=fit_power_law((pt.n_users, pt.edge_count) for pt in pts if pt.edge_count > 0),
        theta=fit_power_law(
            (pt.diversity, pt.edge_count) for pt in pts if pt.diversity > 0 and pt.edge_count > 0
        ),
    )


def events_from_trajectories(trajectories) -> list[Event]:
    """Synthesize an event log from simulated trajectories.

    One user and one session per non-empty trajectory; resource ids are
    ``x:y`` coordinate strings.  Timestamps are spaced so the default
    session gap never splits a walker's visits.
    """
    events = []
    for wid, traj in enumerate(trajectories):
        base = float(wid) * 1e6
        for step, (x, y) in enumerate(traj):
            events.append(
                Event(user_id=f"walker-{wid}", timestamp=base + step, resource_id=f"{x}:{y}")
            )
    return events


def write_events_csv(events, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(EVENT_HEADER)
    for event in events:
        writer.writerow([event.user_id, event.timestamp, event.resource_id])


def write_growth_csv(curve: GrowthCurve, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["N", "A", "D", "E"])
    for pt in curve.checkpoints:
        writer.writerow([pt.n_users, pt.activity, pt.diversity, pt.edge_count])


def trajectories_from_sessions(sessions) -> list[list]:
    return [session.resources for session in sessions]


def network_from_sessions(sessions):
    return build_network(trajectories_from_sessions(sessions))
