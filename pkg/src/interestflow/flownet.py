"""Attention flow network built from walker (or user) trajectories.

Nodes are the visited sites plus two bookkeeping nodes for the
environment: every non-empty trajectory contributes one unit of flux
from SOURCE into its first site and one unit from its last site into
SINK, and one unit along every consecutive visit pair in between.  Each
visit therefore enters and leaves exactly once, so flow is conserved at
every internal node by construction.

Site identity is whatever the trajectories carry: lattice coordinate
tuples for simulated sessions, resource-id strings for empirical ones.
"""

import csv
from dataclasses import dataclass, field

SOURCE = "__SRC__"
SINK = "__SNK__"

_RESERVED = (SOURCE, SINK)


@dataclass
class AttentionFlowNetwork:
    """Weighted directed edges keyed ``(from_node, to_node)``."""

    edges: dict[tuple, int] = field(default_factory=dict)

    def internal_nodes(self) -> set:
        nodes = set()
        for u, v in self.edges:
            if u not in _RESERVED:
                nodes.add(u)
            if v not in _RESERVED:
                nodes.add(v)
        return nodes

    def source_efflux(self) -> int:
        return sum(w for (u, _), w in self.edges.items() if u == SOURCE)

    def sink_influx(self) -> int:
        return sum(w for (_, v), w in self.edges.items() if v == SINK)


@dataclass(frozen=True)
class Metrics:
    """Macroscopic quantities of one network.

    activity   -- total weight over internal-to-internal edges (boundary
                  flux through SOURCE/SINK excluded by default)
    diversity  -- number of internal nodes
    edge_count -- distinct internal-to-internal edges, self-loops excluded
                  (the simulator cannot produce them; empirical reload
                  clicks are kept in the flow but not counted here)
    n_walkers  -- session size the network was built from
    """

    activity: int
    diversity: int
    edge_count: int
    n_walkers: int


def build_network(trajectories) -> AttentionFlowNetwork:
    """Accumulate transition counts over all trajectories.

    Empty trajectories contribute nothing.  Visits may not use the
    reserved SOURCE/SINK tokens.
    """
    edges: dict[tuple, int] = {}
    for traj in trajectories:
        if not traj:
            continue
        prev = SOURCE
        for site in traj:
            if site in _RESERVED:
                raise ValueError(f"trajectory uses reserved node id {site!r}")
            key = (prev, site)
            edges[key] = edges.get(key, 0) + 1
            prev = site
        key = (prev, SINK)
        edges[key] = edges.get(key, 0) + 1
    return AttentionFlowNetwork(edges=edges)


def metrics(net: AttentionFlowNetwork, n_walkers: int, include_boundary_flux: bool = False) -> Metrics:
    """Compute (activity, diversity, edge count) for a network.

    ``include_boundary_flux`` folds the SOURCE/SINK flux into the
    activity total for anyone wanting the inclusive reading; the default
    counts internal transitions only.
    """
    activity = 0
    edge_count = 0
    for (u, v), w in net.edges.items():
        boundary = u == SOURCE or v == SINK
        if boundary:
            if include_boundary_flux:
                activity += w
            continue
        activity += w
        if u != v:
            edge_count += 1
    return Metrics(
        activity=activity,
        diversity=len(net.internal_nodes()),
        edge_count=edge_count,
        n_walkers=n_walkers,
    )


def check_flow_balance(net: AttentionFlowNetwork) -> bool:
    """True iff in-weight equals out-weight at every internal node and
    the SOURCE efflux equals the SINK influx."""
    inflow: dict = {}
    outflow: dict = {}
    for (u, v), w in net.edges.items():
        outflow[u] = outflow.get(u, 0) + w
        inflow[v] = inflow.get(v, 0) + w
    if inflow.get(SOURCE, 0) or outflow.get(SINK, 0):
        return False
    if outflow.get(SOURCE, 0) != inflow.get(SINK, 0):
        return False
    for node in net.internal_nodes():
        if inflow.get(node, 0) != outflow.get(node, 0):
            return False
    return True


def node_token(node) -> str:
    """Serialize a node id for the edge-list CSV."""
    if isinstance(node, tuple):
        return f"{node[0]}:{node[1]}"
    return str(node)


def write_edge_csv(net: AttentionFlowNetwork, fh) -> None:
    """Edge list as ``from,to,weight`` rows, sorted for determinism."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["from", "to", "weight"])
    rows = [(node_token(u), node_token(v), w) for (u, v), w in net.edges.items()]
    for u, v, w in sorted(rows):
        writer.writerow([u, v, w])
