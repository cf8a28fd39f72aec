"""
Rounding fractional solutions of the node-weighted distance LP.

Distances count the lengths of both end points. For a terminal index ell
drawn uniformly and theta drawn uniformly from (0, 1/2), the cut is the union
of the boundaries B+(s_i, theta) over i != ell. A node v lies in B+(s, r)
iff r < d(s, v) <= r + x_v, and for theta < 1/2 only the terminal nearest
to v other than s_ell can put it there.

Interval starts are the distances of the node a search stepped from, never
``d - x_v``, so that the intervals of consecutive path nodes meet exactly.
When the minimum terminal distance D is a tolerance below 1, theta is
scaled by D.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import networkx as nx
import numpy as np

from mwcut import settings as mc_settings
from mwcut.core import (
    INF,
    CutSolution,
    FractionalSolution,
    NodeInstance,
    draw_unit,
    make_node_cut,
    make_rng,
    resolve_seed,
)
from mwcut.dirround import CutCertificate, sweep_minimum
from mwcut.exceptions import InstanceError, InvalidCutError
from mwcut.lp import feasible_table
from mwcut.paths import DistanceTable, NearTerminalTable, dijkstra, node_adjacency

logger = logging.getLogger(__name__)

HALF = 0.5


class NodeDistanceTable(DistanceTable):
    """Distances from a terminal counting the lengths of both end points."""


@dataclass(frozen=True)
class BoundarySet:
    """The nodes just outside B(center, radius) whose length straddles it."""

    center: int
    radius: float
    members: frozenset


def node_sssp(
    inst: NodeInstance, x: FractionalSolution, source: int
) -> NodeDistanceTable:
    """Node-weighted distances from ``source``; ``dist[source] = x_source``."""
    table = dijkstra(node_adjacency(inst, x), source, start=x.values[source])
    return NodeDistanceTable(table.source, table.dist, table.pred, table.via)


def boundary(
    inst: NodeInstance, x: FractionalSolution, source: int, r: float
) -> BoundarySet:
    """
    B+(source, r): every v with ``r < d(source, v) <= r + x_v``.
    """
    if r < 0:
        raise InstanceError(f"radius must be nonnegative, got {r}")
    table = node_sssp(inst, x, source)
    dist, pred = table.dist, table.pred
    members = set()
    for v in range(inst.n):
        if dist[v] == INF or x.values[v] <= 0:
            continue
        entry = dist[pred[v]] if pred[v] >= 0 else 0.0
        if entry <= r < dist[v]:
            members.add(v)
    return BoundarySet(source, r, frozenset(members))


def _check_parameters(inst: NodeInstance, ell: int, theta: float) -> None:
    if not 0 <= ell < inst.k:
        raise InstanceError(f"ell must lie in 0..{inst.k - 1}, got {ell}")
    if not 0 < theta < HALF:
        raise InstanceError(f"theta must lie in (0, 0.5), got {theta}")


def _cut_members(
    inst: NodeInstance,
    x: FractionalSolution,
    table: NearTerminalTable,
    ell: int,
    theta: float,
):
    members = []
    for v in range(inst.n):
        length = x.values[v]
        if length <= 0 or v in inst.terminal_set:
            continue
        rank = 0
        nearest = table.nearest(v, 0)
        if nearest is not None and nearest[0] == ell:
            rank = 1
        if table.entry(v, rank) <= theta < table.distance(v, rank):
            members.append(v)
    return members


def _scale(distance: float) -> float:
    return min(1.0, distance)


def round_node_at(
    inst: NodeInstance, x: FractionalSolution, ell: int, theta: float
) -> CutSolution:
    """
    The cut C(ell, theta) from nearest-terminal labels.

    Args:
        inst: Canonical node-weighted instance.
        x: Feasible node solution.
        ell: Index of the terminal whose boundary is skipped.
        theta: Radius in (0, 1/2), taken relative to ``min(1, D)``.

    Raises:
        InfeasibleSolutionError: If ``x`` is not feasible.
    """
    _check_parameters(inst, ell, theta)
    table, distance = feasible_table(inst, x)
    radius = theta * _scale(distance)
    members = _cut_members(inst, x, table, ell, radius)
    return make_node_cut(inst, members, ell=ell, theta=radius, method="boundary")


def literal_node_cut(
    inst: NodeInstance, x: FractionalSolution, ell: int, theta: float
) -> CutSolution:
    """C(ell, theta) as the union of boundary sets, one search per terminal."""
    _check_parameters(inst, ell, theta)
    members = set()
    for i, s in enumerate(inst.terminals):
        if i != ell:
            members |= boundary(inst, x, s, theta).members
    return make_node_cut(inst, members, ell=ell, theta=theta, method="union")


def round_node_randomized(
    inst: NodeInstance,
    x: FractionalSolution,
    seed: Optional[int] = None,
    table: Optional[NearTerminalTable] = None,
    trial: Optional[int] = None,
) -> CutSolution:
    """
    Randomized node rounding: ell uniform, then theta on (0, min(1, D)/2).

    Expected cost is at most 2(1 - 1/k) lp_cost. Passing ``table`` skips
    the feasibility check. A missing seed is drawn and recorded in the cut.
    """
    if table is None:
        table, _ = feasible_table(inst, x)
    seed = resolve_seed(seed)
    rng = make_rng(seed, trial)
    ell = int(rng.integers(inst.k))
    theta = HALF * _scale(table.terminal_distance()) * draw_unit(rng)
    members = _cut_members(inst, x, table, ell, theta)
    return make_node_cut(
        inst, members, ell=ell, theta=theta, seed=seed, method="boundary"
    )


def round_node_deterministic(inst: NodeInstance, x: FractionalSolution) -> CutSolution:
    """
    Derandomized node rounding.

    Every node v with x_v > 0 has the intervals ``[e_i, min(d_i, U))`` for
    its nearest (i = a_1) and second nearest (i = a_2) terminal, e_i being
    the label distance v was entered from and U = min(1, D) / 2. The cut
    weight for ell is ``A(theta) + D_ell(theta)`` where A sums the first
    intervals and D_ell swaps first for second intervals of the nodes whose
    nearest terminal is s_ell. One sweep over the sorted end points keeps
    A and all D_ell, and the cheapest (ell, theta) wins. Its cost is at most
    2(1 - 1/k) lp_cost.
    """
    table, distance = feasible_table(inst, x)
    upper = HALF * _scale(distance)
    k = inst.k
    lo, hi, column, weight = [], [], [], []
    for v in range(inst.n):
        if x.values[v] <= 0 or v in inst.terminal_set:
            continue
        first = table.nearest(v, 0)
        if first is None:
            continue
        a1, d1 = first
        w = inst.weights[v]
        start, end = table.entry(v, 0), min(d1, upper)
        lo += [start, start]
        hi += [end, end]
        column += [0, 1 + a1]
        weight += [w, -w]
        d2 = table.distance(v, 1)
        if d2 < INF:
            lo.append(table.entry(v, 1))
            hi.append(min(d2, upper))
            column.append(1 + a1)
            weight.append(w)

    mixing = np.zeros((k + 1, k))
    mixing[0, :] = 1.0
    mixing[1:, :] = np.eye(k)
    theta, ell, sweep_cost = sweep_minimum(
        np.array(lo, dtype=float),
        np.array(hi, dtype=float),
        np.array(column, dtype=int),
        np.array(weight, dtype=float),
        mixing,
        upper,
    )
    members = _cut_members(inst, x, table, ell, theta)
    cut = make_node_cut(inst, members, ell=ell, theta=theta, method="sweep")
    logger.info(
        "Node sweep picked ell %d, theta %.6g with cut cost %.6g (sweep %.6g)",
        ell,
        theta,
        cut.cost,
        sweep_cost,
    )
    return cut


def verify_node_cut(inst: NodeInstance, cut: CutSolution) -> CutCertificate:
    """
    Check that removing the cut nodes disconnects every terminal pair.

    Raises:
        InvalidCutError: If the cut holds a terminal or an infinite-weight node.
    """
    if cut.kind != "node":
        raise InvalidCutError("verify_node_cut expects a node cut")
    for v in cut.members:
        if v in inst.terminal_set:
            raise InvalidCutError(f"node {v} is a terminal")
        if inst.weights[v] == INF:
            raise InvalidCutError(f"node {v} has infinite weight")
    graph = nx.Graph()
    graph.add_nodes_from(v for v in range(inst.n) if v not in cut.members)
    graph.add_edges_from(
        (u, v) for u, v in inst.edges if u not in cut.members and v not in cut.members
    )
    for s in inst.terminals:
        reached = nx.node_connected_component(graph, s) & (inst.terminal_set - {s})
        if reached:
            target = min(reached)
            path = tuple(nx.shortest_path(graph, s, target))
            return CutCertificate(False, (s, target), path)
    return CutCertificate(True)


def run_node_trials(
    inst: NodeInstance,
    x: FractionalSolution,
    trials: int,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[CutSolution]:
    """Monte Carlo node rounding, ordered by trial index."""
    table, _ = feasible_table(inst, x)
    seed = resolve_seed(seed)
    workers = workers or mc_settings.get_threads()

    def one(trial: int) -> CutSolution:
        return round_node_randomized(inst, x, seed, table=table, trial=trial)

    if workers == 1:
        return [one(trial) for trial in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(trials)))
