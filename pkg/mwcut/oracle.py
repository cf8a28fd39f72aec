"""
Exact exponential-time references for small instances.

Both multiway cut oracles branch on paths: find a path that still joins two
terminals, then for each cuttable member on it open a branch that cuts that
member and forbids the members tried before it. Every feasible cut lies in
exactly one branch, so the search is exhaustive.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import networkx as nx

from mwcut import settings as mc_settings
from mwcut.core import (
    INF,
    CutSolution,
    DirectedInstance,
    NodeInstance,
    make_edge_cut,
    make_node_cut,
)
from mwcut.exceptions import InfeasibleInstanceError, InstanceError, OracleLimitError

logger = logging.getLogger(__name__)


class _Search:
    """Depth-first branch-and-bound over cuttable groups."""

    def __init__(
        self,
        graph,
        terminals,
        cost: Dict[int, float],
        members: Dict[int, Tuple[int, ...]],
    ):
        self.graph = graph
        self.terminals = terminals
        self.cost = cost
        self.members = members
        self.best_cost = INF
        self.best_key: Optional[Tuple[int, ...]] = None
        self.branches = 0

    def violating_path(
        self, cut: frozenset, forbidden: frozenset
    ) -> Optional[List[int]]:
        """Groups on a terminal path with the fewest cuttable groups, or None."""
        raise NotImplementedError

    def key(self, cut: frozenset) -> Tuple[int, ...]:
        return tuple(sorted(m for g in cut for m in self.members[g]))

    def run(
        self,
        cut: frozenset = frozenset(),
        forbidden: frozenset = frozenset(),
        spent: float = 0.0,
    ):
        self.branches += 1
        if spent > self.best_cost:
            return
        path = self.violating_path(cut, forbidden)
        if path is None:
            key = self.key(cut)
            if spent < self.best_cost or (
                spent == self.best_cost and key < self.best_key
            ):
                self.best_cost, self.best_key = spent, key
            return
        cuttable = [g for g in path if g not in forbidden and self.cost[g] < INF]
        cuttable.sort(key=lambda g: (-self.cost[g], g))
        tried = []
        for group in cuttable:
            self.run(
                cut | {group}, forbidden | frozenset(tried), spent + self.cost[group]
            )
            tried.append(group)


class _ArcSearch(_Search):
    def violating_path(self, cut, forbidden):
        def weight(u, v, data):
            group = data["group"]
            if group in cut:
                return None
            return 0 if group in forbidden or self.cost[group] == INF else 1

        best = None
        for s in self.terminals:
            dist, paths = nx.single_source_dijkstra(self.graph, s, weight=weight)
            for t in self.terminals:
                if t != s and t in dist and (best is None or dist[t] < best[0]):
                    best = (dist[t], paths[t])
        if best is None:
            return None
        nodes = best[1]
        return [self.graph[u][v]["group"] for u, v in zip(nodes, nodes[1:])]


class _NodeSearch(_Search):
    def violating_path(self, cut, forbidden):
        def entry(v):
            cuttable = v in self.cost and v not in forbidden and self.cost[v] < INF
            return 1 if cuttable else 0

        view = nx.subgraph_view(self.graph, filter_node=lambda v: v not in cut)

        def weight(u, v, data):
            return (entry(u) + entry(v)) / 2

        best = None
        for s in self.terminals:
            dist, paths = nx.single_source_dijkstra(view, s, weight=weight)
            for t in self.terminals:
                if t != s and t in dist and (best is None or dist[t] < best[0]):
                    best = (dist[t], paths[t])
        if best is None:
            return None
        return [v for v in best[1][1:-1] if v in self.cost]


def _collapse(inst: DirectedInstance):
    """Merge parallel arcs; a group is infinite if any of its arcs is."""
    index: Dict[Tuple[int, int], int] = {}
    members = defaultdict(list)
    cost: Dict[int, float] = defaultdict(float)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(inst.n))
    for a, arc in enumerate(inst.arcs):
        pair = (arc.tail, arc.head)
        if pair not in index:
            index[pair] = len(index)
            graph.add_edge(arc.tail, arc.head, group=index[pair])
        group = index[pair]
        members[group].append(a)
        cost[group] += arc.weight
    return graph, dict(cost), {g: tuple(m) for g, m in members.items()}


def exact_min_dirmc(inst: DirectedInstance) -> CutSolution:
    """
    Minimum directed multiway cut by exhaustive branch-and-bound.

    Ties between optimal cuts go to the lexicographically smallest sorted
    member list.

    Raises:
        OracleLimitError: Above ``MWCUT_ORACLE_MAX_ARCS`` finite arcs.
        InfeasibleInstanceError: If infinite arcs alone join two terminals.
    """
    limit = mc_settings.get_oracle_max_arcs()
    if len(inst.finite_arcs) > limit:
        raise OracleLimitError(
            f"{len(inst.finite_arcs)} finite arcs exceed the oracle limit of {limit}"
        )
    graph, cost, members = _collapse(inst)
    search = _ArcSearch(graph, inst.terminals, cost, members)
    search.run()
    if search.best_key is None:
        logger.error("No finite multiway cut exists")
        raise InfeasibleInstanceError(
            "terminals are joined by infinite-weight arcs only"
        )
    logger.info(
        "Oracle found cut of cost %s after %d branches",
        search.best_cost,
        search.branches,
    )
    return make_edge_cut(inst, search.best_key, method="oracle")


def exact_min_nodemc(inst: NodeInstance) -> CutSolution:
    """
    Minimum node multiway cut by exhaustive branch-and-bound.

    Raises:
        OracleLimitError: Above ``MWCUT_ORACLE_MAX_NODES`` removable nodes.
        InfeasibleInstanceError: If no set of removable nodes separates the
            terminals.
    """
    removable = [v for v in range(inst.n) if inst.removable(v)]
    limit = mc_settings.get_oracle_max_nodes()
    if len(removable) > limit:
        raise OracleLimitError(
            f"{len(removable)} removable nodes exceed the oracle limit of {limit}"
        )
    graph = nx.Graph()
    graph.add_nodes_from(range(inst.n))
    graph.add_edges_from(inst.edges)
    cost = {
        v: inst.weights[v] for v in range(inst.n) if v not in inst.terminal_set
    }
    search = _NodeSearch(graph, inst.terminals, cost, {v: (v,) for v in cost})
    search.run()
    if search.best_key is None:
        logger.error("No finite node multiway cut exists")
        raise InfeasibleInstanceError(
            "terminals cannot be separated by finite-weight nodes"
        )
    logger.info(
        "Oracle found node cut of cost %s after %d branches",
        search.best_cost,
        search.branches,
    )
    return make_node_cut(inst, search.best_key, method="oracle")


def exact_one_way_cut(
    inst: DirectedInstance, from_terminal: int, to_terminal: int
) -> CutSolution:
    """
    Minimum arc set destroying every ``from_terminal -> to_terminal`` path.

    Solved by max-flow; parallel arcs add capacity and infinite arcs are
    uncapacitated.

    Raises:
        InfeasibleInstanceError: If an infinite path joins the two nodes.
    """
    if from_terminal == to_terminal:
        raise InstanceError("one-way cut needs two distinct nodes")
    graph = nx.DiGraph()
    graph.add_nodes_from(range(inst.n))
    infinite = set()
    capacity: Dict[Tuple[int, int], float] = defaultdict(float)
    for arc in inst.arcs:
        pair = (arc.tail, arc.head)
        if arc.weight == INF:
            infinite.add(pair)
        else:
            capacity[pair] += arc.weight
    for pair in set(capacity) | infinite:
        if pair in infinite:
            graph.add_edge(*pair)
        else:
            graph.add_edge(*pair, capacity=capacity[pair])
    try:
        value, (reachable, _) = nx.minimum_cut(graph, from_terminal, to_terminal)
    except nx.NetworkXUnbounded:
        raise InfeasibleInstanceError(
            f"an infinite path joins {from_terminal + 1} to {to_terminal + 1}"
        ) from None
    members = [
        a
        for a, arc in enumerate(inst.arcs)
        if arc.tail in reachable and arc.head not in reachable
    ]
    logger.info("One-way cut value %s", value)
    return make_edge_cut(
        inst, members, method="max-flow", source=from_terminal, target=to_terminal
    )
