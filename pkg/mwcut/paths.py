"""
Shortest-path primitives under fractional lengths.

The kernels work on an adjacency list ``adjacency[u] = [(v, length, id), ...]``
so the same code serves arc lengths (directed instances) and node lengths
(undirected node-weighted instances, where stepping onto ``v`` costs
``x_v`` and a search from ``s`` starts at ``x_s``).
"""

import logging
from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from typing import List, Optional, Sequence, Tuple, Union

from mwcut.core import INF, DirectedInstance, FractionalSolution, Instance, NodeInstance

logger = logging.getLogger(__name__)

Adjacency = List[List[Tuple[int, float, int]]]
Lengths = Union[FractionalSolution, Sequence[float]]


@dataclass(frozen=True)
class DistanceTable:
    """
    Single-source distances with a shortest-path tree.

    ``pred[v]`` is the node before ``v`` and ``via[v]`` the arc (or edge)
    used to reach it; both are -1 for the source and unreachable nodes.
    """

    source: int
    dist: Tuple[float, ...]
    pred: Tuple[int, ...]
    via: Tuple[int, ...]

    def path_to(self, v: int) -> Tuple[int, ...]:
        """Nodes of a shortest path from the source to ``v``."""
        if self.dist[v] == INF:
            return ()
        nodes = [v]
        while v != self.source:
            v = self.pred[v]
            nodes.append(v)
        return tuple(reversed(nodes))

    def arcs_to(self, v: int) -> Tuple[int, ...]:
        """Arc ids of a shortest path from the source to ``v``."""
        if self.dist[v] == INF:
            return ()
        ids = []
        while v != self.source:
            ids.append(self.via[v])
            v = self.pred[v]
        return tuple(reversed(ids))


@dataclass(frozen=True)
class NearTerminalTable:
    """
    For every node, up to h ``(terminal index, distance)`` pairs.

    Terminal indices are positions in ``terminals``. Pairs are ordered by
    distance, ties by terminal index, and distances run from the terminal
    to the node. ``entries[v][rank]`` is the label distance of the node the
    search stepped from (0 at a source), so ``distance - entry`` is exactly
    the length charged for the last step.
    """

    terminals: Tuple[int, ...]
    labels: Tuple[Tuple[Tuple[int, float], ...], ...]
    entries: Tuple[Tuple[float, ...], ...] = ()

    def nearest(self, v: int, rank: int = 0) -> Optional[Tuple[int, float]]:
        """The ``rank``-th nearest pair of ``v``, or None if missing."""
        row = self.labels[v]
        return row[rank] if rank < len(row) else None

    def distance(self, v: int, rank: int = 0) -> float:
        pair = self.nearest(v, rank)
        return pair[1] if pair is not None else INF

    def entry(self, v: int, rank: int = 0) -> float:
        row = self.entries[v]
        return row[rank] if rank < len(row) else INF

    def terminal_distance(self) -> float:
        """
        Minimum distance between two distinct terminals.

        With h >= 2 the nearest other terminal of every terminal is among
        its labels, so this matches ``min_interterminal_distance``.
        """
        best = INF
        for i, s in enumerate(self.terminals):
            for j, d in self.labels[s]:
                if j != i and d < best:
                    best = d
        return best


@dataclass(frozen=True)
class TerminalPair:
    """The closest ordered terminal pair and a shortest path between them."""

    distance: float
    source: int
    target: int
    nodes: Tuple[int, ...]
    arcs: Tuple[int, ...]


def lengths_of(lengths: Lengths) -> Sequence[float]:
    if isinstance(lengths, FractionalSolution):
        return lengths.values
    return lengths


def edge_adjacency(inst: DirectedInstance, lengths: Lengths) -> Adjacency:
    """Adjacency of a directed instance under arc lengths."""
    values = lengths_of(lengths)
    if len(values) != inst.m:
        raise ValueError(f"expected {inst.m} arc lengths, got {len(values)}")
    adjacency = [[] for _ in range(inst.n)]
    for index, arc in enumerate(inst.arcs):
        adjacency[arc.tail].append((arc.head, values[index], index))
    return adjacency


def node_adjacency(inst: NodeInstance, lengths: Lengths) -> Adjacency:
    """Adjacency of a node-weighted instance: stepping onto v costs x_v."""
    values = lengths_of(lengths)
    if len(values) != inst.n:
        raise ValueError(f"expected {inst.n} node lengths, got {len(values)}")
    adjacency = [[] for _ in range(inst.n)]
    for index, (u, v) in enumerate(inst.edges):
        adjacency[u].append((v, values[v], index))
        adjacency[v].append((u, values[u], index))
    return adjacency


def adjacency_for(
    inst: Instance, lengths: Lengths
) -> Tuple[Adjacency, Sequence[float]]:
    """Adjacency plus per-node start offsets for either instance type."""
    if isinstance(inst, DirectedInstance):
        return edge_adjacency(inst, lengths), [0.0] * inst.n
    return node_adjacency(inst, lengths), lengths_of(lengths)


def dijkstra(adjacency: Adjacency, source: int, start: float = 0.0) -> DistanceTable:
    """Priority-queue Dijkstra from ``source`` with nonnegative lengths."""
    n = len(adjacency)
    dist = [INF] * n
    pred = [-1] * n
    via = [-1] * n
    done = [False] * n
    dist[source] = start
    heap = [(start, source)]
    while heap:
        d, u = heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, length, index in adjacency[u]:
            candidate = d + length
            if candidate < dist[v] and candidate < INF:
                dist[v] = candidate
                pred[v] = u
                via[v] = index
                heappush(heap, (candidate, v))
    return DistanceTable(source, tuple(dist), tuple(pred), tuple(via))


def sssp(inst: DirectedInstance, lengths: Lengths, source: int) -> DistanceTable:
    """
    Shortest-path distances from ``source`` under arc lengths.

    Args:
        inst: Directed instance.
        lengths: One nonnegative length per arc; infinite-weight arcs take
            whatever length is given here (usually 0).
        source: Source node.

    Returns:
        DistanceTable, infinite for unreachable nodes.
    """
    return dijkstra(edge_adjacency(inst, lengths), source)


def nearest_labels(
    adjacency: Adjacency,
    sources: Sequence[int],
    h: int,
    starts: Optional[Sequence[float]] = None,
) -> Tuple[List[List[Tuple[int, float]]], List[List[float]]]:
    """
    Multi-label Dijkstra keeping the h nearest distinct sources per node.

    Returns:
        ``(labels, entries)`` where ``labels[v]`` lists ``(source index,
        distance)`` pairs and ``entries[v]`` the label distance of the node
        each pair was reached from.
    """
    n = len(adjacency)
    labels = [[] for _ in range(n)]
    entries = [[] for _ in range(n)]
    owners = [[] for _ in range(n)]
    heap = [
        (starts[s] if starts is not None else 0.0, i, s, 0.0)
        for i, s in enumerate(sources)
    ]
    heapify(heap)
    push, pop = heappush, heappop
    while heap:
        d, i, v, entry = pop(heap)
        owner = owners[v]
        if len(owner) >= h or i in owner:
            continue
        owner.append(i)
        labels[v].append((i, d))
        entries[v].append(entry)
        for w, length, _ in adjacency[v]:
            reached = owners[w]
            if len(reached) < h and i not in reached:
                candidate = d + length
                if candidate < INF:
                    push(heap, (candidate, i, w, d))
    return labels, entries


def h_nearest_terminals(inst: Instance, lengths: Lengths, h: int) -> NearTerminalTable:
    """
    For every node, the h terminals from which it is closest.

    Args:
        inst: Directed or node-weighted instance.
        lengths: Arc lengths (directed) or node lengths (node-weighted).
        h: Number of terminals to keep, ``1 <= h <= k``.

    Returns:
        NearTerminalTable; ties are broken by terminal index.
    """
    if not 1 <= h <= inst.k:
        raise ValueError(f"h must lie in 1..{inst.k}, got {h}")
    adjacency, starts = adjacency_for(inst, lengths)
    labels, entries = nearest_labels(adjacency, inst.terminals, h, starts)
    return NearTerminalTable(
        terminals=tuple(inst.terminals),
        labels=tuple(tuple(row) for row in labels),
        entries=tuple(tuple(row) for row in entries),
    )


def closest_pair(
    adjacency: Adjacency,
    terminals: Sequence[int],
    starts: Optional[Sequence[float]] = None,
) -> Optional[TerminalPair]:
    """
    Shortest path between any ordered pair of distinct terminals.

    Runs the two-label search and stops at the first label of one terminal
    settled on another, which is the global minimum since labels settle in
    nondecreasing order. Returns None when no terminal reaches another.
    """
    index_of = {s: i for i, s in enumerate(terminals)}
    n = len(adjacency)
    count = [0] * n
    seen = [set() for _ in range(n)]
    pred = {}
    heap = []
    for i, s in enumerate(terminals):
        heappush(heap, (starts[s] if starts is not None else 0.0, i, s, -1, -1))
    while heap:
        d, i, v, u, step = heappop(heap)
        if count[v] >= 2 or i in seen[v]:
            continue
        count[v] += 1
        seen[v].add(i)
        pred[(v, i)] = (u, step)
        j = index_of.get(v)
        if j is not None and j != i:
            nodes, arcs = [v], []
            while (v, i) in pred and pred[(v, i)][0] != -1:
                u, step = pred[(v, i)]
                arcs.append(step)
                nodes.append(u)
                v = u
            return TerminalPair(
                distance=d,
                source=terminals[i],
                target=terminals[j],
                nodes=tuple(reversed(nodes)),
                arcs=tuple(reversed(arcs)),
            )
        for w, length, nxt in adjacency[v]:
            if count[w] < 2 and i not in seen[w] and d + length < INF:
                heappush(heap, (d + length, i, w, v, nxt))
    return None


def closest_terminal_pair(inst: Instance, lengths: Lengths) -> Optional[TerminalPair]:
    """Closest ordered terminal pair of ``inst`` under ``lengths``."""
    adjacency, starts = adjacency_for(inst, lengths)
    return closest_pair(adjacency, inst.terminals, starts)


def min_interterminal_distance(inst: Instance, lengths: Lengths) -> float:
    """
    Minimum distance between two distinct terminals.

    Node-weighted distances count the lengths of both endpoints. Returns
    infinity when no terminal reaches another.
    """
    pair = closest_terminal_pair(inst, lengths)
    return pair.distance if pair is not None else INF
