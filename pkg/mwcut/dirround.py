"""
Rounding fractional solutions of the directed distance LP.

Super terminals t_1..t_k, with zero-length arcs t_i -> s_j for j != i, turn
multiway cut into separating each pair (t_i, s_i). Cutting the arcs that
leave every ball B(t_i, theta) yields a feasible cut; the interval variant
cuts arc (u, v) whenever theta falls in [d(t_i, u), d(t_i, u) + x_e) for
some i, which only needs the two terminals nearest to u and costs at most
2 x_e in expectation.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from mwcut import settings as mc_settings
from mwcut.core import (
    INF,
    Arc,
    CutSolution,
    DirectedInstance,
    FractionalSolution,
    draw_unit,
    edge_solution,
    make_edge_cut,
    make_rng,
    resolve_seed,
)
from mwcut.exceptions import InstanceError, InvalidCutError
from mwcut.lp import feasible_table, require_feasible
from mwcut.paths import sssp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AugmentedInstance:
    """
    ``base`` plus super terminals ``t_i = base.n + i``.

    ``instance`` holds the base arcs followed by the infinite arcs
    ``(t_i, s_j)``, j != i; ``lengths`` extends x with zeros on them.
    """

    base: DirectedInstance
    instance: DirectedInstance
    lengths: FractionalSolution
    super_terminals: Tuple[int, ...]


@dataclass(frozen=True)
class CutIntervals:
    """
    Per-arc cut intervals ``[lo1, lo1 + x)`` and ``[lo2, lo2 + x)``.

    ``lo1`` / ``lo2`` are the distances to the arc's tail from its nearest
    and second-nearest terminals (infinity when missing). Arcs with x = 0
    or infinite weight have empty intervals. Theta ranges over
    ``(0, upper)`` with ``upper = min(1, D)`` for the minimum terminal
    distance D, which may sit a tolerance below 1.
    """

    lo1: np.ndarray
    lo2: np.ndarray
    length: np.ndarray
    upper: float = 1.0

    @property
    def hi1(self) -> np.ndarray:
        return self.lo1 + self.length

    @property
    def hi2(self) -> np.ndarray:
        return self.lo2 + self.length

    def members_at(self, theta: float) -> np.ndarray:
        """Indices of the arcs whose intervals contain ``theta``."""
        live = self.length > 0
        first = (self.lo1 <= theta) & (theta < self.hi1)
        second = (self.lo2 <= theta) & (theta < self.hi2)
        return np.flatnonzero(live & (first | second))


@dataclass(frozen=True)
class CutCertificate:
    """Verdict of a cut check; truthy when every terminal pair is separated."""

    feasible: bool
    pair: Optional[Tuple[int, int]] = None
    path: Tuple[int, ...] = ()

    def __bool__(self):
        return self.feasible


def _check_theta(theta: float, upper: float) -> None:
    if not 0 < theta < upper:
        raise InstanceError(f"theta must lie in (0, {upper:g}), got {theta}")


def augment_with_super_terminals(
    inst: DirectedInstance, x: FractionalSolution
) -> AugmentedInstance:
    """
    Add super terminals t_1..t_k and the k(k-1) arcs ``(t_i, s_j)``.
    """
    supers = tuple(inst.n + i for i in range(inst.k))
    extra = tuple(
        Arc(t_i, s_j, INF)
        for i, t_i in enumerate(supers)
        for j, s_j in enumerate(inst.terminals)
        if i != j
    )
    instance = DirectedInstance(
        n=inst.n + inst.k, arcs=inst.arcs + extra, terminals=inst.terminals
    )
    lengths = FractionalSolution("edge", tuple(x.values) + (0.0,) * len(extra))
    return AugmentedInstance(inst, instance, lengths, supers)


def round_at_theta(
    inst: DirectedInstance, x: FractionalSolution, theta: float
) -> CutSolution:
    """
    Ball rounding at a fixed radius: cut every arc leaving some B(t_i, theta).

    Theta is taken relative to ``min(1, D)``, so a solution accepted a
    tolerance below 1 is cut at the radius ``theta * D``.

    Raises:
        InfeasibleSolutionError: If ``x`` is not feasible.
    """
    _check_theta(theta, 1.0)
    radius = theta * min(1.0, require_feasible(inst, x))
    augmented = augment_with_super_terminals(inst, x)
    members = set()
    for t_i in augmented.super_terminals:
        dist = sssp(augmented.instance, augmented.lengths, t_i).dist
        for a, arc in enumerate(inst.arcs):
            if dist[arc.tail] <= radius < dist[arc.head]:
                members.add(a)
    return make_edge_cut(inst, members, theta=radius, method="ball")


def build_cut_intervals(inst: DirectedInstance, x: FractionalSolution) -> CutIntervals:
    """
    Cut intervals of every arc from the two terminals nearest to its tail.

    Raises:
        InfeasibleSolutionError: If ``x`` is not feasible.
    """
    table, distance = feasible_table(inst, x)
    first = np.array([table.distance(v, 0) for v in range(inst.n)], dtype=float)
    second = np.array([table.distance(v, 1) for v in range(inst.n)], dtype=float)
    tails = np.fromiter((arc.tail for arc in inst.arcs), dtype=int, count=inst.m)
    length = x.as_array()
    length[np.isinf(inst.weights)] = 0.0
    return CutIntervals(first[tails], second[tails], length, min(1.0, distance))


def round_randomized(
    inst: DirectedInstance,
    x: FractionalSolution,
    seed: Optional[int] = None,
    intervals: Optional[CutIntervals] = None,
    trial: Optional[int] = None,
) -> CutSolution:
    """
    Interval rounding at a random theta in (0, min(1, D)).

    Args:
        inst: Directed instance.
        x: Feasible fractional solution.
        seed: Generator seed; drawn and recorded in the cut when None.
        intervals: Precomputed intervals; skips the feasibility check.
        trial: Trial index; derives the generator from ``(seed, trial)``.

    Returns:
        A feasible cut whose expected cost is at most 2 * lp_cost.
    """
    if intervals is None:
        intervals = build_cut_intervals(inst, x)
    seed = resolve_seed(seed)
    theta = intervals.upper * draw_unit(make_rng(seed, trial))
    members = intervals.members_at(theta)
    return make_edge_cut(inst, members, theta=theta, seed=seed, method="interval")


def sweep_minimum(
    lo: np.ndarray,
    hi: np.ndarray,
    column: np.ndarray,
    weight: np.ndarray,
    mixing: np.ndarray,
    upper: float,
    order_key: Optional[np.ndarray] = None,
) -> Tuple[float, int, float]:
    """
    Minimise a piecewise-constant cut weight over theta in (0, upper).

    Each interval ``[lo, hi)`` adds ``weight`` to state column ``column``;
    the cost of candidate ``c`` at theta is ``state(theta) @ mixing[:, c]``.
    Endpoints are processed in (value, order_key) order.

    Returns:
        ``(theta, candidate, cost)`` for the cheapest piece, earliest piece
        and lowest candidate on ties.
    """
    columns, candidates = mixing.shape
    keep = lo < hi
    lo, hi, column, weight = lo[keep], hi[keep], column[keep], weight[keep]
    if order_key is None:
        order_key = np.arange(len(keep))
    order_key = order_key[keep]
    if len(lo) == 0:
        return upper / 2, 0, 0.0

    values = np.concatenate([lo, hi])
    points = np.unique(values)
    state = np.zeros((len(points), columns))
    for c in range(columns):
        selected_lo = column == c
        event_value = np.concatenate([lo[selected_lo], hi[selected_lo]])
        if len(event_value) == 0:
            continue
        event_weight = np.concatenate([weight[selected_lo], -weight[selected_lo]])
        event_key = np.concatenate([order_key[selected_lo], order_key[selected_lo]])
        order = np.lexsort((event_key, event_value))
        running = np.cumsum(event_weight[order])
        last = np.searchsorted(event_value[order], points, side="right") - 1
        state[:, c] = np.where(last >= 0, running[np.maximum(last, 0)], 0.0)

    costs = state @ mixing
    following = np.append(points[1:], INF)
    usable = (points < upper) & (following > 0)
    thetas = np.where(points > 0, points, np.minimum(following, upper) / 2)

    best = (INF, 0, upper / 2)
    if points[0] > 0:
        best = (0.0, 0, min(points[0], upper) / 2)
    rows = np.flatnonzero(usable)
    if len(rows):
        choice = costs[rows].argmin(axis=1)
        row_cost = costs[rows, choice]
        g = int(np.argmin(row_cost))
        if row_cost[g] < best[0]:
            best = (float(row_cost[g]), int(choice[g]), float(thetas[rows[g]]))
    cost, candidate, theta = best
    return theta, candidate, cost


def round_deterministic(inst: DirectedInstance, x: FractionalSolution) -> CutSolution:
    """
    Derandomized interval rounding.

    Sorts the interval endpoints, evaluates the cut weight on every piece
    of (0, min(1, D)) in one cumulative pass and returns the cheapest cut,
    whose cost is at most 2 * lp_cost.

    Raises:
        InfeasibleSolutionError: If ``x`` is not feasible.
    """
    intervals = build_cut_intervals(inst, x)
    lo1, hi1, lo2, hi2 = intervals.lo1, intervals.hi1, intervals.lo2, intervals.hi2
    live = intervals.length > 0
    # overlapping intervals of one arc merge, so each arc counts once
    merged = live & (lo2 <= hi1)
    separate = live & ~merged & np.isfinite(lo2)
    index = np.arange(inst.m)
    lo = np.concatenate([lo1[live], lo2[separate]])
    hi = np.concatenate([np.where(merged, hi2, hi1)[live], hi2[separate]])
    weight = np.concatenate([inst.weights[live], inst.weights[separate]])
    key = np.concatenate([index[live], index[separate]])
    column = np.zeros(len(lo), dtype=int)
    theta, _, sweep_cost = sweep_minimum(
        lo, hi, column, weight, np.ones((1, 1)), intervals.upper, key
    )
    cut = make_edge_cut(
        inst, intervals.members_at(theta), theta=theta, method="sweep"
    )
    logger.info("Sweep picked theta %.6g with cut cost %.6g", theta, cut.cost)
    if not math.isclose(cut.cost, sweep_cost, rel_tol=1e-9, abs_tol=1e-9):
        logger.debug("Sweep estimate %.12g, exact %.12g", sweep_cost, cut.cost)
    return cut


def _remaining_graph(n: int, arcs: Sequence[Arc], removed: frozenset) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(
        (arc.tail, arc.head) for a, arc in enumerate(arcs) if a not in removed
    )
    return graph


def _separation(graph: nx.DiGraph, terminals: Sequence[int]) -> CutCertificate:
    terminal_set = set(terminals)
    for s in terminals:
        reached = nx.descendants(graph, s) & (terminal_set - {s})
        if reached:
            target = min(reached)
            path = tuple(nx.shortest_path(graph, s, target))
            return CutCertificate(False, (s, target), path)
    return CutCertificate(True)


def verify_cut(inst: DirectedInstance, cut: CutSolution) -> CutCertificate:
    """
    Check that removing the cut arcs disconnects every ordered terminal pair.

    Raises:
        InvalidCutError: If the cut is not an edge cut or has an infinite member.
    """
    if cut.kind != "edge":
        raise InvalidCutError("verify_cut expects an edge cut")
    for a in cut.members:
        if inst.arcs[a].weight == INF:
            raise InvalidCutError(f"arc {a} has infinite weight")
    return _separation(_remaining_graph(inst.n, inst.arcs, cut.members), inst.terminals)


def bidirect(inst: DirectedInstance, x: Optional[FractionalSolution] = None):
    """
    Both orientations of every arc of an undirected instance.

    Edge e becomes arcs 2e and 2e + 1; lengths are copied to both.
    """
    arcs = []
    for arc in inst.arcs:
        arcs.append(arc)
        arcs.append(Arc(arc.head, arc.tail, arc.weight))
    both = DirectedInstance(n=inst.n, arcs=tuple(arcs), terminals=inst.terminals)
    if x is None:
        return both
    return both, edge_solution(value for value in x.values for _ in range(2))


def verify_undirected_cut(inst: DirectedInstance, cut: CutSolution) -> CutCertificate:
    """Check an undirected edge cut, each member removing both orientations."""
    removed = frozenset(2 * e + side for e in cut.members for side in (0, 1))
    both = bidirect(inst)
    return _separation(_remaining_graph(both.n, both.arcs, removed), inst.terminals)


def round_edge_undirected(
    inst: DirectedInstance, x: FractionalSolution, theta: float
) -> CutSolution:
    """
    Ball rounding for undirected edge-weighted multiway cut.

    Every arc of ``inst`` stands for one undirected edge. Removes the edges
    with exactly one endpoint in B(s_i, theta) for some terminal, theta in
    (0, 1/2) scaled by ``min(1, D)``; the expected cost over theta is at
    most 2 * lp_cost.
    """
    _check_theta(theta, 0.5)
    both, lengths = bidirect(inst, x)
    radius = theta * min(1.0, require_feasible(both, lengths))
    members = set()
    for s in inst.terminals:
        dist = sssp(both, lengths, s).dist
        for e, arc in enumerate(inst.arcs):
            if (dist[arc.tail] <= radius) != (dist[arc.head] <= radius):
                members.add(e)
    return make_edge_cut(inst, members, theta=radius, method="undirected-ball")


def run_trials(
    inst: DirectedInstance,
    x: FractionalSolution,
    trials: int,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[CutSolution]:
    """
    Monte Carlo interval rounding.

    Trial i draws theta from the generator derived from ``(seed, i)``;
    results are ordered by trial index whatever the worker count.
    """
    intervals = build_cut_intervals(inst, x)
    seed = resolve_seed(seed)
    workers = workers or mc_settings.get_threads()

    def one(trial: int) -> CutSolution:
        return round_randomized(inst, x, seed, intervals=intervals, trial=trial)

    if workers == 1:
        return [one(trial) for trial in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(trials)))


def cut_frequencies(cuts: Sequence[CutSolution], size: int) -> np.ndarray:
    """Fraction of cuts containing each member index."""
    counts = np.zeros(size)
    for cut in cuts:
        counts[list(cut.members)] += 1
    return counts / max(len(cuts), 1)
