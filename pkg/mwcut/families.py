"""
Instance generators: the recursive integrality-gap family for st-Bi-Cut, the
fractionality family with a unique 1/h-integral optimum, and seeded random
instances.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple

import networkx as nx
import numpy as np

from mwcut import settings as mc_settings
from mwcut.core import (
    INF,
    Arc,
    DirectedInstance,
    FractionalSolution,
    Instance,
    NodeInstance,
    edge_solution,
)
from mwcut.exceptions import InstanceError, SolverError

logger = logging.getLogger(__name__)

_RECURRENCE_CHECK_LEVELS = 10


@dataclass(frozen=True)
class FamilyStats:
    """
    Closed-form reference values of a family member.

    ``level`` is i for the gap family and h for the fractionality family.
    ``pair_sum`` is the optimal ``x(u_i, u_i+1) + x(v_i, v_i+1)`` of the
    fractionality family and None otherwise.
    """

    level: int
    alpha: float
    one_way_cut: float
    two_way_cut: float
    lp_opt: float
    flow_opt: float
    pair_sum: Optional[float] = None


def gap_family_size(i: int) -> Tuple[int, int]:
    """``(nodes, finite arcs)`` of G_i: ``5 * 2**i - 1`` and ``3 * 2**i - 2``."""
    return 5 * 2**i - 1, 3 * 2**i - 2


def _check_level(i: int) -> None:
    if i < 0:
        raise InstanceError(f"level must be nonnegative, got {i}")
    limit = mc_settings.get_max_family_nodes()
    if i > 64 or gap_family_size(i)[0] > limit:
        raise InstanceError(f"G_{i} would exceed {limit} nodes")


def _build_gap_family(i: int):
    # G_0: s = 0, q = 1, r = 2, t = 3
    n, s, t = 4, 0, 3
    arcs = [(0, 1, INF), (3, 1, INF), (2, 0, INF), (2, 3, INF), (1, 2, 1.0)]
    values = [0.0, 0.0, 0.0, 0.0, 1.0]
    for _ in range(i):

        def copy(node, n=n, s=s, t=t):
            if node == s:
                return t
            return n + node - (1 if node > s else 0)

        center, v1, v2 = t, 2 * n - 1, 2 * n
        new_t = copy(t)
        arcs = (
            arcs
            + [(copy(u), copy(v), w) for u, v, w in arcs]
            + [
                (v1, center, 1.0),
                (center, v2, 1.0),
                (s, v1, INF),
                (new_t, v1, INF),
                (v2, s, INF),
                (v2, new_t, INF),
            ]
        )
        values = (
            [value / 2 for value in values] * 2 + [0.5, 0.5] + [0.0] * 4
        )
        n, t = 2 * n + 1, new_t
    return n, arcs, values, (s, t)


def gen_gap_family(i: int) -> DirectedInstance:
    """
    The level-i member G_i of the st-Bi-Cut integrality-gap family.

    G_0 has nodes s, q, r, t with the unit arc (q, r) and infinite arcs
    (s, q), (t, q), (r, s), (r, t). G_i glues two copies H, H' of G_{i-1}
    at a center v (H's t is H''s s), sets s = s_H and t = t_H', and adds
    nodes v_1, v_2 with unit arcs (v_1, v), (v, v_2) and infinite arcs
    (s, v_1), (t, v_1), (v_2, s), (v_2, t).

    Raises:
        InstanceError: If i is negative or G_i exceeds the node guard.
    """
    _check_level(i)
    n, arcs, _, terminals = _build_gap_family(i)
    logger.debug("Built G_%d with %d nodes and %d arcs", i, n, len(arcs))
    return DirectedInstance(
        n=n, arcs=tuple(Arc(u, v, w) for u, v, w in arcs), terminals=terminals
    )


def gap_family_solution(i: int) -> FractionalSolution:
    """
    The recursive optimal fractional solution of G_i.

    x(q, r) = 1 in G_0; G_i halves the solution of each copy and puts 1/2
    on both new unit arcs, for a cost of i + 1.
    """
    _check_level(i)
    _, _, values, _ = _build_gap_family(i)
    return edge_solution(values)


def gap_family_flow_value(i: int) -> float:
    """Flow value of the recursive flow, ``1 + 1/(2 - alpha_{i-1})``."""
    if i < 0:
        raise InstanceError(f"level must be nonnegative, got {i}")
    if i == 0:
        return 1.0
    return 1.0 + 1.0 / (2.0 - gap_alpha(i - 1))


def gap_alpha(i: int) -> float:
    return 2.0 - 1.0 / (i + 1)


def alpha_by_recurrence(i: int) -> float:
    """alpha_i from alpha_0 = 1 and alpha_{i+1} = (4 - alpha_i) / (3 - alpha_i)."""
    alpha = 1.0
    for _ in range(i):
        alpha = (4.0 - alpha) / (3.0 - alpha)
    return alpha


def gap_family_stats(i: int) -> FamilyStats:
    """
    Closed forms for G_i: alpha = 2 - 1/(i+1), two-way cut 2i + 1,
    one-way cut and LP optimum i + 1.
    """
    if i < 0:
        raise InstanceError(f"level must be nonnegative, got {i}")
    alpha = gap_alpha(i)
    if i <= _RECURRENCE_CHECK_LEVELS and not math.isclose(
        alpha, alpha_by_recurrence(i), rel_tol=1e-12
    ):
        raise SolverError(f"closed-form alpha_{i} disagrees with the recurrence")
    lp = float(i + 1)
    return FamilyStats(
        level=i,
        alpha=alpha,
        one_way_cut=lp,
        two_way_cut=float(2 * i + 1),
        lp_opt=lp,
        flow_opt=gap_family_flow_value(i),
    )


def _check_h(h: int) -> None:
    if h < 2:
        raise InstanceError(f"h must be at least 2, got {h}")
    if 2 * h + 2 > mc_settings.get_max_family_nodes():
        raise InstanceError(f"h = {h} exceeds the node guard")


def gen_fractionality_family(h: int) -> DirectedInstance:
    """
    Two-terminal instance whose only LP optimum puts 1/h on every finite arc.

    Nodes are s = 0, t = 1, u_i = i + 1 and v_i = h + i + 1 for i = 1..h.
    The chains (u_i, u_{i+1}) and (v_i, v_{i+1}) have weight 1; the arcs
    (s, u_1), (t, v_1), (v_h, t), (u_h, s), (u_{i+1}, v_i) and (v_{i+1}, u_i)
    are infinite.
    """
    _check_h(h)
    s, t = 0, 1

    def u(i):
        return i + 1

    def v(i):
        return h + i + 1

    arcs: List[Arc] = []
    arcs += [Arc(u(i), u(i + 1), 1.0) for i in range(1, h)]
    arcs += [Arc(v(i), v(i + 1), 1.0) for i in range(1, h)]
    arcs += [Arc(s, u(1), INF), Arc(t, v(1), INF), Arc(v(h), t, INF), Arc(u(h), s, INF)]
    arcs += [Arc(u(i + 1), v(i), INF) for i in range(1, h)]
    arcs += [Arc(v(i + 1), u(i), INF) for i in range(1, h)]
    return DirectedInstance(n=2 * h + 2, arcs=tuple(arcs), terminals=(s, t))


def fractionality_solution(h: int) -> FractionalSolution:
    """Length 1/h on every finite arc of ``gen_fractionality_family(h)``."""
    inst = gen_fractionality_family(h)
    return edge_solution(1.0 / h if arc.weight < INF else 0.0 for arc in inst.arcs)


def fractionality_stats(h: int) -> FamilyStats:
    """LP and flow optimum 2(h - 1)/h, pair sum 2/h."""
    _check_h(h)
    lp = 2.0 * (h - 1) / h
    two_way = 1.0 if h == 2 else 2.0
    return FamilyStats(
        level=h,
        alpha=two_way / lp,
        one_way_cut=1.0,
        two_way_cut=two_way,
        lp_opt=lp,
        flow_opt=lp,
        pair_sum=2.0 / h,
    )


def gen_random_instance(
    n: int,
    arc_density: float,
    k: int,
    weight_range: Tuple[int, int] = (1, 10),
    seed: Optional[int] = None,
    mode: Literal["dirmc", "nodemc"] = "dirmc",
) -> Instance:
    """
    Seeded random instance with every terminal pair connected.

    Draws G(n, p) graphs (directed in ``dirmc`` mode) with integer weights
    from ``weight_range`` until every ordered terminal pair is joined by a
    path. In ``nodemc`` mode terminals weigh infinity and edges between
    terminals are dropped, so the instance is canonical.

    Raises:
        InstanceError: On bad parameters or when no sample qualifies within
            ``MWCUT_RANDOM_MAX_ATTEMPTS`` draws.
    """
    if n < 2 or not 2 <= k <= n:
        raise InstanceError(f"need n >= 2 and 2 <= k <= n, got n={n}, k={k}")
    if not 0 < arc_density <= 1:
        raise InstanceError(f"arc density must lie in (0, 1], got {arc_density}")
    low, high = weight_range
    if low < 0 or low > high:
        raise InstanceError(f"bad weight range {weight_range}")
    if mode not in ("dirmc", "nodemc"):
        raise InstanceError(f"unknown mode {mode!r}")

    rng = np.random.default_rng(seed)
    attempts = mc_settings.get_random_max_attempts()
    for attempt in range(attempts):
        graph = nx.gnp_random_graph(
            n, arc_density, seed=int(rng.integers(2**31)), directed=mode == "dirmc"
        )
        terminals = tuple(sorted(int(s) for s in rng.choice(n, size=k, replace=False)))
        if mode == "nodemc":
            terminal_set = set(terminals)
            graph.remove_edges_from(
                [
                    (a, b)
                    for a, b in graph.edges
                    if a in terminal_set and b in terminal_set
                ]
            )
        if not all(
            nx.has_path(graph, a, b) for a in terminals for b in terminals if a != b
        ):
            continue
        if mode == "dirmc":
            edges = sorted(graph.edges)
            weights = rng.integers(low, high + 1, size=len(edges))
            arcs = tuple(Arc(a, b, float(w)) for (a, b), w in zip(edges, weights))
            inst = DirectedInstance(n=n, arcs=arcs, terminals=terminals)
        else:
            edges = tuple(sorted((min(a, b), max(a, b)) for a, b in graph.edges))
            drawn = rng.integers(low, high + 1, size=n)
            weights = tuple(
                INF if v in terminal_set else float(drawn[v]) for v in range(n)
            )
            inst = NodeInstance(n=n, edges=edges, weights=weights, terminals=terminals)
        logger.debug("Random %s instance accepted after %d draws", mode, attempt + 1)
        return inst
    logger.error("No connected random instance in %d attempts", attempts)
    raise InstanceError(
        f"no random instance with connected terminals after {attempts} attempts"
    )
