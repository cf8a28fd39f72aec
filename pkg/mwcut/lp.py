"""
Fractional solutions to the distance LP relaxations.

The relaxation asks for lengths x so that every path between two distinct
terminals has length at least 1, minimising the weighted sum of lengths. Its
dual is maximum multicommodity flow between the terminal pairs, which the
multiplicative-weights solver here routes one shortest path at a time.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from mwcut import settings as mc_settings
from mwcut.core import (
    INF,
    DirectedInstance,
    FractionalSolution,
    Instance,
    NodeInstance,
    node_solution,
)
from mwcut.exceptions import (
    ConvergenceError,
    InfeasibleSolutionError,
    InstanceError,
    SolverError,
    UnboundedLPError,
)
from mwcut.paths import (
    Lengths,
    NearTerminalTable,
    closest_pair,
    closest_terminal_pair,
    h_nearest_terminals,
    lengths_of,
)
from mwcut.reductions import node_split_reduction

logger = logging.getLogger(__name__)

_RENORMALIZE_ABOVE = 1e100


@dataclass(frozen=True)
class LpResult:
    """
    Outcome of an approximate LP solve.

    ``epsilon`` is the certified gap: ``primal_cost <= (1 + epsilon) *
    dual_flow_value`` and ``dual_flow_value`` is the value of a feasible
    multicommodity flow, hence a lower bound on the LP optimum.
    """

    solution: FractionalSolution
    primal_cost: float
    dual_flow_value: float
    epsilon: float
    iterations: int


@dataclass(frozen=True)
class Feasibility:
    """
    Verdict of ``verify_feasible``; truthy when feasible.

    On failure ``pair`` is the violating ordered terminal pair and ``nodes``
    / ``arcs`` a shortest violating path (``arcs`` holds edge ids in node
    mode).
    """

    feasible: bool
    distance: float
    pair: Optional[Tuple[int, int]] = None
    nodes: Tuple[int, ...] = ()
    arcs: Tuple[int, ...] = ()

    def __bool__(self):
        return self.feasible


def _expected_mode(inst: Instance) -> str:
    return "edge" if isinstance(inst, DirectedInstance) else "node"


def _check_dimensions(inst: Instance, x: FractionalSolution) -> None:
    mode = _expected_mode(inst)
    size = inst.m if mode == "edge" else inst.n
    if x.mode != mode:
        raise InstanceError(f"expected a {mode}-mode solution, got {x.mode}")
    if len(x) != size:
        raise InstanceError(f"expected {size} values, got {len(x)}")


def lp_cost(inst: Instance, x: FractionalSolution) -> float:
    """
    Objective value of ``x``.

    Infinite-weight members contribute nothing at x = 0 and make the cost
    infinite at any positive x. Terminals are excluded in node mode.

    Raises:
        InstanceError: If ``x`` does not match the instance.
    """
    _check_dimensions(inst, x)
    values = x.as_array()
    if isinstance(inst, DirectedInstance):
        weights = inst.weights
    else:
        weights = np.array(inst.weights, dtype=float)
        values = values.copy()
        values[list(inst.terminals)] = 0.0
    infinite = np.isinf(weights)
    if np.any(values[infinite] > 0):
        return INF
    return float(np.dot(weights[~infinite], values[~infinite]))


def verify_feasible(
    inst: Instance, x: FractionalSolution, tol: Optional[float] = None
) -> Feasibility:
    """
    Check the distance constraints of ``x``.

    Args:
        inst: Directed or node-weighted instance.
        x: Candidate solution of the matching mode.
        tol: Accepted shortfall below 1. Defaults to settings.

    Returns:
        Feasibility, carrying a violating pair and path when infeasible.
    """
    _check_dimensions(inst, x)
    if tol is None:
        tol = mc_settings.get_feasibility_tol()
    if isinstance(inst, NodeInstance):
        for s in inst.terminals:
            if x.values[s] != 0:
                return Feasibility(False, 0.0, (s, s), (s,))
    pair = closest_terminal_pair(inst, x)
    if pair is None or pair.distance >= 1 - tol:
        return Feasibility(True, pair.distance if pair is not None else INF)
    return Feasibility(
        False, pair.distance, (pair.source, pair.target), pair.nodes, pair.arcs
    )


def _terminals_unweighted(inst: Instance, x: FractionalSolution) -> bool:
    if isinstance(inst, NodeInstance):
        return all(x.values[s] == 0 for s in inst.terminals)
    return True


def require_feasible(
    inst: Instance,
    x: FractionalSolution,
    table: Optional[NearTerminalTable] = None,
) -> float:
    """
    Raise unless ``x`` is feasible and puts no length on infinite members.

    Args:
        inst: Directed or node-weighted instance.
        x: Candidate solution of the matching mode.
        table: Nearest-terminal table of ``x`` with h >= 2; its labels give
            the minimum terminal distance without another search.

    Returns:
        The minimum inter-terminal distance D, at least ``1 - tol``.

    Raises:
        InfeasibleSolutionError: With the violating path as witness.
    """
    if table is not None:
        _check_dimensions(inst, x)
        distance = table.terminal_distance()
        if (
            distance >= 1 - mc_settings.get_feasibility_tol()
            and _terminals_unweighted(inst, x)
            and lp_cost(inst, x) < INF
        ):
            return distance
    verdict = verify_feasible(inst, x)
    if not verdict:
        source, target = verdict.pair
        logger.error("Fractional solution violated between %d and %d", source, target)
        raise InfeasibleSolutionError(
            f"terminals {source + 1} and {target + 1} are at distance "
            f"{verdict.distance:.6g} < 1",
            witness=verdict.nodes,
        )
    if lp_cost(inst, x) == INF:
        raise InfeasibleSolutionError("positive length on an infinite-weight member")
    return verdict.distance


def feasible_table(
    inst: Instance, x: FractionalSolution
) -> Tuple[NearTerminalTable, float]:
    """
    Two-nearest-terminal table of a feasible ``x`` and its distance D.

    One labelled search serves both the rounding and the feasibility check.

    Raises:
        InstanceError: If ``x`` does not match the instance.
        InfeasibleSolutionError: If ``x`` is not feasible.
    """
    _check_dimensions(inst, x)
    table = h_nearest_terminals(inst, x, 2)
    return table, require_feasible(inst, x, table)


def scale_to_feasible(inst: Instance, lengths: Lengths) -> FractionalSolution:
    """
    Divide lengths by the minimum inter-terminal distance D.

    Raises:
        InfeasibleSolutionError: If D = 0, when no scaling can help.
    """
    values = np.array(lengths_of(lengths), dtype=float)
    pair = closest_terminal_pair(inst, values.tolist())
    mode = _expected_mode(inst)
    if pair is None:
        return FractionalSolution(mode, tuple(values.tolist()))
    if pair.distance <= 0:
        raise InfeasibleSolutionError(
            f"terminals {pair.source + 1} and {pair.target + 1} are joined by a "
            "zero-length path",
            witness=pair.nodes,
        )
    return FractionalSolution(mode, tuple((values / pair.distance).tolist()))


def _certify_bounded(inst: DirectedInstance):
    """Try unit lengths on finite arcs; None means no pair is connected."""
    unit = [1.0 if arc.weight < INF else 0.0 for arc in inst.arcs]
    pair = closest_terminal_pair(inst, unit)
    if pair is not None and pair.distance == 0:
        logger.error(
            "Terminals %d and %d joined by infinite arcs", pair.source, pair.target
        )
        raise UnboundedLPError(
            f"terminals {pair.source + 1} and {pair.target + 1} are joined by "
            "infinite-weight arcs only"
        )
    return pair


def solve_lp_mwu(inst: DirectedInstance, epsilon: Optional[float] = None) -> LpResult:
    """
    Approximately solve the directed distance LP.

    Garg-Koenemann scheme: lengths start at delta / w_e on finite arcs and
    0 on infinite ones; each iteration routes the bottleneck weight along
    the globally shortest terminal-to-terminal path and multiplies the
    length of every finite arc on it by ``1 + eps * c / w_e``. The run
    stops once the best primal candidate ``l / D(l)`` is within ``1 + eps``
    of the congestion-scaled flow, or when ``D(l) >= 1``.

    Args:
        inst: Directed instance.
        epsilon: Accuracy in (0, 1). Defaults to settings.

    Returns:
        LpResult with a feasible solution and a certified dual bound.

    Raises:
        UnboundedLPError: If a terminal pair is joined by infinite arcs only.
        ConvergenceError: If the iteration cap is exceeded.
    """
    eps = mc_settings.get_epsilon() if epsilon is None else epsilon
    if not 0 < eps < 1:
        raise InstanceError(f"epsilon must lie in (0, 1), got {eps}")

    weights = [arc.weight for arc in inst.arcs]
    if _certify_bounded(inst) is None:
        logger.warning("No terminal reaches another; the LP optimum is 0")
        zero = FractionalSolution("edge", (0.0,) * inst.m)
        return LpResult(zero, 0.0, 0.0, 0.0, 0)

    positive = [a for a in inst.finite_arcs if weights[a] > 0]
    m_finite = max(len(inst.finite_arcs), 1)
    log_inv_delta = math.log((1 + eps) * m_finite) / eps - math.log(1 + eps)
    cap = math.ceil(
        (m_finite / eps) * (math.log(1 + eps) + log_inv_delta) / math.log(1 + eps)
    ) + mc_settings.get_iteration_slack()

    # lengths are kept in units of delta, rescaled by exp(log_scale)
    lengths = [0.0] * inst.m
    for a in inst.finite_arcs:
        lengths[a] = 1.0 / weights[a] if weights[a] > 0 else INF
    adjacency = [[] for _ in range(inst.n)]
    position = [0] * inst.m
    for a, arc in enumerate(inst.arcs):
        position[a] = len(adjacency[arc.tail])
        adjacency[arc.tail].append((arc.head, lengths[a], a))

    weighted = float(len(positive))
    log_scale = 0.0
    flow = [0.0] * inst.m
    congestion = 0.0
    routed = 0.0
    dual = 0.0
    best_value = INF
    best_lengths = None
    best_distance = 1.0
    iteration = 0
    reason = "threshold"

    while True:
        pair = closest_pair(adjacency, inst.terminals)
        if pair is None:
            # only zero-weight arcs remain between terminals
            best_value, best_lengths, best_distance = 0.0, [0.0] * inst.m, 1.0
            reason = "free"
            break
        distance = pair.distance
        candidate = weighted / distance
        if candidate < best_value:
            best_value = candidate
            best_lengths = list(lengths)
            best_distance = distance
        if math.log(distance) + log_scale >= log_inv_delta:
            break
        if best_value <= (1 + eps) * dual:
            reason = "certified"
            break
        iteration += 1
        if iteration > cap:
            logger.error("MWU exceeded %d iterations", cap)
            raise ConvergenceError(f"MWU did not converge within {cap} iterations")

        path = [a for a in pair.arcs if weights[a] < INF]
        bottleneck = min(weights[a] for a in path)
        routed += bottleneck
        grow = False
        for a in path:
            w = weights[a]
            flow[a] += bottleneck
            congestion = max(congestion, flow[a] / w)
            old = lengths[a]
            new = old * (1 + eps * bottleneck / w)
            lengths[a] = new
            weighted += w * (new - old)
            arc = inst.arcs[a]
            adjacency[arc.tail][position[a]] = (arc.head, new, a)
            grow = grow or new > _RENORMALIZE_ABOVE
        dual = routed / congestion
        if grow:
            log_scale += math.log(_RENORMALIZE_ABOVE)
            weighted /= _RENORMALIZE_ABOVE
            for a in positive:
                lengths[a] /= _RENORMALIZE_ABOVE
                arc = inst.arcs[a]
                adjacency[arc.tail][position[a]] = (arc.head, lengths[a], a)
        if iteration % 1000 == 0:
            logger.debug(
                "MWU iteration %d: primal %.6g dual %.6g", iteration, best_value, dual
            )

    values = []
    for a, arc in enumerate(inst.arcs):
        if arc.weight == INF:
            values.append(0.0)
        elif arc.weight == 0:
            values.append(1.0)
        else:
            values.append(best_lengths[a] / best_distance)
    solution = scale_to_feasible(inst, values)
    primal = lp_cost(inst, solution)

    slack = mc_settings.get_duality_slack()
    if dual > primal * (1 + slack) + 1e-12:
        logger.error("Weak duality violated: flow %.9g > cost %.9g", dual, primal)
        raise SolverError(f"flow value {dual} exceeds fractional cost {primal}")
    gap = primal / dual - 1 if dual > 0 else (0.0 if primal == 0 else INF)
    logger.info(
        "MWU stopped (%s) after %d iterations: primal %.6g, dual %.6g",
        reason,
        iteration,
        primal,
        dual,
    )
    return LpResult(solution, primal, dual, max(gap, 0.0), iteration)


def solve_node_lp(inst: NodeInstance, epsilon: Optional[float] = None) -> LpResult:
    """
    Approximately solve the node-weighted distance LP.

    The instance is split into a directed one, solved with
    ``solve_lp_mwu``, and the lengths of the split arcs ``(v-, v+)`` become
    node values; terminals get x = 0.

    Raises:
        InstanceError: If the instance is not canonical.
    """
    if not inst.is_canonical:
        raise InstanceError("node LP needs a canonical instance; canonicalize it first")
    split = node_split_reduction(inst)
    result = solve_lp_mwu(split.instance, epsilon)
    values = [0.0] * inst.n
    for v, a in split.node_arc.items():
        values[v] = result.solution.values[a]
    solution = node_solution(values)
    return LpResult(
        solution=solution,
        primal_cost=lp_cost(inst, solution),
        dual_flow_value=result.dual_flow_value,
        epsilon=result.epsilon,
        iterations=result.iterations,
    )
