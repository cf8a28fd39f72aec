"""
Approximation-preserving reductions between cut problems.

``node_split_reduction`` turns an undirected node-weighted instance into a
directed edge-weighted one; ``reduce_4terminal_to_stbicut`` turns a
4-terminal node-weighted instance into a two-terminal directed node-weighted
one whose feasible cuts are exactly the feasible 4-way cuts.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import networkx as nx

from mwcut.core import INF, Arc, CutSolution, DirectedInstance, NodeInstance
from mwcut.exceptions import InstanceError

logger = logging.getLogger(__name__)

# (tail, head) pairs; "s"/"t" are the new nodes, integers index the terminals
ATTACHMENT_PATTERN = (
    ("s", 0),
    (0, "s"),
    (1, "s"),
    (1, "t"),
    ("s", 2),
    ("t", 2),
    ("t", 3),
    (3, "t"),
)


@dataclass(frozen=True)
class NodeSplit:
    """
    A node-split directed instance with its back-mapping.

    Every non-terminal v becomes ``in_node[v] -> out_node[v]`` joined by the
    arc ``node_arc[v]`` of weight w_v; terminals keep a single node.
    """

    instance: DirectedInstance
    in_node: Tuple[int, ...]
    out_node: Tuple[int, ...]
    node_arc: Dict[int, int]

    @property
    def arc_node(self) -> Dict[int, int]:
        return {a: v for v, a in self.node_arc.items()}

    def nodes_of(self, cut: CutSolution) -> frozenset:
        """Map a cut of split arcs back to original nodes."""
        arc_node = self.arc_node
        missing = [a for a in cut.members if a not in arc_node]
        if missing:
            raise InstanceError(f"arcs {sorted(missing)} are not split arcs")
        return frozenset(arc_node[a] for a in cut.members)

    def arcs_of(self, nodes: Iterable[int]) -> frozenset:
        """Map original nodes to their split arcs."""
        return frozenset(self.node_arc[v] for v in nodes)


def _split(
    n: int,
    arcs: Iterable[Tuple[int, int]],
    weights: Sequence[float],
    terminals: Sequence[int],
) -> NodeSplit:
    terminal_set = set(terminals)
    in_node = list(range(n))
    out_node = list(range(n))
    node_arc = {}
    split_arcs = []
    next_id = n
    for v in range(n):
        if v in terminal_set:
            continue
        out_node[v] = next_id
        next_id += 1
        node_arc[v] = len(split_arcs)
        split_arcs.append(Arc(v, out_node[v], weights[v]))
    for u, v in arcs:
        split_arcs.append(Arc(out_node[u], in_node[v], INF))
    instance = DirectedInstance(
        n=next_id, arcs=tuple(split_arcs), terminals=tuple(terminals)
    )
    return NodeSplit(instance, tuple(in_node), tuple(out_node), node_arc)


def node_split_reduction(inst: NodeInstance) -> NodeSplit:
    """
    Reduce node-weighted multiway cut to directed edge-weighted multiway cut.

    Each edge uv becomes the infinite arcs ``(u+, v-)`` and ``(v+, u-)``.
    Minimum cut values coincide and cuts map back through ``nodes_of``.

    Raises:
        InstanceError: If the instance is not canonical.
    """
    if not inst.is_canonical:
        raise InstanceError("node split needs a canonical instance")
    arcs = []
    for u, v in inst.edges:
        arcs.append((u, v))
        arcs.append((v, u))
    split = _split(inst.n, arcs, inst.weights, inst.terminals)
    logger.debug(
        "Split %d nodes into %d nodes and %d arcs",
        inst.n,
        split.instance.n,
        split.instance.m,
    )
    return split


@dataclass(frozen=True)
class StBiCutInstance:
    """
    Directed node-weighted instance with two terminals ``s`` and ``t``.

    A node set C is feasible when G - C has no s->t and no t->s path.
    """

    n: int
    arcs: Tuple[Tuple[int, int], ...]
    weights: Tuple[float, ...]
    terminals: Tuple[int, int]

    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.arcs)
        return graph

    def separates(self, cut: Iterable[int]) -> bool:
        """Whether removing ``cut`` breaks every s->t and t->s path."""
        removed = set(cut)
        s, t = self.terminals
        if s in removed or t in removed:
            raise InstanceError("the cut may not contain s or t")
        remaining = nx.subgraph_view(
            self.graph(), filter_node=lambda v: v not in removed
        )
        return not nx.has_path(remaining, s, t) and not nx.has_path(remaining, t, s)

    def cost(self, cut: Iterable[int]) -> float:
        return sum(self.weights[v] for v in set(cut))

    def to_directed(self) -> NodeSplit:
        """Split nodes to get an equivalent edge-weighted directed instance."""
        return _split(self.n, self.arcs, self.weights, self.terminals)


def reduce_4terminal_to_stbicut(inst: NodeInstance) -> StBiCutInstance:
    """
    Reduce 4-terminal node-weighted multiway cut to st-Bi-Cut.

    Edges become arc pairs, node weights are kept (terminals at infinity),
    and new nodes s = n, t = n + 1 attach to the terminals through the
    infinite arcs of ``ATTACHMENT_PATTERN``. A node set of G is a feasible
    4-way cut in G iff it separates s and t both ways in the result.

    Raises:
        InstanceError: If the instance does not have exactly 4 terminals.
    """
    if inst.k != 4:
        raise InstanceError(f"the st-Bi-Cut reduction needs 4 terminals, got {inst.k}")
    s, t = inst.n, inst.n + 1
    named = {"s": s, "t": t}
    arcs = []
    for u, v in inst.edges:
        arcs.append((u, v))
        arcs.append((v, u))
    for tail, head in ATTACHMENT_PATTERN:
        arcs.append(
            (
                named[tail] if tail in named else inst.terminals[tail],
                named[head] if head in named else inst.terminals[head],
            )
        )
    weights = list(inst.weights)
    for terminal in inst.terminals:
        weights[terminal] = INF
    return StBiCutInstance(
        n=inst.n + 2,
        arcs=tuple(arcs),
        weights=tuple(weights) + (INF, INF),
        terminals=(s, t),
    )
