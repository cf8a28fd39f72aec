"""
Instance data model and text file formats.

Node ids are 1-based in files and 0-based in memory: file id ``i`` is node
``i - 1``. Infinite weights are stored as ``math.inf`` and written as the
token ``inf``; they mark members that can never be cut.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Literal, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from mwcut.exceptions import InstanceError, InstanceFormatError, InvalidCutError

logger = logging.getLogger(__name__)

INF = math.inf
INF_TOKEN = "inf"

Mode = Literal["edge", "node"]


@dataclass(frozen=True)
class Arc:
    """A directed arc with a nonnegative, possibly infinite, weight."""

    tail: int
    head: int
    weight: float


@dataclass(frozen=True)
class DirectedInstance:
    """
    Directed edge-weighted multiway cut instance.

    Attributes:
        n: Number of nodes, ids ``0 .. n-1``.
        arcs: Arcs in file order; parallel arcs are allowed.
        terminals: The k >= 2 distinct terminal nodes, in order.
    """

    n: int
    arcs: Tuple[Arc, ...]
    terminals: Tuple[int, ...]

    def __post_init__(self):
        _check_terminals(self.n, self.terminals)
        for index, arc in enumerate(self.arcs):
            if not (0 <= arc.tail < self.n and 0 <= arc.head < self.n):
                raise InstanceError(f"arc {index} has an endpoint out of range")
            if arc.tail == arc.head:
                raise InstanceError(f"arc {index} is a self-loop")
            _check_weight(arc.weight, f"arc {index}")

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def k(self) -> int:
        return len(self.terminals)

    @cached_property
    def out_arcs(self) -> Tuple[Tuple[int, ...], ...]:
        """Indices of the arcs leaving each node."""
        out = [[] for _ in range(self.n)]
        for index, arc in enumerate(self.arcs):
            out[arc.tail].append(index)
        return tuple(tuple(a) for a in out)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([arc.weight for arc in self.arcs], dtype=float)

    @cached_property
    def finite_arcs(self) -> Tuple[int, ...]:
        return tuple(i for i, arc in enumerate(self.arcs) if arc.weight < INF)


@dataclass(frozen=True)
class NodeInstance:
    """
    Undirected node-weighted multiway cut instance.

    Terminal weights are kept as read but terminals are never removable.

    Attributes:
        n: Number of nodes, ids ``0 .. n-1``.
        edges: Unordered node pairs.
        weights: One nonnegative, possibly infinite, weight per node.
        terminals: The k >= 2 distinct terminal nodes, in order.
    """

    n: int
    edges: Tuple[Tuple[int, int], ...]
    weights: Tuple[float, ...]
    terminals: Tuple[int, ...]

    def __post_init__(self):
        _check_terminals(self.n, self.terminals)
        if len(self.weights) != self.n:
            raise InstanceError(
                f"expected {self.n} node weights, got {len(self.weights)}"
            )
        for v, weight in enumerate(self.weights):
            _check_weight(weight, f"node {v}")
        for index, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge {index} has an endpoint out of range")
            if u == v:
                raise InstanceError(f"edge {index} is a self-loop")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return len(self.terminals)

    @cached_property
    def neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        adjacent = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adjacent[u].append(v)
            adjacent[v].append(u)
        return tuple(tuple(a) for a in adjacent)

    @cached_property
    def terminal_set(self) -> frozenset:
        return frozenset(self.terminals)

    @property
    def is_canonical(self) -> bool:
        """True when terminals are pairwise non-adjacent and weigh infinity."""
        terminals = self.terminal_set
        if any(u in terminals and v in terminals for u, v in self.edges):
            return False
        return all(self.weights[s] == INF for s in self.terminals)

    def removable(self, v: int) -> bool:
        """Whether ``v`` may appear in a node cut."""
        return v not in self.terminal_set and self.weights[v] < INF


Instance = Union[DirectedInstance, NodeInstance]


@dataclass(frozen=True)
class FractionalSolution:
    """
    Lengths x on arcs (edge mode) or nodes (node mode).

    Node-mode solutions carry x = 0 on every terminal.
    """

    mode: Mode
    values: Tuple[float, ...]

    def __post_init__(self):
        for index, value in enumerate(self.values):
            if not value >= 0:
                raise InstanceError(f"negative or undefined length at position {index}")

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def __len__(self):
        return len(self.values)


def edge_solution(values: Iterable[float]) -> FractionalSolution:
    """Build an edge-mode solution."""
    return FractionalSolution("edge", tuple(float(v) for v in values))


def node_solution(values: Iterable[float]) -> FractionalSolution:
    """Build a node-mode solution."""
    return FractionalSolution("node", tuple(float(v) for v in values))


@dataclass(frozen=True)
class CutSolution:
    """
    A set of removed arcs (``kind="edge"``) or nodes (``kind="node"``).

    ``meta`` records how the cut was produced (theta, ell, seed, ...) and
    takes no part in equality.
    """

    kind: Mode
    members: frozenset
    cost: float
    meta: dict = field(default_factory=dict, compare=False)

    def sorted_members(self) -> Tuple[int, ...]:
        return tuple(sorted(self.members))


def make_edge_cut(
    inst: DirectedInstance, members: Iterable[int], **meta
) -> CutSolution:
    """
    Build an edge cut, summing the member weights.

    Raises:
        InvalidCutError: If a member is out of range or has infinite weight.
    """
    members = frozenset(int(a) for a in members)
    cost = 0.0
    for a in sorted(members):
        if not 0 <= a < inst.m:
            raise InvalidCutError(f"arc index {a} out of range")
        weight = inst.arcs[a].weight
        if weight == INF:
            raise InvalidCutError(f"arc {a} has infinite weight and cannot be cut")
        cost += weight
    return CutSolution("edge", members, cost, dict(meta))


def make_node_cut(inst: NodeInstance, members: Iterable[int], **meta) -> CutSolution:
    """
    Build a node cut, summing the member weights.

    Raises:
        InvalidCutError: If a member is a terminal or has infinite weight.
    """
    members = frozenset(int(v) for v in members)
    cost = 0.0
    for v in sorted(members):
        if not 0 <= v < inst.n:
            raise InvalidCutError(f"node {v} out of range")
        if v in inst.terminal_set:
            raise InvalidCutError(f"node {v} is a terminal and cannot be cut")
        if inst.weights[v] == INF:
            raise InvalidCutError(f"node {v} has infinite weight and cannot be cut")
        cost += inst.weights[v]
    return CutSolution("node", members, cost, dict(meta))


def resolve_seed(seed: Optional[int]) -> int:
    """``seed``, or fresh OS entropy when None, so every run can be replayed."""
    if seed is None:
        seed = int(np.random.SeedSequence().entropy)
        logger.debug("Drew seed %d", seed)
    return seed


def make_rng(seed: Optional[int], trial: Optional[int] = None) -> np.random.Generator:
    """
    Seeded generator; trial generators derive from ``(seed, trial)``.

    Callers that report the seed resolve it first with ``resolve_seed``.
    """
    seed = resolve_seed(seed)
    if trial is None:
        return np.random.default_rng(seed)
    return np.random.default_rng([seed, trial])


def draw_unit(rng: np.random.Generator) -> float:
    """Uniform 53-bit variate on the open interval (0, 1)."""
    value = rng.random()
    while value == 0.0:
        value = rng.random()
    return value


def format_number(value: float) -> str:
    """Shortest decimal that reads back to the same float; ``inf`` for infinity."""
    if value == INF:
        return INF_TOKEN
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def parse_number(
    token: str, line: Optional[int] = None, allow_inf: bool = True
) -> float:
    if token == INF_TOKEN:
        if not allow_inf:
            raise InstanceFormatError("infinite value not allowed here", line)
        return INF
    try:
        value = float(token)
    except ValueError:
        raise InstanceFormatError(f"invalid number {token!r}", line) from None
    if math.isnan(value) or math.isinf(value):
        raise InstanceFormatError(f"invalid number {token!r}", line)
    if value < 0:
        raise InstanceFormatError(f"negative value {token}", line)
    return value


def canonicalize_node_instance(inst: NodeInstance) -> NodeInstance:
    """
    Make terminals unremovable and pairwise non-adjacent.

    When two terminals are adjacent, every terminal ``s_i`` gets a dummy
    neighbour ``n + i`` which becomes the new terminal, and ``s_i`` itself
    becomes an ordinary node of infinite weight. Otherwise only the terminal
    weights are set to infinity. Original node ids are preserved in both
    cases, and the minimum cut value is unchanged.
    """
    weights = list(inst.weights)
    for s in inst.terminals:
        weights[s] = INF
    terminals = inst.terminal_set
    if not any(u in terminals and v in terminals for u, v in inst.edges):
        if tuple(weights) == inst.weights:
            return inst
        return replace(inst, weights=tuple(weights))

    dummies = tuple(inst.n + i for i in range(inst.k))
    edges = inst.edges + tuple(zip(inst.terminals, dummies))
    logger.debug("Attached %d dummy terminals to separate adjacent terminals", inst.k)
    return NodeInstance(
        n=inst.n + inst.k,
        edges=edges,
        weights=tuple(weights) + (INF,) * inst.k,
        terminals=dummies,
    )


def _check_terminals(n: int, terminals: Sequence[int]) -> None:
    if n < 1:
        raise InstanceError("an instance needs at least one node")
    if len(terminals) < 2:
        raise InstanceError("at least two terminals are required")
    if len(set(terminals)) != len(terminals):
        raise InstanceError("terminals must be distinct")
    for s in terminals:
        if not 0 <= s < n:
            raise InstanceError(f"terminal {s} out of range")


def _check_weight(weight: float, what: str) -> None:
    if not weight >= 0:
        raise InstanceError(f"{what} has a negative or undefined weight")


def _read_lines(text: Union[str, TextIO]):
    """Yield ``(line number, fields)`` for non-empty, non-comment lines."""
    if not isinstance(text, str):
        text = text.read()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].split()
        if content:
            yield lineno, content


def _parse_id(token: str, n: int, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise InstanceFormatError(f"invalid node id {token!r}", line) from None
    if not 1 <= value <= n:
        raise InstanceFormatError(f"node id {value} out of range 1..{n}", line)
    return value - 1


def _expect_fields(fields, count: int, line: int) -> None:
    if len(fields) != count:
        raise InstanceFormatError(
            f"record {fields[0]!r} expects {count - 1} fields, got {len(fields) - 1}",
            line,
        )


def parse_instance(text: Union[str, TextIO]) -> Instance:
    """
    Parse an instance file.

    Args:
        text: File contents or an open text stream.

    Returns:
        A validated DirectedInstance or NodeInstance.

    Raises:
        InstanceFormatError: On any malformed record, with its line number.
    """
    header = None
    terminals = []
    arcs = []
    edges = []
    weights = {}
    last_line = 0

    for lineno, fields in _read_lines(text):
        last_line = lineno
        tag = fields[0]
        if header is None:
            if tag != "p":
                raise InstanceFormatError(
                    "expected header 'p dirmc|nodemc n m k'", lineno
                )
            _expect_fields(fields, 5, lineno)
            kind = fields[1]
            if kind not in ("dirmc", "nodemc"):
                raise InstanceFormatError(f"unknown problem kind {kind!r}", lineno)
            try:
                n, m, k = (int(f) for f in fields[2:])
            except ValueError:
                raise InstanceFormatError(
                    "header counts must be integers", lineno
                ) from None
            if n < 1 or m < 0 or k < 2:
                raise InstanceFormatError("header needs n >= 1, m >= 0, k >= 2", lineno)
            header = (kind, n, m, k)
            continue

        kind, n, m, k = header
        if tag == "p":
            raise InstanceFormatError("duplicate header", lineno)
        elif tag == "t":
            _expect_fields(fields, 2, lineno)
            s = _parse_id(fields[1], n, lineno)
            if s in terminals:
                raise InstanceFormatError(f"duplicate terminal {s + 1}", lineno)
            if len(terminals) == k:
                raise InstanceFormatError(f"more than {k} terminals", lineno)
            terminals.append(s)
        elif tag == "a" and kind == "dirmc":
            _expect_fields(fields, 4, lineno)
            u = _parse_id(fields[1], n, lineno)
            v = _parse_id(fields[2], n, lineno)
            if u == v:
                raise InstanceFormatError(f"self-loop at node {u + 1}", lineno)
            if len(arcs) == m:
                raise InstanceFormatError(f"more than {m} arcs", lineno)
            arcs.append(Arc(u, v, parse_number(fields[3], lineno)))
        elif tag == "n" and kind == "nodemc":
            _expect_fields(fields, 3, lineno)
            v = _parse_id(fields[1], n, lineno)
            if v in weights:
                raise InstanceFormatError(f"duplicate weight for node {v + 1}", lineno)
            weights[v] = parse_number(fields[2], lineno)
        elif tag == "e" and kind == "nodemc":
            _expect_fields(fields, 3, lineno)
            u = _parse_id(fields[1], n, lineno)
            v = _parse_id(fields[2], n, lineno)
            if u == v:
                raise InstanceFormatError(f"self-loop at node {u + 1}", lineno)
            if len(edges) == m:
                raise InstanceFormatError(f"more than {m} edges", lineno)
            edges.append((u, v))
        else:
            raise InstanceFormatError(f"unexpected record {tag!r}", lineno)

    if header is None:
        raise InstanceFormatError("empty instance file", last_line or None)
    kind, n, m, k = header
    if len(terminals) != k:
        raise InstanceFormatError(
            f"expected {k} terminals, got {len(terminals)}", last_line
        )
    if kind == "dirmc":
        if len(arcs) != m:
            raise InstanceFormatError(f"expected {m} arcs, got {len(arcs)}", last_line)
        return DirectedInstance(n=n, arcs=tuple(arcs), terminals=tuple(terminals))
    if len(edges) != m:
        raise InstanceFormatError(f"expected {m} edges, got {len(edges)}", last_line)
    if len(weights) != n:
        missing = min(set(range(n)) - set(weights)) + 1
        raise InstanceFormatError(f"missing weight for node {missing}", last_line)
    return NodeInstance(
        n=n,
        edges=tuple(edges),
        weights=tuple(weights[v] for v in range(n)),
        terminals=tuple(terminals),
    )


def serialize_instance(inst: Instance) -> str:
    """Render an instance in the line-oriented file format."""
    lines = []
    if isinstance(inst, DirectedInstance):
        lines.append(f"p dirmc {inst.n} {inst.m} {inst.k}")
        lines.extend(f"t {s + 1}" for s in inst.terminals)
        lines.extend(
            f"a {arc.tail + 1} {arc.head + 1} {format_number(arc.weight)}"
            for arc in inst.arcs
        )
    else:
        lines.append(f"p nodemc {inst.n} {inst.m} {inst.k}")
        lines.extend(f"t {s + 1}" for s in inst.terminals)
        lines.extend(
            f"n {v + 1} {format_number(w)}" for v, w in enumerate(inst.weights)
        )
        lines.extend(f"e {u + 1} {v + 1}" for u, v in inst.edges)
    return "\n".join(lines) + "\n"


def parse_solution(text: Union[str, TextIO], inst: Instance) -> FractionalSolution:
    """
    Parse a fractional solution file for ``inst``.

    Directed solutions list ``x u v value`` once per arc in arc order; node
    solutions list ``xn id value`` once per node.
    """
    directed = isinstance(inst, DirectedInstance)
    size = inst.m if directed else inst.n
    values = [None] * size
    position = 0
    last_line = 0
    for lineno, fields in _read_lines(text):
        last_line = lineno
        if directed:
            if fields[0] != "x":
                raise InstanceFormatError(
                    f"expected 'x u v value', got {fields[0]!r}", lineno
                )
            _expect_fields(fields, 4, lineno)
            if position >= size:
                raise InstanceFormatError(f"more than {size} arc values", lineno)
            arc = inst.arcs[position]
            u = _parse_id(fields[1], inst.n, lineno)
            v = _parse_id(fields[2], inst.n, lineno)
            if (u, v) != (arc.tail, arc.head):
                raise InstanceFormatError(
                    f"arc {position + 1} is ({arc.tail + 1}, {arc.head + 1})", lineno
                )
            values[position] = parse_number(fields[3], lineno, allow_inf=False)
            position += 1
        else:
            if fields[0] != "xn":
                raise InstanceFormatError(
                    f"expected 'xn id value', got {fields[0]!r}", lineno
                )
            _expect_fields(fields, 3, lineno)
            v = _parse_id(fields[1], inst.n, lineno)
            if values[v] is not None:
                raise InstanceFormatError(f"duplicate value for node {v + 1}", lineno)
            values[v] = parse_number(fields[2], lineno, allow_inf=False)
    if any(value is None for value in values):
        raise InstanceFormatError(f"expected {size} values", last_line or None)
    return FractionalSolution("edge" if directed else "node", tuple(values))


def serialize_solution(x: FractionalSolution, inst: Instance) -> str:
    """Render a fractional solution for ``inst``."""
    if x.mode == "edge":
        lines = [
            f"x {arc.tail + 1} {arc.head + 1} {format_number(value)}"
            for arc, value in zip(inst.arcs, x.values)
        ]
    else:
        lines = [
            f"xn {v + 1} {format_number(value)}" for v, value in enumerate(x.values)
        ]
    return "\n".join(lines) + "\n"


def parse_cut(text: Union[str, TextIO], inst: Instance) -> CutSolution:
    """
    Parse a cut file for ``inst``.

    ``cut a u v`` lines are matched against arcs in index order, so parallel
    arcs are taken one at a time. The trailing ``cost`` line must agree with
    the recomputed cost.
    """
    directed = isinstance(inst, DirectedInstance)
    members = []
    stated_cost = cost_line = None
    used = set()
    for lineno, fields in _read_lines(text):
        if fields[0] == "cost":
            _expect_fields(fields, 2, lineno)
            stated_cost = parse_number(fields[1], lineno)
            cost_line = lineno
        elif fields[0] == "cut" and len(fields) > 1 and fields[1] == "a" and directed:
            _expect_fields(fields, 4, lineno)
            u = _parse_id(fields[2], inst.n, lineno)
            v = _parse_id(fields[3], inst.n, lineno)
            match = next(
                (
                    a
                    for a in inst.out_arcs[u]
                    if inst.arcs[a].head == v and a not in used
                ),
                None,
            )
            if match is None:
                raise InstanceFormatError(f"no unused arc ({u + 1}, {v + 1})", lineno)
            used.add(match)
            members.append(match)
        elif (
            fields[0] == "cut" and len(fields) > 1 and fields[1] == "n" and not directed
        ):
            _expect_fields(fields, 3, lineno)
            members.append(_parse_id(fields[2], inst.n, lineno))
        else:
            raise InstanceFormatError(
                f"unexpected record {' '.join(fields[:2])!r}", lineno
            )

    cut = make_edge_cut(inst, members) if directed else make_node_cut(inst, members)
    if stated_cost is not None and not math.isclose(
        stated_cost, cut.cost, rel_tol=1e-9, abs_tol=1e-9
    ):
        raise InstanceFormatError(
            f"stated cost {stated_cost} differs from {cut.cost}", cost_line
        )
    return cut


def serialize_cut(cut: CutSolution, inst: Instance) -> str:
    """Render a cut file for ``inst``."""
    if cut.kind == "edge":
        lines = [
            f"cut a {inst.arcs[a].tail + 1} {inst.arcs[a].head + 1}"
            for a in cut.sorted_members()
        ]
    else:
        lines = [f"cut n {v + 1}" for v in cut.sorted_members()]
    lines.append(f"cost {format_number(cut.cost)}")
    return "\n".join(lines) + "\n"
