"""Open-graph ZX diagrams and the two ways of composing them.

A diagram is an undirected multigraph whose nodes are green (Z) spiders,
red (X) spiders, Hadamard boxes or boundary points. Inputs and outputs are
ordered lists of boundary nodes. Parallel edges and self-loops are allowed.
Diagrams are immutable; every operation returns a new one with fresh ids.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import networkx as nx

from .phase import Phase, PhaseLike, ZERO, as_phase

Z, X, H, B = "Z", "X", "H", "B"
SPIDERS = (Z, X)
KINDS = (Z, X, H, B)


class DiagramError(ValueError):
    """Ill-formed diagram or illegal composition."""


@dataclass(frozen=True)
class Node:
    kind: str
    phase: Phase | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DiagramError(f"unknown node kind {self.kind!r}")
        if self.kind in SPIDERS:
            object.__setattr__(self, "phase", ZERO if self.phase is None else as_phase(self.phase))
        elif self.phase is not None:
            raise DiagramError(f"{self.kind} nodes carry no phase")

    @property
    def is_spider(self) -> bool:
        return self.kind in SPIDERS

    def __repr__(self) -> str:
        return f"{self.kind}({self.phase!r})" if self.is_spider else self.kind


def zs(phase: PhaseLike = 0) -> Node:
    return Node(Z, as_phase(phase))


def xs(phase: PhaseLike = 0) -> Node:
    return Node(X, as_phase(phase))


HNODE = Node(H)
BNODE = Node(B)


def _norm_edge(u, v) -> tuple:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Diagram:
    nodes: Mapping[int, Node]
    edges: tuple[tuple[int, int], ...]
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()
    _adj: Mapping = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", MappingProxyType(dict(self.nodes)))
        object.__setattr__(self, "edges", tuple(sorted(_norm_edge(u, v) for u, v in self.edges)))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        adj: dict[int, list[int]] = {v: [] for v in self.nodes}
        for i, (u, v) in enumerate(self.edges):
            if u not in adj or v not in adj:
                raise DiagramError(f"edge {(u, v)} references a missing node")
            adj[u].append(i)
            adj[v].append(i)
        object.__setattr__(self, "_adj", adj)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def degree(self, v: int) -> int:
        # self-loops count twice
        return len(self._adj[v])

    def incident(self, v: int) -> list[int]:
        """Edge indices incident to ``v``; a self-loop index appears twice."""
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        out = []
        for i in self._adj[v]:
            a, b = self.edges[i]
            out.append(b if a == v else a)
        return out

    def interior(self) -> list[int]:
        return sorted(v for v, n in self.nodes.items() if n.kind != B)

    def spiders(self) -> list[int]:
        return sorted(v for v, n in self.nodes.items() if n.is_spider)

    def relabel(self, offset: int = 0) -> "Diagram":
        """Renumber nodes as ``offset, offset+1, ...`` in sorted id order."""
        m = {v: offset + i for i, v in enumerate(sorted(self.nodes))}
        return Diagram(
            {m[v]: n for v, n in self.nodes.items()},
            [(m[u], m[v]) for u, v in self.edges],
            [m[v] for v in self.inputs],
            [m[v] for v in self.outputs],
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{v}:{n!r}" for v, n in sorted(self.nodes.items()))
        return f"Diagram({self.n_inputs}->{self.n_outputs}; {body}; edges={list(self.edges)})"


# ---------------------------------------------------------------- generators

def _spider(kind: str, phase: PhaseLike, m: int, n: int) -> Diagram:
    if m < 0 or n < 0:
        raise DiagramError("arity must be non-negative")
    nodes = {0: Node(kind, as_phase(phase))}
    ins = list(range(1, m + 1))
    outs = list(range(m + 1, m + n + 1))
    for b in ins + outs:
        nodes[b] = BNODE
    return Diagram(nodes, [(0, b) for b in ins + outs], ins, outs)


def z_spider(phase: PhaseLike = 0, m: int = 1, n: int = 1) -> Diagram:
    return _spider(Z, phase, m, n)


def x_spider(phase: PhaseLike = 0, m: int = 1, n: int = 1) -> Diagram:
    return _spider(X, phase, m, n)


def hadamard() -> Diagram:
    return Diagram({0: BNODE, 1: HNODE, 2: BNODE}, [(0, 1), (1, 2)], [0], [2])


def wire() -> Diagram:
    return Diagram({0: BNODE, 1: BNODE}, [(0, 1)], [0], [1])


def swap() -> Diagram:
    # in0 -> out1, in1 -> out0
    return Diagram({i: BNODE for i in range(4)}, [(0, 3), (1, 2)], [0, 1], [2, 3])


def cup() -> Diagram:
    """The 2 -> 0 wire bend."""
    return Diagram({0: BNODE, 1: BNODE}, [(0, 1)], [0, 1], [])


def cap() -> Diagram:
    """The 0 -> 2 wire bend."""
    return Diagram({0: BNODE, 1: BNODE}, [(0, 1)], [], [0, 1])


def empty() -> Diagram:
    return Diagram({}, [])


_FIXED = {
    "wire": (1, 1, wire),
    "swap": (2, 2, swap),
    "cup": (2, 0, cup),
    "cap": (0, 2, cap),
    "H": (1, 1, hadamard),
}


def generator(kind: str, m: int, n: int, phase: PhaseLike = 0) -> Diagram:
    """Build one of the seven generators.

    ``kind`` is ``"Z"``, ``"X"``, ``"H"``, ``"wire"``, ``"swap"``, ``"cup"`` or
    ``"cap"``. Fixed-arity generators raise DiagramError on a wrong (m, n).
    """
    if kind in SPIDERS:
        return _spider(kind, phase, m, n)
    if kind not in _FIXED:
        raise DiagramError(f"unknown generator {kind!r}")
    fm, fn, build = _FIXED[kind]
    if (m, n) != (fm, fn):
        raise DiagramError(f"{kind} has arity {fm}->{fn}, got {m}->{n}")
    return build()


def chain(nodes: Iterable[Node]) -> Diagram:
    """1 -> 1 diagram threading a wire through ``nodes`` from input to output."""
    nodes = list(nodes)
    ids = {0: BNODE}
    for i, nd in enumerate(nodes, start=1):
        ids[i] = nd
    out = len(nodes) + 1
    ids[out] = BNODE
    return Diagram(ids, [(i, i + 1) for i in range(out)], [0], [out])


# -------------------------------------------------------------- composition

def tensor(a: Diagram, b: Diagram) -> Diagram:
    """Side-by-side composition, ``a`` on the left."""
    a = a.relabel(0)
    b = b.relabel(len(a.nodes))
    return Diagram(
        {**a.nodes, **b.nodes},
        a.edges + b.edges,
        a.inputs + b.inputs,
        a.outputs + b.outputs,
    )


def tensor_all(ds: Iterable[Diagram]) -> Diagram:
    out = empty()
    for d in ds:
        out = tensor(out, d)
    return out


def smooth(nodes: dict, edges: list, removable: Iterable[int]) -> tuple[dict, list]:
    """Delete degree-2 pass-through nodes, joining their two neighbours.

    A cycle made only of removable nodes closes into a free loop, which is
    replaced by a legless phase-0 green spider (both evaluate to 2).
    """
    nodes = dict(nodes)
    edges = list(edges)
    next_id = max(nodes, default=-1) + 1
    for v in removable:
        inc = [i for i, (a, b) in enumerate(edges) if a == v or b == v]
        ends = []
        for i in inc:
            a, b = edges[i]
            ends.extend([x for x in (a, b) if x != v] if a != b else [])
        loops = sum(1 for i in inc if edges[i][0] == edges[i][1])
        deg = 2 * loops + len(ends)
        if deg != 2:
            raise DiagramError(f"cannot smooth node {v} of degree {deg}")
        for i in sorted(inc, reverse=True):
            del edges[i]
        del nodes[v]
        if loops:
            nodes[next_id] = zs(0)
            next_id += 1
        else:
            edges.append((ends[0], ends[1]))
    return nodes, edges


def compose(top: Diagram, bottom: Diagram) -> Diagram:
    """Sequential composition: ``bottom`` first, then ``top``."""
    if bottom.n_outputs != top.n_inputs:
        raise DiagramError(
            f"cannot plug {bottom.n_outputs} outputs into {top.n_inputs} inputs"
        )
    bot = bottom.relabel(0)
    tp = top.relabel(len(bot.nodes))
    nodes = {**bot.nodes, **tp.nodes}
    edges = list(bot.edges + tp.edges)
    joints = []
    for o, i in zip(bot.outputs, tp.inputs):
        edges.append((o, i))
        joints.extend([o, i])
    nodes, edges = smooth(nodes, edges, joints)
    return Diagram(nodes, edges, bot.inputs, tp.outputs).relabel(0)


def compose_all(ds: Iterable[Diagram]) -> Diagram:
    """Compose in reading order: the first diagram is applied first."""
    ds = list(ds)
    out = ds[0]
    for d in ds[1:]:
        out = compose(d, out)
    return out


# ------------------------------------------------------------------- checks

def validate(d: Diagram) -> list[str]:
    """Return the list of invariant violations (empty when well formed)."""
    problems = []
    ins, outs = list(d.inputs), list(d.outputs)
    for name, lst in (("input", ins), ("output", outs)):
        for v, c in Counter(lst).items():
            if c > 1:
                problems.append(f"{name} {v} listed {c} times")
    for v in sorted(set(ins) & set(outs)):
        problems.append(f"node {v} is both an input and an output")
    listed = set(ins) | set(outs)
    for v in sorted(listed):
        if v not in d.nodes:
            problems.append(f"boundary {v} does not exist")
        elif d.nodes[v].kind != B:
            problems.append(f"boundary {v} is a {d.nodes[v].kind} node, not B")
    for v, n in sorted(d.nodes.items()):
        deg = d.degree(v)
        if n.kind == B:
            if v not in listed:
                problems.append(f"boundary node {v} is neither input nor output")
            if deg != 1:
                problems.append(f"Boundary degree != 1 at node {v} (degree {deg})")
        elif n.kind == H and deg != 2:
            problems.append(f"Hadamard degree != 2 at node {v} (degree {deg})")
    return problems


def is_valid(d: Diagram) -> bool:
    return not validate(d)


def _nx_graph(d: Diagram) -> nx.MultiGraph:
    g = nx.MultiGraph()
    pos = {v: ("in", i) for i, v in enumerate(d.inputs)}
    pos.update({v: ("out", i) for i, v in enumerate(d.outputs)})
    for v, n in d.nodes.items():
        g.add_node(v, kind=n.kind, phase=n.phase, pos=pos.get(v))
    g.add_edges_from(d.edges)
    return g


def _node_match(a: dict, b: dict) -> bool:
    return a["kind"] == b["kind"] and a["pos"] == b["pos"] and a["phase"] == b["phase"]


def is_isomorphic(a: Diagram, b: Diagram) -> bool:
    """Equality up to node identity, keeping boundary order fixed."""
    if (len(a.nodes), len(a.edges), a.n_inputs, a.n_outputs) != (
        len(b.nodes), len(b.edges), b.n_inputs, b.n_outputs
    ):
        return False
    sig = lambda d: sorted((n.kind, d.degree(v)) for v, n in d.nodes.items())
    if sig(a) != sig(b):
        return False
    return nx.is_isomorphic(_nx_graph(a), _nx_graph(b), node_match=_node_match)


def structural_hash(d: Diagram) -> str:
    """Isomorphism-invariant hash (equal for isomorphic diagrams)."""
    g = nx.Graph()
    pos = {v: f"i{i}" for i, v in enumerate(d.inputs)}
    pos.update({v: f"o{i}" for i, v in enumerate(d.outputs)})
    for v, n in d.nodes.items():
        ph = "" if n.phase is None else f"{n.phase.value:.6f}"
        g.add_node(("n", v), label=f"{n.kind}{ph}{pos.get(v, '')}")
    for i, (u, v) in enumerate(d.edges):
        # subdivide so parallel edges and loops survive in a simple graph
        g.add_node(("e", i), label="loop" if u == v else "e")
        g.add_edge(("n", u), ("e", i))
        g.add_edge(("e", i), ("n", v))
    return nx.weisfeiler_lehman_graph_hash(g, node_attr="label", iterations=4)


# -------------------------------------------------------------- transforms

def color_swap_all(d: Diagram) -> Diagram:
    """Swap green and red on every spider; phases and wiring unchanged."""
    flip = {Z: X, X: Z}
    return Diagram(
        {v: Node(flip[n.kind], n.phase) if n.is_spider else n for v, n in d.nodes.items()},
        d.edges,
        d.inputs,
        d.outputs,
    )


def scale_phases(d: Diagram, k: int) -> Diagram:
    """Multiply every spider phase by the integer ``k``."""
    return Diagram(
        {v: Node(n.kind, n.phase * k) if n.is_spider else n for v, n in d.nodes.items()},
        d.edges,
        d.inputs,
        d.outputs,
    )


def adjoint(d: Diagram) -> Diagram:
    """Upside-down diagram with negated phases; interprets to the dagger."""
    flipped = scale_phases(d, -1)
    return Diagram(flipped.nodes, flipped.edges, d.outputs, d.inputs)
