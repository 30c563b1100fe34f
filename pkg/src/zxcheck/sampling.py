"""Seeded random diagrams for property tests and the gap search."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .diagram import BNODE, HNODE, Diagram, Node, X, Z
from .phase import Phase

PI_QUARTERS = tuple(Phase.pi(j, 4) for j in range(8))


def random_phase(rng: np.random.Generator, alphabet: Sequence[Phase] | None = None) -> Phase:
    if alphabet:
        return alphabet[int(rng.integers(len(alphabet)))]
    return Phase.radians(float(rng.uniform(0.0, 2 * np.pi)))


def random_diagram(
    rng: np.random.Generator,
    max_nodes: int = 8,
    max_inputs: int = 3,
    max_outputs: int = 3,
    alphabet: Sequence[Phase] | None = PI_QUARTERS,
    p_hadamard: float = 0.2,
    extra_edges: int | None = None,
) -> Diagram:
    """A well-formed diagram with at most ``max_nodes`` interior nodes.

    Spiders may end up with parallel edges or self-loops; Hadamard boxes
    always get exactly two edges.
    """
    n_int = int(rng.integers(1, max_nodes + 1))
    n_h = int(rng.binomial(n_int, p_hadamard))
    n_sp = max(1, n_int - n_h)
    n_h = n_int - n_sp
    nodes: dict[int, Node] = {}
    spiders = []
    for i in range(n_sp):
        kind = Z if rng.random() < 0.5 else X
        nodes[i] = Node(kind, random_phase(rng, alphabet))
        spiders.append(i)
    hs = list(range(n_sp, n_sp + n_h))
    for h in hs:
        nodes[h] = HNODE
    edges = []
    pick = lambda: spiders[int(rng.integers(len(spiders)))]
    for h in hs:
        edges.append((h, pick()))
        edges.append((h, pick()))
    m = int(rng.integers(0, max_inputs + 1))
    n = int(rng.integers(0, max_outputs + 1))
    nxt = n_int
    ins, outs = [], []
    for lst, count in ((ins, m), (outs, n)):
        for _ in range(count):
            nodes[nxt] = BNODE
            lst.append(nxt)
            edges.append((nxt, pick()))
            nxt += 1
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n_sp + 1))
    for _ in range(extra_edges):
        edges.append((pick(), pick()))
    return Diagram(nodes, edges, ins, outs)
