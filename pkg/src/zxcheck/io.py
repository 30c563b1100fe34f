"""JSON documents for diagrams, matrices and Euler triples."""
from __future__ import annotations

import json
from pathlib import Path

from .diagram import Diagram, DiagramError, Node, validate
from .phase import Phase
from .semantics import matrix_from_json, matrix_to_json

__all__ = [
    "diagram_to_json", "diagram_from_json", "load_json", "dump_json",
    "load_diagram", "save_diagram", "matrix_to_json", "matrix_from_json",
]


def diagram_to_json(d: Diagram) -> dict:
    """Canonical document: node ids renumbered 0..n-1 as strings."""
    d = d.relabel(0)
    nodes = []
    for v in sorted(d.nodes):
        n = d.nodes[v]
        doc = {"id": str(v), "kind": n.kind}
        if n.is_spider:
            doc["phase"] = n.phase.to_json()
        nodes.append(doc)
    return {
        "nodes": nodes,
        "edges": [[str(u), str(v)] for u, v in d.edges],
        "inputs": [str(v) for v in d.inputs],
        "outputs": [str(v) for v in d.outputs],
    }


def diagram_from_json(doc: dict, check: bool = True) -> Diagram:
    try:
        ids = {}
        nodes = {}
        for i, nd in enumerate(doc["nodes"]):
            key = str(nd["id"])
            if key in ids:
                raise DiagramError(f"duplicate node id {key!r}")
            ids[key] = i
            kind = nd["kind"]
            if kind in ("Z", "X"):
                phase = Phase.from_json(nd.get("phase", {"pi_num": 0, "pi_den": 1}))
                nodes[i] = Node(kind, phase)
            else:
                if "phase" in nd:
                    raise DiagramError(f"node {key!r} of kind {kind} cannot carry a phase")
                nodes[i] = Node(kind)
        look = lambda k: ids[str(k)]
        edges = [(look(u), look(v)) for u, v in doc.get("edges", [])]
        d = Diagram(nodes, edges, [look(v) for v in doc.get("inputs", [])],
                    [look(v) for v in doc.get("outputs", [])])
    except KeyError as exc:
        raise DiagramError(f"missing or unknown id/field {exc}") from None
    if check:
        problems = validate(d)
        if problems:
            raise DiagramError("; ".join(problems))
    return d


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def dump_json(doc, path=None, indent: int = 2) -> str:
    text = json.dumps(doc, indent=indent, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_diagram(path) -> Diagram:
    return diagram_from_json(load_json(path))


def save_diagram(d: Diagram, path) -> None:
    dump_json(diagram_to_json(d), path)

