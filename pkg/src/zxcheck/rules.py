"""The ZX equational rules as executable graph rewrites.

A rule side is a :class:`Pattern`: a small open graph of spiders and
Hadamard boxes whose phases are affine expressions over angle
metavariables. Its boundary consists of ordered fixed legs plus named leg
groups, each group standing for "any number of further legs" on one
spider. Matching is up to topology (node identity never matters), so
wire-bending variants of a rule are the same pattern.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .diagram import BNODE, H, X, Z, Diagram, DiagramError, Node, smooth
from .phase import Phase, PhaseLike, ZERO, as_phase
from .semantics import Mode


class StaleMatch(DiagramError):
    """The match no longer describes the diagram it is applied to."""


# ------------------------------------------------------------------ phases

@dataclass(frozen=True)
class PhaseExpr:
    """``const + sum(coeff * var)`` over angle metavariables."""

    const: Phase = ZERO
    coeffs: tuple[tuple[str, int], ...] = ()

    @classmethod
    def var(cls, name: str) -> "PhaseExpr":
        return cls(ZERO, ((name, 1),))

    @classmethod
    def lit(cls, p: PhaseLike) -> "PhaseExpr":
        return cls(as_phase(p), ())

    @property
    def variables(self) -> set[str]:
        return {v for v, c in self.coeffs if c}

    def _combine(self, other: "PhaseExpr", sign: int) -> "PhaseExpr":
        acc = dict(self.coeffs)
        for v, c in other.coeffs:
            acc[v] = acc.get(v, 0) + sign * c
        const = self.const + other.const if sign > 0 else self.const - other.const
        return PhaseExpr(const, tuple(sorted((v, c) for v, c in acc.items() if c)))

    def __add__(self, other):
        return self._combine(_expr(other), 1)

    def __sub__(self, other):
        return self._combine(_expr(other), -1)

    def __neg__(self):
        return PhaseExpr(-self.const, tuple((v, -c) for v, c in self.coeffs))

    def evaluate(self, bindings: Mapping[str, Phase]) -> Phase:
        out = self.const
        for v, c in self.coeffs:
            out = out + bindings[v] * c
        return out

    def unify(self, host: Phase, bindings: dict) -> dict | None:
        """Extend ``bindings`` so that this expression equals ``host``."""
        unbound = [(v, c) for v, c in self.coeffs if v not in bindings]
        if not unbound:
            return bindings if self.evaluate(bindings) == host else None
        if len(unbound) > 1 or unbound[0][1] not in (1, -1):
            return None
        v, c = unbound[0]
        rest = PhaseExpr(self.const, tuple(x for x in self.coeffs if x[0] != v))
        val = host - rest.evaluate(bindings)
        out = dict(bindings)
        out[v] = val if c == 1 else -val
        return out

    def __repr__(self) -> str:
        parts = [("-" if c < 0 else "+") + (f"{abs(c)}" if abs(c) != 1 else "") + v
                 for v, c in self.coeffs]
        s = "".join(parts).lstrip("+")
        if not self.const.is_zero() or not s:
            s = (s + "+" if s else "") + repr(self.const)
        return s


def _expr(x) -> PhaseExpr:
    if isinstance(x, PhaseExpr):
        return x
    if isinstance(x, str):
        return PhaseExpr.var(x)
    return PhaseExpr.lit(x)


@dataclass(frozen=True)
class PNode:
    kind: str
    phase: PhaseExpr | None = None


def pz(phase=0) -> PNode:
    return PNode(Z, _expr(phase))


def px(phase=0) -> PNode:
    return PNode(X, _expr(phase))


PH = PNode(H)


# ----------------------------------------------------------------- patterns

@dataclass(frozen=True)
class Pattern:
    """One side of a rule.

    ``legs[i]`` names the node carrying fixed boundary ``i``, or is None when
    that boundary is wired straight to another one (listed in ``wires``).
    ``groups`` maps a leg-group name to its spider.
    """

    nodes: Mapping[str, PNode]
    edges: tuple[tuple[str, str], ...] = ()
    legs: tuple[str | None, ...] = ()
    wires: tuple[tuple[int, int], ...] = ()
    groups: Mapping[str, str] = field(default_factory=dict)

    @property
    def variables(self) -> set[str]:
        out = set()
        for n in self.nodes.values():
            if n.phase is not None:
                out |= n.phase.variables
        return out

    def fixed_degree(self, name: str) -> int:
        d = sum((u == name) + (v == name) for u, v in self.edges)
        return d + sum(1 for leg in self.legs if leg == name)

    def instantiate(
        self,
        bindings: Mapping[str, Phase],
        leg_sides: Iterable[str],
        group_sizes: Mapping[str, int] | None = None,
        group_sides: Mapping[str, str] | None = None,
    ) -> Diagram:
        """Concrete diagram for given angles and boundary layout."""
        leg_sides = list(leg_sides)
        group_sizes = dict(group_sizes or {})
        group_sides = dict(group_sides or {})
        ids = {name: i for i, name in enumerate(sorted(self.nodes))}
        nodes: dict[int, Node] = {}
        for name, pn in self.nodes.items():
            phase = pn.phase.evaluate(bindings) if pn.phase is not None else None
            nodes[ids[name]] = Node(pn.kind, phase)
        edges = [(ids[u], ids[v]) for u, v in self.edges]
        nxt = len(ids)
        ins, outs = [], []
        bnd = {}
        for i, side in enumerate(leg_sides):
            bnd[i] = nxt
            nodes[nxt] = BNODE
            (ins if side == "in" else outs).append(nxt)
            if self.legs[i] is not None:
                edges.append((ids[self.legs[i]], nxt))
            nxt += 1
        for i, j in self.wires:
            edges.append((bnd[i], bnd[j]))
        for g in sorted(self.groups):
            for _ in range(group_sizes.get(g, 1)):
                nodes[nxt] = BNODE
                (ins if group_sides.get(g, "out") == "in" else outs).append(nxt)
                edges.append((ids[self.groups[g]], nxt))
                nxt += 1
        return Diagram(nodes, edges, ins, outs)


@dataclass(frozen=True)
class RewriteRule:
    name: str
    family: str
    lhs: Pattern
    rhs: Pattern
    mode: Mode
    # boundary layouts used to check the rule semantically
    signatures: tuple[tuple[str, ...], ...] = ()
    group_sides: Mapping[str, str] = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        if len(self.lhs.legs) != len(self.rhs.legs):
            raise ValueError(f"{self.name}: sides have different boundary counts")
        if set(self.lhs.groups) != set(self.rhs.groups):
            raise ValueError(f"{self.name}: sides have different leg groups")
        if not self.rhs.variables <= self.lhs.variables:
            raise ValueError(f"{self.name}: rhs uses unbound metavariables")

    @property
    def n_boundaries(self) -> int:
        return len(self.lhs.legs)

    @property
    def metavariables(self) -> list[str]:
        return sorted(self.lhs.variables | self.rhs.variables)

    def side(self, direction: str) -> tuple[Pattern, Pattern]:
        if direction in ("forward", "ltr", "->"):
            return self.lhs, self.rhs
        if direction in ("backward", "rtl", "<-"):
            return self.rhs, self.lhs
        raise ValueError(f"unknown direction {direction!r}")

    def can_match(self, direction: str) -> bool:
        """Whether the pattern side determines everything the other side needs."""
        pat, other = self.side(direction)
        if not pat.nodes:
            return False
        if len(set(pat.groups.values())) != len(pat.groups):
            return False
        solvable = set()
        for n in pat.nodes.values():
            if n.phase is not None and len(n.phase.coeffs) == 1 and abs(n.phase.coeffs[0][1]) == 1:
                solvable.add(n.phase.coeffs[0][0])
        for n in pat.nodes.values():
            if n.phase is not None and not n.phase.variables <= solvable:
                return False
        return other.variables <= solvable

    @property
    def bidirectional(self) -> bool:
        return self.can_match("forward") and self.can_match("backward")


# ----------------------------------------------------------------- matching

@dataclass(frozen=True)
class Match:
    rule: str
    direction: str
    node_map: tuple[tuple[str, int], ...]
    bindings: tuple[tuple[str, Phase], ...]
    interior_edges: tuple[int, ...]
    # each boundary half-edge is (edge index, host node it leaves)
    legs: tuple[tuple[int, int], ...]
    groups: tuple[tuple[str, tuple[tuple[int, int], ...]], ...]
    source: Diagram = field(repr=False, compare=False, default=None)

    @property
    def host_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(h for _, h in self.node_map))

    @property
    def angle_bindings(self) -> dict[str, Phase]:
        return dict(self.bindings)


def _half_edges(d: Diagram, v: int) -> list[tuple[int, int]]:
    return [(i, v) for i in d.incident(v)]


def _node_fits(pn: PNode, host: Node) -> bool:
    return pn.kind == host.kind


def _pattern_order(p: Pattern) -> list[str]:
    """Nodes in BFS order per connected component (deterministic)."""
    adj = {n: [] for n in p.nodes}
    for u, v in p.edges:
        adj[u].append(v)
        adj[v].append(u)
    order, seen = [], set()
    for root in sorted(p.nodes):
        if root in seen:
            continue
        queue = [root]
        seen.add(root)
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def find_matches(d: Diagram, rule: RewriteRule, direction: str = "forward") -> list[Match]:
    """All occurrences of one side of ``rule`` in ``d``.

    Occurrences touching the same set of host nodes are reported once.
    Results are ordered by sorted host node ids.
    """
    if not rule.can_match(direction):
        return []
    pat, _ = rule.side(direction)
    order = _pattern_order(pat)
    host_nodes = [v for v in sorted(d.nodes) if d.nodes[v].kind != "B"]
    pedges = {}
    for u, v in pat.edges:
        pedges.setdefault(frozenset((u, v)), 0)
        pedges[frozenset((u, v))] += 1
    grouped = {node: g for g, node in pat.groups.items()}
    found: dict[tuple, Match] = {}

    def consistent(name, h, assign):
        # pattern edges to already-placed nodes need enough host edges
        for other, hv in assign.items():
            need = pedges.get(frozenset((name, other)), 0)
            if need and sum(1 for i in set(d.incident(h)) if sorted(d.edges[i]) == sorted((h, hv))) < need:
                return False
        loops = pedges.get(frozenset((name,)), 0)
        if loops and sum(1 for i in set(d.incident(h)) if d.edges[i] == (h, h)) < loops:
            return False
        return True

    def finish(assign, bindings):
        used = set()
        interior = []
        for u, v in pat.edges:
            hu, hv = assign[u], assign[v]
            cands = [i for i in sorted(set(d.incident(hu)))
                     if i not in used and sorted(d.edges[i]) == sorted((hu, hv))]
            if not cands:
                return
            used.add(cands[0])
            interior.append(cands[0])
        leg_slots = {}
        group_slots = {}
        for name in order:
            h = assign[name]
            free = []
            for i in d.incident(h):
                if i in used:
                    continue
                free.append((i, h))
            # a loop not used internally offers two half-edges at the same node
            free.sort()
            nfixed = sum(1 for leg in pat.legs if leg == name)
            if name in grouped:
                if len(free) < nfixed:
                    return
            elif len(free) != nfixed:
                return
            legs_here = [i for i, leg in enumerate(pat.legs) if leg == name]
            for slot, he in zip(legs_here, free[:nfixed]):
                leg_slots[slot] = he
            if name in grouped:
                group_slots[grouped[name]] = tuple(free[nfixed:])
        m = Match(
            rule=rule.name,
            direction=direction,
            node_map=tuple(sorted(assign.items())),
            bindings=tuple(sorted(bindings.items())),
            interior_edges=tuple(interior),
            legs=tuple(leg_slots.get(i, (-1, -1)) for i in range(len(pat.legs))),
            groups=tuple(sorted(group_slots.items())),
            source=d,
        )
        key = tuple(sorted(assign.values()))
        if key not in found:
            found[key] = m

    def extend(idx, assign, bindings):
        if idx == len(order):
            finish(assign, bindings)
            return
        name = order[idx]
        pn = pat.nodes[name]
        need = pat.fixed_degree(name)
        for h in host_nodes:
            if h in assign.values():
                continue
            host = d.nodes[h]
            if not _node_fits(pn, host):
                continue
            deg = d.degree(h)
            if name in grouped:
                if deg < need:
                    continue
            elif deg != need:
                continue
            b = bindings
            if pn.phase is not None:
                b = pn.phase.unify(host.phase, bindings)
                if b is None:
                    continue
            if not consistent(name, h, assign):
                continue
            assign[name] = h
            extend(idx + 1, assign, b)
            del assign[name]

    extend(0, {}, {})
    return [found[k] for k in sorted(found)]


# ------------------------------------------------------------------ rewrite

def apply(d: Diagram, m: Match, rules: Mapping[str, RewriteRule] | None = None) -> Diagram:
    """Replace the matched occurrence by the other side of the rule."""
    rules = rules if rules is not None else rule_index()
    rule = rules[m.rule]
    if m.source is not None and m.source != d:
        raise StaleMatch(f"match for {m.rule} was found on a different diagram")
    for name, h in m.node_map:
        if h not in d.nodes:
            raise StaleMatch(f"node {h} no longer present")
    _, rep = rule.side(m.direction)
    bindings = dict(m.bindings)

    nodes = dict(d.nodes)
    edges = list(d.edges)
    nxt = max(nodes, default=-1) + 1
    matched = {h for _, h in m.node_map}

    # cut every boundary half-edge with a fresh port node
    ports_of_leg = {}
    group_ports: dict[str, list[int]] = {}
    cuts: list[tuple[tuple[int, int], object]] = [((i, h), ("leg", slot)) for slot, (i, h) in enumerate(m.legs) if i >= 0]
    for g, hes in m.groups:
        group_ports[g] = []
        for he in hes:
            cuts.append((he, ("group", g)))
    endpoints = {i: list(edges[i]) for i in range(len(edges))}
    for (i, h), tag in cuts:
        port = nxt
        nxt += 1
        nodes[port] = BNODE
        ends = endpoints[i]
        # replace one occurrence of the matched endpoint
        pos = next(p for p in (0, 1) if not isinstance(ends[p], tuple) and ends[p] == h)
        ends[pos] = ("port", port)
        if tag[0] == "leg":
            ports_of_leg[tag[1]] = port
        else:
            group_ports[tag[1]].append(port)

    kept = []
    interior = set(m.interior_edges)
    for i in range(len(edges)):
        if i in interior:
            continue
        a, b = endpoints[i]
        a = a[1] if isinstance(a, tuple) else a
        b = b[1] if isinstance(b, tuple) else b
        if a in matched or b in matched:
            raise StaleMatch(f"edge {edges[i]} touches the match but is not accounted for")
        kept.append((a, b))
    for h in matched:
        del nodes[h]

    new_ids = {}
    for name in sorted(rep.nodes):
        pn = rep.nodes[name]
        phase = pn.phase.evaluate(bindings) if pn.phase is not None else None
        new_ids[name] = nxt
        nodes[nxt] = Node(pn.kind, phase)
        nxt += 1
    for u, v in rep.edges:
        kept.append((new_ids[u], new_ids[v]))
    for slot, name in enumerate(rep.legs):
        if name is not None:
            kept.append((new_ids[name], ports_of_leg[slot]))
    for i, j in rep.wires:
        kept.append((ports_of_leg[i], ports_of_leg[j]))
    for g, name in rep.groups.items():
        for port in group_ports.get(g, []):
            kept.append((new_ids[name], port))

    ports = list(ports_of_leg.values()) + [p for ps in group_ports.values() for p in ps]
    nodes, kept = smooth(nodes, kept, ports)
    return Diagram(nodes, kept, d.inputs, d.outputs)


# ---------------------------------------------------------------- rule set

def _sqrt2(prefix: str) -> tuple[dict, list]:
    """Closed green-red pair; evaluates to sqrt(2)."""
    return {f"{prefix}z": pz(0), f"{prefix}x": px(0)}, [(f"{prefix}z", f"{prefix}x")]


def _dual(rule: RewriteRule, name: str) -> RewriteRule:
    def swap(p: Pattern) -> Pattern:
        flip = {Z: X, X: Z, H: H}
        return Pattern(
            {k: PNode(flip[n.kind], n.phase) for k, n in p.nodes.items()},
            p.edges, p.legs, p.wires, dict(p.groups),
        )
    return RewriteRule(name, rule.family, swap(rule.lhs), swap(rule.rhs), rule.mode,
                       rule.signatures, dict(rule.group_sides),
                       rule.description + " (colour dual)")


def _build_rules() -> list[RewriteRule]:
    a, b = PhaseExpr.var("a"), PhaseExpr.var("b")
    half_pi = Fraction(1, 2)
    rules = []

    s1 = RewriteRule(
        "S1g", "S1",
        Pattern({"u": pz(a), "v": pz(b)}, (("u", "v"),), groups={"A": "u", "B": "v"}),
        Pattern({"w": pz(a + b)}, groups={"A": "w", "B": "w"}),
        Mode.EXACT,
        signatures=((),),
        group_sides={"A": "in", "B": "out"},
        description="adjacent green spiders fuse, phases add",
    )
    rules += [s1, _dual(s1, "S1r")]

    s2 = RewriteRule(
        "S2g", "S2",
        Pattern({"u": pz(0)}, legs=("u", "u")),
        Pattern({}, legs=(None, None), wires=((0, 1),)),
        Mode.EXACT,
        signatures=(("in", "out"), ("out", "out"), ("in", "in")),
        description="phase-free degree-2 green spider is a wire (also bent as cup/cap)",
    )
    rules += [s2, _dual(s2, "S2r")]

    g, gs = _sqrt2("s")
    b1 = RewriteRule(
        "B1g", "B1",
        Pattern({"c": pz(0), "p": px(0), **g}, (("p", "c"), *gs), legs=("c", "c")),
        Pattern({"p1": px(0), "p2": px(0)}, legs=("p1", "p2")),
        Mode.EXACT,
        signatures=(("out", "out"), ("in", "out")),
        description="green copy of a red state gives two red states",
    )
    rules += [b1, _dual(b1, "B1r")]

    g, gs = _sqrt2("s")
    b2 = RewriteRule(
        "B2g", "B2",
        Pattern({"m": px(0), "c": pz(0)}, (("m", "c"),), legs=("m", "m", "c", "c")),
        Pattern(
            {"c1": pz(0), "c2": pz(0), "m1": px(0), "m2": px(0), **g},
            (("c1", "m1"), ("c1", "m2"), ("c2", "m1"), ("c2", "m2"), *gs),
            legs=("c1", "c2", "m1", "m2"),
        ),
        Mode.EXACT,
        signatures=(("in", "in", "out", "out"), ("in", "out", "in", "out")),
        description="bialgebra: red merge then green copy",
    )
    rules += [b2, _dual(b2, "B2r")]

    g, gs = _sqrt2("s")
    k1 = RewriteRule(
        "K1g", "K1",
        Pattern({"c": pz(a), "p": px(1), **g}, (("p", "c"), *gs), legs=("c", "c")),
        Pattern({"p1": px(1), "p2": px(1)}, legs=("p1", "p2")),
        Mode.PHASE,
        signatures=(("out", "out"), ("in", "out")),
        description="green spider copies a red pi state (global phase e^{ia})",
    )
    rules += [k1, _dual(k1, "K1r")]

    k2 = RewriteRule(
        "K2g", "K2",
        Pattern({"p": px(1), "s": pz(a)}, (("p", "s"),), legs=("p", "s")),
        Pattern({"s": pz(-a), "p": px(1)}, (("s", "p"),), legs=("s", "p")),
        Mode.PHASE,
        signatures=(("in", "out"),),
        description="red pi commutes past green a, negating it",
    )
    rules += [k2, _dual(k2, "K2r")]

    c = RewriteRule(
        "Cg", "C",
        Pattern({"h1": PH, "s": pz(a), "h2": PH}, (("h1", "s"), ("s", "h2")), legs=("h1", "h2")),
        Pattern({"s": px(a)}, legs=("s", "s")),
        Mode.EXACT,
        signatures=(("in", "out"),),
        description="Hadamard conjugation turns green into red",
    )
    rules += [c, _dual(c, "Cr")]

    rules.append(RewriteRule(
        "EU", "EU",
        Pattern({"h": PH}, legs=("h", "h")),
        Pattern(
            {"z1": pz(half_pi), "x": px(half_pi), "z2": pz(half_pi)},
            (("z1", "x"), ("x", "z2")),
            legs=("z1", "z2"),
        ),
        Mode.PHASE,
        signatures=(("in", "out"),),
        description="Euler decomposition of the Hadamard box",
    ))

    g1, gs1 = _sqrt2("s")
    g2, gs2 = _sqrt2("t")
    rules.append(RewriteRule(
        "D1", "D1",
        Pattern({**g1, **g2}, (*gs1, *gs2)),
        Pattern({"z": pz(0)}),
        Mode.EXACT,
        signatures=((),),
        description="two sqrt(2) pairs equal the legless green spider (2)",
    ))
    rules.append(RewriteRule(
        "D2", "D2",
        Pattern({"r": px(a)}),
        Pattern({"g": pz(a)}),
        Mode.EXACT,
        signatures=((),),
        description="legless spiders of either colour agree",
    ))
    return rules


def _build_derived() -> list[RewriteRule]:
    a = PhaseExpr.var("a")
    return [
        RewriteRule(
            "HH", "derived",
            Pattern({"h1": PH, "h2": PH}, (("h1", "h2"),), legs=("h1", "h2")),
            Pattern({}, legs=(None, None), wires=((0, 1),)),
            Mode.EXACT,
            signatures=(("in", "out"),),
            description="two Hadamards cancel",
        ),
        RewriteRule(
            "Lg", "derived",
            Pattern({"u": pz(a)}, (("u", "u"),), groups={"A": "u"}),
            Pattern({"u": pz(a)}, groups={"A": "u"}),
            Mode.EXACT,
            signatures=((),),
            group_sides={"A": "out"},
            description="self-loop on a green spider disappears",
        ),
        RewriteRule(
            "Lr", "derived",
            Pattern({"u": px(a)}, (("u", "u"),), groups={"A": "u"}),
            Pattern({"u": px(a)}, groups={"A": "u"}),
            Mode.EXACT,
            signatures=((),),
            group_sides={"A": "out"},
            description="self-loop on a red spider disappears",
        ),
    ]


_RULES = _build_rules()
_DERIVED = _build_derived()


def builtin_rules() -> list[RewriteRule]:
    """The calculus' rule set (rule T is built into the graph representation)."""
    return list(_RULES)


def derived_rules() -> list[RewriteRule]:
    """Helper rewrites used by ``simplify``; each is an exact equation."""
    return list(_DERIVED)


def rule_index() -> dict[str, RewriteRule]:
    return {r.name: r for r in _RULES + _DERIVED}


def get_rule(name: str) -> RewriteRule:
    try:
        return rule_index()[name]
    except KeyError:
        raise KeyError(f"no rule named {name!r}") from None


SIMPLIFY_RULES = ("S1g", "S1r", "Lg", "Lr", "S2g", "S2r", "HH")


def simplify(d: Diagram, max_steps: int = 10_000) -> tuple[Diagram, list[str]]:
    """Greedy fusion / identity removal / Hadamard cancellation.

    Returns the simplified diagram and the names of the rules applied, in
    order. Every step removes a node or an edge, so this terminates.
    """
    index = rule_index()
    used = []
    for _ in range(max_steps):
        for name in SIMPLIFY_RULES:
            ms = find_matches(d, index[name])
            if ms:
                d = apply(d, ms[0], index)
                used.append(name)
                break
        else:
            return d, used
    raise RuntimeError("simplify did not converge")


def catalog() -> list[dict]:
    """Name, family, boundary count, metavariables and mode of every rule."""
    return [
        {
            "name": r.name,
            "family": r.family,
            "boundaries": r.n_boundaries,
            "leg_groups": sorted(r.lhs.groups),
            "metavariables": r.metavariables,
            "mode": r.mode.value,
            "bidirectional": r.bidirectional,
            "description": r.description,
        }
        for r in _RULES
    ]
