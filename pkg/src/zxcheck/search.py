"""Bounded search for gap candidates.

A gap candidate is a pair of diagrams whose standard interpretations agree
up to a global phase while some sound model k (k = 1 mod 4) tells them
apart even up to a nonzero scalar. That is the shape of the incompleteness
witness, so every candidate can be handed to
``incompleteness.certify_pair`` as is.

The search is best effort: finding nothing means "none found within
budget" and says nothing about completeness.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import OrderedDict, defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from .diagram import BNODE, HNODE, Diagram, Node, X, Z, chain, is_isomorphic, structural_hash, wire
from .phase import Phase, parse_phase
from .semantics import DEFAULT_TOL, H_MATRIX, Mode, best_scalar_residual, compare, interpret

DEFAULT_PROBES = (-3, 5, -7, 9)
DEFAULT_ALPHABET = tuple(Phase.pi(j, 4) for j in range(8))
FINGERPRINT_DIGITS = 6
DEDUP_WINDOW = 20000


class ConfigError(ValueError):
    pass


@dataclass
class SearchConfig:
    budget: int = 4
    signature: tuple[int, int] = (1, 1)
    alphabet: tuple[Phase, ...] = DEFAULT_ALPHABET
    probes: tuple[int, ...] = DEFAULT_PROBES
    tol: float = DEFAULT_TOL
    floor: float = 0.1
    seed: int = 0
    dedup: bool = True
    # "chain" enumerates every 1->1 word exhaustively; "graph" samples
    family: str | None = None
    reduced: bool = False
    samples: int = 2000
    p_hadamard: float = 0.2
    seeds: list[Diagram] = field(default_factory=list)
    max_budget: int = 10
    max_boundary: int = 6

    def __post_init__(self):
        self.signature = tuple(int(x) for x in self.signature)
        self.alphabet = tuple(parse_phase(a) for a in self.alphabet)
        self.probes = tuple(int(k) for k in self.probes)
        if self.family is None:
            self.family = "chain" if self.signature == (1, 1) else "graph"

    def validate(self) -> None:
        bad = [k for k in self.probes if k % 4 != 1]
        if bad:
            raise ConfigError(f"probe models must satisfy k = 1 mod 4, got {bad}")
        if not 0 <= self.budget <= self.max_budget:
            raise ConfigError(f"budget must be in [0, {self.max_budget}]")
        m, n = self.signature
        if m < 0 or n < 0 or m + n > self.max_boundary:
            raise ConfigError(f"signature needs m, n >= 0 and m + n <= {self.max_boundary}")
        if self.family not in ("chain", "graph"):
            raise ConfigError(f"unknown family {self.family!r}")
        if self.family == "chain" and self.signature != (1, 1):
            raise ConfigError("chain family needs signature (1, 1)")
        if not self.alphabet:
            raise ConfigError("alphabet is empty")
        if self.tol <= 0 or self.floor <= 0:
            raise ConfigError("tol and floor must be positive")
        for d in self.seeds:
            if (d.n_inputs, d.n_outputs) != self.signature:
                raise ConfigError("seed diagram does not match the signature")

    @classmethod
    def from_json(cls, doc: dict) -> "SearchConfig":
        from .io import diagram_from_json, load_diagram
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        kw = dict(doc)
        seeds = []
        for s in kw.pop("seeds", []):
            seeds.append(load_diagram(s) if isinstance(s, str) else diagram_from_json(s))
        try:
            cfg = cls(**kw, seeds=seeds)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    def to_json(self) -> dict:
        return {
            "budget": self.budget,
            "signature": list(self.signature),
            "alphabet": [a.to_json() for a in self.alphabet],
            "probes": list(self.probes),
            "tol": self.tol,
            "floor": self.floor,
            "seed": self.seed,
            "dedup": self.dedup,
            "family": self.family,
            "reduced": self.reduced,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class GapCandidate:
    d1: Diagram
    d2: Diagram
    residual: float
    witness_phase: float
    k: int
    separation: float
    semantics_hash: str
    separations: tuple[tuple[int, float], ...] = ()

    def to_json(self) -> dict:
        from .io import diagram_to_json
        return {
            "standard_residual": self.residual,
            "witness_phase": self.witness_phase,
            "k": self.k,
            "separation": self.separation,
            "separations": {str(k): r for k, r in self.separations},
            "semantics_hash": self.semantics_hash,
            "d1": diagram_to_json(self.d1),
            "d2": diagram_to_json(self.d2),
        }


# ------------------------------------------------------------ enumeration

def _letters(cfg: SearchConfig) -> list[Node]:
    out = [Node(Z, a) for a in cfg.alphabet] + [Node(X, a) for a in cfg.alphabet]
    return out + [HNODE]


def _redundant(word: Sequence[Node]) -> bool:
    """Word contains an obvious redex: fusable pair, HH, or a phase-free spider."""
    for a, b in zip(word, word[1:]):
        if a.kind == b.kind:
            return True
    return any(n.is_spider and n.phase.is_zero() for n in word)


def enumerate_words(cfg: SearchConfig) -> Iterator[tuple[Node, ...]]:
    letters = _letters(cfg)
    for length in range(cfg.budget + 1):
        for word in itertools.product(letters, repeat=length):
            if cfg.reduced and _redundant(word):
                continue
            yield word


def _connected_to_boundary(d: Diagram) -> bool:
    g = nx.MultiGraph()
    g.add_nodes_from(d.nodes)
    g.add_edges_from(d.edges)
    boundary = set(d.inputs) | set(d.outputs)
    if not boundary:
        return nx.is_connected(g) if len(g) else True
    return all(comp & boundary for comp in map(set, nx.connected_components(g)))


def random_graph(rng: np.random.Generator, cfg: SearchConfig) -> Diagram:
    """One sampled diagram with exactly the configured boundary signature."""
    m, n = cfg.signature
    n_int = int(rng.integers(1, max(cfg.budget, 1) + 1))
    n_h = int(rng.binomial(n_int, cfg.p_hadamard)) if n_int > 1 else 0
    n_sp = max(1, n_int - n_h)
    n_h = n_int - n_sp
    nodes, edges = {}, []
    alphabet = cfg.alphabet
    for i in range(n_sp):
        kind = Z if rng.random() < 0.5 else X
        nodes[i] = Node(kind, alphabet[int(rng.integers(len(alphabet)))])
    pick = lambda: int(rng.integers(n_sp))
    for h in range(n_sp, n_int):
        nodes[h] = HNODE
        edges += [(h, pick()), (h, pick())]
    ins, outs = [], []
    nxt = n_int
    for lst, count in ((ins, m), (outs, n)):
        for _ in range(count):
            nodes[nxt] = BNODE
            lst.append(nxt)
            edges.append((nxt, pick()))
            nxt += 1
    # a spanning path keeps most samples connected; extra edges add cycles
    for a, b in zip(range(n_sp - 1), range(1, n_sp)):
        if rng.random() < 0.8:
            edges.append((a, b))
    for _ in range(int(rng.integers(0, n_sp + 1))):
        edges.append((pick(), pick()))
    return Diagram(nodes, edges, ins, outs)


class _Window:
    """Remembers recently seen diagrams up to isomorphism."""

    def __init__(self, size: int = DEDUP_WINDOW):
        self.size = size
        self.seen: OrderedDict[str, list[Diagram]] = OrderedDict()

    def add(self, d: Diagram) -> bool:
        h = structural_hash(d)
        bucket = self.seen.get(h)
        if bucket is not None:
            if any(is_isomorphic(d, e) for e in bucket):
                return False
            bucket.append(d)
            return True
        self.seen[h] = [d]
        if len(self.seen) > self.size:
            self.seen.popitem(last=False)
        return True


def enumerate_diagrams(cfg: SearchConfig) -> Iterator[Diagram]:
    """Deterministic stream of well-formed diagrams: seeds first, then the family."""
    cfg.validate()
    window = _Window()
    for d in cfg.seeds:
        if window.add(d):
            yield d
    if cfg.family == "chain":
        # distinct words are never isomorphic (boundary order is fixed),
        # so only the seeds need the window
        for word in enumerate_words(cfg):
            d = chain(word) if word else wire()
            if not cfg.seeds or window.add(d):
                yield d
        return
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.samples):
        d = random_graph(rng, cfg)
        if not _connected_to_boundary(d):
            continue
        if window.add(d):
            yield d


# ------------------------------------------------------------ fingerprints

def _round_key(v: np.ndarray) -> tuple:
    r = np.round(v.ravel(), FINGERPRINT_DIGITS) + 0.0   # + 0.0 drops -0.0
    return tuple(np.concatenate([r.real, r.imag]).tolist())


def _pivot(m: np.ndarray) -> complex:
    flat = m.ravel()
    mags = np.abs(flat)
    top = mags.max()
    i = int(np.argmax(mags >= top * (1 - 1e-6)))
    return flat[i]


def phase_fingerprint(m: np.ndarray) -> tuple:
    """Invariant under global phase: rotate the pivot entry onto the positive reals."""
    m = np.asarray(m, dtype=complex)
    if not m.size or np.abs(m).max() == 0:
        return (m.shape, "zero")
    p = _pivot(m)
    return (m.shape, _round_key(m * (abs(p) / p)))


def scalar_fingerprint(m: np.ndarray) -> tuple:
    """Invariant under any nonzero scalar: divide by the pivot entry."""
    m = np.asarray(m, dtype=complex)
    if not m.size or np.abs(m).max() == 0:
        return (m.shape, "zero")
    return (m.shape, _round_key(m / _pivot(m)))


def fingerprint_hash(fp: tuple) -> str:
    return hashlib.sha256(repr(fp).encode()).hexdigest()[:16]


# ------------------------------------------------------------ gap finding

def _chain_matrix(d: Diagram, k: int) -> np.ndarray | None:
    """Fast path for 1->1 chains: a product of 2x2 matrices, or None."""
    if (d.n_inputs, d.n_outputs) != (1, 1):
        return None
    end = d.outputs[0]
    cur, prev = d.inputs[0], None
    out = np.eye(2, dtype=complex)
    for _ in range(len(d.nodes)):
        nb = d.neighbors(cur)
        if prev is not None:
            nb.remove(prev)
        if len(nb) != 1:
            return None
        prev, cur = cur, nb[0]
        if cur == end:
            return out
        node = d.nodes[cur]
        if node.kind == BNODE.kind or d.degree(cur) != 2 or cur in d.neighbors(cur):
            return None
        if node.kind == HNODE.kind:
            g = H_MATRIX
        else:
            z = np.diag([1.0, np.exp(1j * (node.phase * k).value)])
            g = z if node.kind == Z else H_MATRIX @ z @ H_MATRIX
        out = g @ out
    return None


def evaluate(d: Diagram, k: int = 1) -> np.ndarray:
    m = _chain_matrix(d, k)
    return interpret(d, k) if m is None else m


def _canon_key(d: Diagram) -> tuple:
    from .io import diagram_to_json
    return (len(d.nodes), repr(diagram_to_json(d)))


_LETTER_CACHE: dict = {}


def _letter_matrix(node: Node, k: int) -> np.ndarray:
    key = (node.kind, node.phase, k)
    g = _LETTER_CACHE.get(key)
    if g is None:
        if node.kind == HNODE.kind:
            g = H_MATRIX
        else:
            z = np.diag([1.0, np.exp(1j * (node.phase * k).value)])
            g = z if node.kind == Z else H_MATRIX @ z @ H_MATRIX
        _LETTER_CACHE[key] = g
    return g


class _Item:
    """A diagram, or a chain word whose diagram is only built on demand."""

    __slots__ = ("word", "_diagram", "std", "probe_keys", "_key")

    def __init__(self, source):
        if isinstance(source, Diagram):
            self.word, self._diagram = None, source
        else:
            self.word, self._diagram = tuple(source), None
        self.std = self.matrix(1)
        self.probe_keys = ()
        self._key = None

    @property
    def diagram(self) -> Diagram:
        if self._diagram is None:
            self._diagram = chain(self.word) if self.word else wire()
        return self._diagram

    def matrix(self, k: int) -> np.ndarray:
        if self.word is None:
            return evaluate(self._diagram, k)
        out = np.eye(2, dtype=complex)
        for node in self.word:
            out = _letter_matrix(node, k) @ out
        return out

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = _canon_key(self.diagram)
        return self._key


def _sources(cfg: SearchConfig):
    if cfg.family != "chain":
        yield from enumerate_diagrams(cfg)
        return
    yield from cfg.seeds
    yield from enumerate_words(cfg)


def find_gaps(cfg: SearchConfig, diagrams: Sequence[Diagram] | None = None) -> list[GapCandidate]:
    """All certified pairs among the enumerated diagrams, sorted canonically.

    Diagrams are bucketed by a phase-invariant fingerprint of the standard
    interpretation; inside a bucket they are split again by scalar-invariant
    fingerprints under each probe model, and only pairs that land in
    different sub-buckets are checked exactly.
    """
    cfg.validate()
    if not cfg.probes:
        return []
    stream = diagrams if diagrams is not None else _sources(cfg)

    groups: dict[tuple, list[_Item]] = defaultdict(list)
    for src in stream:
        it = _Item(src)
        if not it.std.size or np.linalg.norm(it.std) <= cfg.tol:
            continue   # the zero map is equal to nothing interesting
        groups[phase_fingerprint(it.std)].append(it)

    found: dict[tuple, GapCandidate] = {}
    for fp, items in groups.items():
        if len(items) < 2:
            continue
        sem_hash = fingerprint_hash(fp)
        for it in items:
            it.probe_keys = tuple(scalar_fingerprint(it.matrix(k)) for k in cfg.probes)
        if len({it.probe_keys for it in items}) < 2:
            continue
        if cfg.dedup:
            # items that agree at k=1 and at every probe are interchangeable
            reps: dict[tuple, _Item] = {}
            for it in items:
                cur = reps.get(it.probe_keys)
                if cur is None or it.key < cur.key:
                    reps[it.probe_keys] = it
            items = list(reps.values())
        for a, b in itertools.combinations(items, 2):
            if a.probe_keys == b.probe_keys:
                continue
            if b.key < a.key:
                a, b = b, a
            c = _certify(a, b, cfg, sem_hash)
            if c is not None:
                found.setdefault((a.key, b.key), c)
    return [found[k] for k in sorted(found)]


def _certify(a: _Item, b: _Item, cfg: SearchConfig, sem_hash: str) -> GapCandidate | None:
    eq = compare(a.std, b.std, Mode.PHASE, cfg.tol)
    if not eq:
        return None
    seps = []
    for k, ka, kb in zip(cfg.probes, a.probe_keys, b.probe_keys):
        if ka == kb:
            continue
        res, _ = best_scalar_residual(a.matrix(k), b.matrix(k))
        if res >= cfg.floor:
            seps.append((k, res))
    if not seps:
        return None
    k, res = seps[0]
    return GapCandidate(a.diagram, b.diagram, eq.residual, eq.phase, k, res, sem_hash, tuple(seps))


# ------------------------------------------------------------ fixtures

@dataclass(frozen=True)
class FixtureReport:
    name: str
    equal_up_to_phase: bool
    residual: float
    witness_phase: float
    best_scalar_residual: float
    separations: tuple[tuple[int, float, bool], ...]

    @property
    def separated_by(self) -> list[int]:
        return [k for k, _, sep in self.separations if sep]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "equal_up_to_phase": self.equal_up_to_phase,
            "standard_residual": self.residual,
            "witness_phase": self.witness_phase,
            "best_scalar_residual": self.best_scalar_residual,
            "probes": [{"k": k, "residual": r, "separates": s} for k, r, s in self.separations],
        }

    def summary(self) -> str:
        head = (f"{self.name}: " + ("equal up to phase" if self.equal_up_to_phase else "NOT equal up to phase")
                + f" (residual {self.residual:.3e}, best scalar residual {self.best_scalar_residual:.3e})")
        probes = ", ".join(f"k={k}: {r:.4f}{' separates' if s else ''}" for k, r, s in self.separations)
        return head + ("\n  " + probes if probes else "")


def check_fixture_pair(lhs: Diagram, rhs: Diagram, cfg: SearchConfig | None = None,
                       name: str = "pair") -> FixtureReport:
    """Report on a proposed equality; no outcome is assumed."""
    cfg = cfg or SearchConfig()
    if (lhs.n_inputs, lhs.n_outputs) != (rhs.n_inputs, rhs.n_outputs):
        raise ConfigError(
            f"signature mismatch: {lhs.n_inputs}->{lhs.n_outputs} vs {rhs.n_inputs}->{rhs.n_outputs}")
    a, b = interpret(lhs, 1), interpret(rhs, 1)
    eq = compare(a, b, Mode.PHASE, cfg.tol)
    best, _ = best_scalar_residual(a, b)
    seps = []
    for k in cfg.probes:
        res, _ = best_scalar_residual(interpret(lhs, k), interpret(rhs, k))
        seps.append((k, res, bool(res >= cfg.floor)))
    return FixtureReport(name, bool(eq), eq.residual, eq.phase, best, tuple(seps))


FIXTURES = ("flowers", "fences")


def load_fixture(name: str) -> tuple[Diagram, Diagram]:
    from importlib import resources
    from .io import diagram_from_json
    import json
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    doc = json.loads(resources.files("zxcheck.fixtures").joinpath(f"{name}.json").read_text())
    return diagram_from_json(doc["lhs"]), diagram_from_json(doc["rhs"])
