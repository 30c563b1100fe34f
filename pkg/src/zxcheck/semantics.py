"""Interpretation of diagrams as complex matrices.

``interpret(d, k)`` evaluates ``d`` under the model that multiplies every
spider phase by the integer ``k`` (``k = 1`` is the standard model). Row
indices enumerate output basis states and column indices input basis
states; the leftmost wire is the most significant bit.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .diagram import B, X, Z, Diagram, DiagramError, validate
from .phase import PhaseLike, as_phase

SQRT2 = np.sqrt(2.0)
H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
DEFAULT_TOL = 1e-9
MAX_WIRES = 12


def z_tensor(phase: PhaseLike, degree: int, k: int = 1) -> np.ndarray:
    """Green spider as a rank-``degree`` tensor."""
    ph = as_phase(phase) * k
    t = np.zeros((2,) * degree, dtype=complex)
    t[(0,) * degree] += 1.0
    t[(1,) * degree] += np.exp(1j * ph.value)
    return t


def x_tensor(phase: PhaseLike, degree: int, k: int = 1) -> np.ndarray:
    """Red spider: the green tensor with a Hadamard on every leg."""
    t = z_tensor(phase, degree, k)
    for ax in range(degree):
        t = np.moveaxis(np.tensordot(H_MATRIX, t, axes=(1, ax)), 0, ax)
    return t


def generator_matrix(kind: str, m: int, n: int, phase: PhaseLike = 0, k: int = 1) -> np.ndarray:
    """Matrix of a single generator; see ``diagram.generator`` for kinds."""
    if kind == Z:
        return z_tensor(phase, m + n, k).reshape(2**n, 2**m)
    if kind == X:
        return x_tensor(phase, m + n, k).reshape(2**n, 2**m)
    fixed = {
        "H": ((1, 1), H_MATRIX),
        "wire": ((1, 1), np.eye(2, dtype=complex)),
        "swap": ((2, 2), np.eye(4, dtype=complex)[[0, 2, 1, 3]]),
        "cup": ((2, 0), np.array([[1, 0, 0, 1]], dtype=complex)),
        "cap": ((0, 2), np.array([[1], [0], [0], [1]], dtype=complex)),
    }
    if kind not in fixed:
        raise DiagramError(f"unknown generator {kind!r}")
    arity, mat = fixed[kind]
    if arity != (m, n):
        raise DiagramError(f"{kind} has arity {arity[0]}->{arity[1]}, got {m}->{n}")
    return mat.copy()


# -------------------------------------------------------------- contraction

def _contract_pair(a, b):
    ta, la = a
    tb, lb = b
    letters = {}
    for lab in la + lb:
        if lab not in letters:
            letters[lab] = string.ascii_letters[len(letters)]
    shared = set(la) & set(lb)
    out = [lab for lab in la if lab not in shared] + [lab for lab in lb if lab not in shared]
    spec = "{},{}->{}".format(
        "".join(letters[x] for x in la),
        "".join(letters[x] for x in lb),
        "".join(letters[x] for x in out),
    )
    return np.einsum(spec, ta, tb), out


def _trace_repeats(t, labels):
    """Contract labels that occur twice on the same tensor (self-loops)."""
    labels = list(labels)
    while True:
        seen = {}
        for i, lab in enumerate(labels):
            if lab in seen:
                j = seen[lab]
                t = np.trace(t, axis1=j, axis2=i)
                labels = [x for p, x in enumerate(labels) if p not in (i, j)]
                break
            seen[lab] = i
        else:
            return t, labels


def interpret(d: Diagram, k: int = 1, max_wires: int = MAX_WIRES) -> np.ndarray:
    """Evaluate ``d`` under the angle-multiplying model ``k``."""
    problems = validate(d)
    if problems:
        raise DiagramError("; ".join(problems))
    if d.n_inputs > max_wires or d.n_outputs > max_wires:
        raise DiagramError(f"more than {max_wires} wires on one side")

    free = {}
    tensors = []
    for i, (u, v) in enumerate(d.edges):
        bu, bv = d.nodes[u].kind == B, d.nodes[v].kind == B
        if bu and bv:
            # bare wire between two boundaries
            free[u], free[v] = ("w", i, 0), ("w", i, 1)
            tensors.append((np.eye(2, dtype=complex), [free[u], free[v]]))
        elif bu:
            free[u] = i
        elif bv:
            free[v] = i
    for v in d.interior():
        node = d.nodes[v]
        deg = d.degree(v)
        if node.kind == Z:
            t = z_tensor(node.phase, deg, k)
        elif node.kind == X:
            t = x_tensor(node.phase, deg, k)
        else:
            t = H_MATRIX
        t, labels = _trace_repeats(t, d.incident(v))
        tensors.append((t, labels))

    if not tensors:
        result, labels = np.ones((), dtype=complex), []
    else:
        while len(tensors) > 1:
            best = None
            order = sorted(range(len(tensors)), key=lambda i: tensors[i][0].ndim)
            for i in order:
                li = set(tensors[i][1])
                for j in range(len(tensors)):
                    if j == i or not (li & set(tensors[j][1])):
                        continue
                    lj = set(tensors[j][1])
                    size = len(li ^ lj)
                    if best is None or size < best[0]:
                        best = (size, i, j)
                if best is not None:
                    break
            if best is None:
                # disconnected pieces: outer product of the two smallest
                i, j = order[0], order[1]
            else:
                _, i, j = best
            merged = _contract_pair(tensors[i], tensors[j])
            tensors = [t for p, t in enumerate(tensors) if p not in (i, j)] + [merged]
        result, labels = tensors[0]

    want = [free[b] for b in d.outputs] + [free[b] for b in d.inputs]
    perm = [labels.index(lab) for lab in want]
    result = np.transpose(result, perm) if perm else result
    return np.asarray(result).reshape(2**d.n_outputs, 2**d.n_inputs)


# --------------------------------------------------------------- comparison

class Mode(str, Enum):
    EXACT = "exact"
    PHASE = "phase"
    SCALAR = "scalar"

    @property
    def rank(self) -> int:
        return _RANK[self]


_RANK = {Mode.EXACT: 0, Mode.PHASE: 1, Mode.SCALAR: 2}
MODE_ALIASES = {
    "exact": Mode.EXACT,
    "phase": Mode.PHASE,
    "global-phase": Mode.PHASE,
    "scalar": Mode.SCALAR,
}


def as_mode(m) -> Mode:
    if isinstance(m, Mode):
        return m
    try:
        return MODE_ALIASES[str(m).lower()]
    except KeyError:
        raise ValueError(f"unknown comparison mode {m!r}") from None


@dataclass(frozen=True)
class Equivalence:
    mode: Mode
    equivalent: bool
    residual: float
    witness: complex = 1.0
    tolerance: float = DEFAULT_TOL

    @property
    def phase(self) -> float:
        """Argument of the witness, in radians."""
        return float(np.angle(self.witness))

    def __bool__(self) -> bool:
        return bool(self.equivalent)


def compare(a, b, mode=Mode.EXACT, tol: float = DEFAULT_TOL) -> Equivalence:
    """Decide whether ``a`` equals ``b`` exactly, up to a global phase
    ``a ~ e^{i phi} b``, or up to a nonzero scalar ``a ~ lambda b``.

    The witness is 1, ``e^{i phi}`` or ``lambda`` respectively.
    """
    mode = as_mode(mode)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if np.isnan(a).any() or np.isnan(b).any():
        raise ValueError("NaN in matrix comparison")
    if a.shape != b.shape:
        return Equivalence(mode, False, float("inf"), 0.0, tol)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    ip = np.vdot(b, a)
    if mode is Mode.EXACT:
        res = float(np.linalg.norm(a - b))
        return Equivalence(mode, bool(res <= tol * max(1.0, nb)), res, 1.0, tol)
    if mode is Mode.PHASE:
        w = ip / abs(ip) if abs(ip) > 0 else 1.0 + 0j
        res = float(np.linalg.norm(a - w * b))
        return Equivalence(mode, bool(res <= tol * max(1.0, nb)), res, complex(w), tol)
    if nb == 0:
        res = float(na)
        return Equivalence(mode, bool(res <= tol), res, 0.0, tol)
    lam = ip / (nb * nb)
    res = float(np.linalg.norm(a - lam * b))
    ok = bool(res <= tol * max(1.0, na) and abs(lam) > 0)
    if na <= tol:
        # a = 0 is not a nonzero multiple of b != 0
        ok = False
    return Equivalence(mode, ok, res, complex(lam), tol)


def classify(a, b, tol: float = DEFAULT_TOL) -> Equivalence | None:
    """Tightest mode under which ``a`` and ``b`` agree, or None."""
    for mode in (Mode.EXACT, Mode.PHASE, Mode.SCALAR):
        r = compare(a, b, mode, tol)
        if r.equivalent:
            return r
    return None


def best_scalar_residual(a, b) -> tuple[float, complex]:
    """``min_lambda ||a - lambda b||_F`` and the minimising lambda."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    nb2 = float(np.vdot(b, b).real)
    if nb2 == 0:
        return float(np.linalg.norm(a)), 0j
    lam = np.vdot(b, a) / nb2
    return float(np.linalg.norm(a - lam * b)), complex(lam)


# ------------------------------------------------------------ matrix format

def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "shape": list(m.shape),
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    rows, cols = (int(x) for x in doc["shape"])
    data = doc["data"]
    if len(data) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
    flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    return flat.reshape(rows, cols)


def format_matrix(m, digits: int = 6) -> str:
    m = np.asarray(m, dtype=complex)
    def cell(z):
        re = 0.0 if abs(z.real) < 10**-digits else z.real
        im = 0.0 if abs(z.imag) < 10**-digits else z.imag
        return f"{re:+.{digits}f}{im:+.{digits}f}j"
    lines = [f"# {m.shape[0]}x{m.shape[1]}"]
    lines += ["  ".join(cell(z) for z in row) for row in m]
    return "\n".join(lines)
