"""Euler decompositions of single-qubit maps into phase-spider chains.

Phases use the spider convention Z(a) = diag(1, e^{ia}) and
X(a) = H Z(a) H, so the angles of a triple are exactly the labels of the
corresponding diagram. For order ZXZ a triple (alpha, beta, gamma, phi)
stands for

    e^{i phi} Z(gamma) X(beta) Z(alpha)          (alpha acts first)

and for XZX the colours are swapped. Writing c = cos(beta/2) and
s = sin(beta/2), the ZXZ product is

    e^{i(phi + beta/2)} [[c, -i s e^{i alpha}], [-i s e^{i gamma}, c e^{i(alpha+gamma)}]]

which ``decompose`` inverts entry by entry. Converting ZXZ to XZX is
decompose(recompose(t), XZX); since H Z(a) H = X(a), that is the ZXZ
decomposition of H U H with the colours relabelled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import Diagram, chain, tensor_all, xs, z_spider, zs
from .phase import Phase, PhaseLike, as_phase
from .semantics import H_MATRIX

ZXZ, XZX = "zxz", "xzx"
GIMBAL_TOL = 1e-12
UNITARY_TOL = 1e-9


class NotUnitaryError(ValueError):
    pass


def z_matrix(a: PhaseLike) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * as_phase(a).value)]).astype(complex)


def x_matrix(a: PhaseLike) -> np.ndarray:
    return H_MATRIX @ z_matrix(a) @ H_MATRIX


@dataclass(frozen=True)
class EulerTriple:
    order: str
    alpha: Phase
    beta: Phase
    gamma: Phase
    global_phase: Phase = Phase.zero()

    def __post_init__(self):
        order = self.order.lower()
        if order not in (ZXZ, XZX):
            raise ValueError(f"order must be zxz or xzx, not {self.order!r}")
        object.__setattr__(self, "order", order)
        for f in ("alpha", "beta", "gamma", "global_phase"):
            object.__setattr__(self, f, as_phase(getattr(self, f)))

    @property
    def angles(self) -> tuple[Phase, Phase, Phase]:
        return self.alpha, self.beta, self.gamma

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
            "gamma": self.gamma.to_json(),
            "global_phase": self.global_phase.to_json(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EulerTriple":
        return cls(
            doc["order"],
            Phase.from_json(doc["alpha"]),
            Phase.from_json(doc["beta"]),
            Phase.from_json(doc["gamma"]),
            Phase.from_json(doc.get("global_phase", {"pi_num": 0, "pi_den": 1})),
        )


def other_order(order: str) -> str:
    return XZX if order == ZXZ else ZXZ


def recompose(t: EulerTriple) -> np.ndarray:
    outer, middle = (z_matrix, x_matrix) if t.order == ZXZ else (x_matrix, z_matrix)
    u = outer(t.gamma) @ middle(t.beta) @ outer(t.alpha)
    return np.exp(1j * t.global_phase.value) * u


def _zxz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    c, s = abs(u[0, 0]), abs(u[1, 0])
    if s < GIMBAL_TOL:
        phi = np.angle(u[0, 0])
        return float(np.angle(u[1, 1]) - phi), 0.0, 0.0, float(phi)
    if c < GIMBAL_TOL:
        phi = np.angle(u[1, 0])
        return float(np.angle(u[0, 1]) - phi), math.pi, 0.0, float(phi)
    beta = 2.0 * math.atan2(s, c)
    a00 = np.angle(u[0, 0])
    alpha = np.angle(u[0, 1]) - a00 + math.pi / 2
    gamma = np.angle(u[1, 0]) - a00 + math.pi / 2
    return float(alpha), beta, float(gamma), float(a00 - beta / 2)


def decompose(u, order: str = ZXZ) -> EulerTriple:
    """Euler angles of a 2x2 unitary; the global phase is returned too.

    Branches: beta is taken in [0, pi]. When the off-diagonal vanishes
    (beta = 0) gamma is set to 0; when the diagonal vanishes (beta = pi)
    gamma is also set to 0.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise NotUnitaryError("matrix has non-finite entries")
    if np.linalg.norm(u.conj().T @ u - np.eye(2)) > UNITARY_TOL:
        raise NotUnitaryError("matrix is not unitary within 1e-9")
    order = order.lower()
    if order == XZX:
        u = H_MATRIX @ u @ H_MATRIX
    elif order != ZXZ:
        raise ValueError(f"order must be zxz or xzx, not {order!r}")
    a, b, g, phi = _zxz_angles(u)
    return EulerTriple(order, Phase.radians(a), Phase.radians(b), Phase.radians(g), Phase.radians(phi))


def color_swap(t: EulerTriple) -> EulerTriple:
    """The same unitary as an opposite-order triple (global phase adjusted)."""
    return decompose(recompose(t), other_order(t.order))


def phase_gadget(theta: PhaseLike) -> Diagram:
    """Closed diagram of four legless green spiders evaluating to e^{i theta}.

    Two legless spiders Z(2u), Z(2v) multiply to 4 cos(u) cos(v) e^{i(u+v)}.
    With u + v = h and cos(u - v) = 1/2 - cos(h) that is exactly e^{ih},
    solvable whenever cos(h) >= -1/2; h = theta/2 taken in (-pi/2, pi/2]
    always qualifies, and two such pairs give e^{i theta}.
    """
    t = as_phase(theta).value
    if t > math.pi:
        t -= 2 * math.pi
    h = t / 2
    d = math.acos(0.5 - math.cos(h))
    u, v = (h + d) / 2, (h - d) / 2
    pair = [z_spider(Phase.radians(2 * u), 0, 0), z_spider(Phase.radians(2 * v), 0, 0)]
    return tensor_all(pair + pair)


def as_diagram(t: EulerTriple, realize_phase: bool = False) -> tuple[Diagram, Phase]:
    """Three-spider chain for ``t``.

    Returns the diagram and the global phase it leaves out (zero when
    ``realize_phase`` attaches a scalar gadget for it).
    """
    outer, middle = (zs, xs) if t.order == ZXZ else (xs, zs)
    d = chain([outer(t.alpha), middle(t.beta), outer(t.gamma)])
    if realize_phase and not t.global_phase.is_zero():
        return tensor_all([d, phase_gadget(t.global_phase)]), Phase.zero()
    return d, t.global_phase


def triples_close(a: EulerTriple, b: EulerTriple, tol: float = UNITARY_TOL) -> bool:
    """Same order and same unitary within ``tol``."""
    return a.order == b.order and np.linalg.norm(recompose(a) - recompose(b)) <= tol


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary (QR of a complex Gaussian matrix)."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
