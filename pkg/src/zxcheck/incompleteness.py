"""The single-qubit counterexample to completeness, as a checkable certificate.

``D1`` is the five-spider chain Z(pi/3) X(pi/3) Z(2pi/3) X(pi/3) Z(pi/3);
``D2`` is its green-red-green Euler form Z(alpha) X(beta) Z(alpha) with

    alpha = -arccos(5 / (2 sqrt 13)),   beta = -2 arcsin(sqrt(3) / 4).

The chains agree up to the global phase e^{i phi}, phi = arcsin(sqrt(3)/4) - alpha.
Legless spiders Z(-phi) on D1 and Z(phi) on D2 cancel that phase, so
the two diagrams are exactly equal. Under the model k = -3 every angle of
the five-spider chain becomes 0 or pi and it collapses to a multiple of
the identity, while Z(-3 alpha) X(-3 beta) Z(-3 alpha) does not. The model
is sound, so no derivation can turn one diagram into the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import Diagram, chain, is_valid, tensor, xs, z_spider, zs
from .phase import Phase
from .semantics import DEFAULT_TOL, Mode, best_scalar_residual, compare, interpret

ALPHA = -math.acos(5.0 / (2.0 * math.sqrt(13.0)))
BETA = -2.0 * math.asin(math.sqrt(3.0) / 4.0)
PHI = math.asin(math.sqrt(3.0) / 4.0) - ALPHA

SEPARATOR_K = -3
SEPARATION_FLOOR = 0.1


def d1_chain() -> Diagram:
    third, two_thirds = Phase.pi(1, 3), Phase.pi(2, 3)
    return chain([zs(third), xs(third), zs(two_thirds), xs(third), zs(third)])


def d2_chain() -> Diagram:
    a, b = Phase.radians(ALPHA), Phase.radians(BETA)
    return chain([zs(a), xs(b), zs(a)])


def build_counterexample() -> tuple[Diagram, Diagram]:
    """The pair (D1, D2), scalars included."""
    d1 = tensor(d1_chain(), z_spider(Phase.radians(-PHI), 0, 0))
    d2 = tensor(d2_chain(), z_spider(Phase.radians(PHI), 0, 0))
    return d1, d2


@dataclass(frozen=True)
class CounterexampleCertificate:
    d1: Diagram
    d2: Diagram
    k: int
    tol: float
    floor: float
    exact_residual: float
    phase_residual: float
    phase_witness: float
    level: str | None
    identity_offdiag: float | None
    identity_residual: float | None
    separation_residual: float
    separation_lambda: complex
    certified: bool

    def to_json(self) -> dict:
        from .io import diagram_to_json
        return {
            "verdict": "certified" if self.certified else "not certified",
            "k": self.k,
            "tolerance": self.tol,
            "separation_floor": self.floor,
            "standard_equality": {
                "level": self.level,
                "exact_residual": self.exact_residual,
                "phase_residual": self.phase_residual,
                "phase_witness": self.phase_witness,
            },
            "identity_check": {
                "max_offdiag": self.identity_offdiag,
                "residual": self.identity_residual,
            },
            "separation": {
                "residual": self.separation_residual,
                "lambda": [self.separation_lambda.real, self.separation_lambda.imag],
            },
            "d1": diagram_to_json(self.d1),
            "d2": diagram_to_json(self.d2),
        }

    def summary(self) -> str:
        lines = [
            f"standard model: exact residual {self.exact_residual:.3e}, "
            f"up-to-phase residual {self.phase_residual:.3e} "
            f"(witness phase {self.phase_witness / math.pi:+.6f} pi) -> {self.level or 'NOT EQUAL'}",
        ]
        if self.identity_offdiag is not None:
            lines.append(
                f"model k={self.k}: [[D1]] off-diagonal max {self.identity_offdiag:.3e}, "
                f"distance to scalar*I {self.identity_residual:.3e}"
            )
        lines.append(
            f"model k={self.k}: min_lambda ||[[D1]] - lambda [[D2]]|| = "
            f"{self.separation_residual:.6f} (floor {self.floor})"
        )
        lines.append("verdict: " + ("certified" if self.certified else "not certified"))
        return "\n".join(lines)


def certify_pair(
    d1: Diagram,
    d2: Diagram,
    k: int = SEPARATOR_K,
    tol: float = DEFAULT_TOL,
    floor: float = SEPARATION_FLOOR,
    check_identity: bool = False,
) -> CounterexampleCertificate:
    """Equal in the standard model, separated by the sound model ``k``."""
    a1, a2 = interpret(d1, 1), interpret(d2, 1)
    exact = compare(a1, a2, Mode.EXACT, tol)
    phase = compare(a1, a2, Mode.PHASE, tol)
    level = "exact" if exact else ("phase" if phase else None)

    k1, k2 = interpret(d1, k), interpret(d2, k)
    sep, lam = best_scalar_residual(k1, k2)

    offdiag = ident = None
    if check_identity:
        offdiag = float(np.max(np.abs(k1 - np.diag(np.diag(k1))))) if k1.size else 0.0
        ident, _ = best_scalar_residual(k1, np.eye(k1.shape[0]))
    certified = level is not None and sep >= floor
    if check_identity:
        certified = certified and ident <= tol * max(1.0, np.linalg.norm(k1))
    return CounterexampleCertificate(
        d1, d2, k, tol, floor,
        exact.residual, phase.residual, phase.phase, level,
        offdiag, ident, sep, lam, bool(certified),
    )


def verify(tol: float = DEFAULT_TOL, floor: float = SEPARATION_FLOOR, k: int = SEPARATOR_K) -> CounterexampleCertificate:
    """Certificate for the built-in pair."""
    d1, d2 = build_counterexample()
    assert is_valid(d1) and is_valid(d2)
    return certify_pair(d1, d2, k, tol, floor, check_identity=True)
