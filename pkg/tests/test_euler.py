import math

import numpy as np
import pytest

from zxcheck.euler import (
    XZX, ZXZ, EulerTriple, NotUnitaryError, as_diagram, color_swap, decompose, phase_gadget,
    random_unitary, recompose, triples_close,
)
from zxcheck.phase import Phase
from zxcheck.semantics import H_MATRIX, interpret


def test_hadamard_zxz():
    t = decompose(H_MATRIX, ZXZ)
    for p in t.angles:
        assert abs(p.value - math.pi / 2) < 1e-9
    assert abs(np.exp(1j * t.global_phase.value) - np.exp(-1j * math.pi / 4)) < 1e-9


@pytest.mark.parametrize("order", [ZXZ, XZX])
def test_round_trip(order, rng):
    for _ in range(200):
        u = random_unitary(rng)
        t = decompose(u, order)
        assert np.linalg.norm(recompose(t) - u) <= 1e-9
        assert 0 <= t.beta.value <= math.pi + 1e-12


def test_gimbal_lock_gamma_zero():
    t = decompose(np.diag([1, np.exp(0.7j)]), ZXZ)
    assert t.gamma.is_zero() and t.beta.is_zero()
    assert abs(t.alpha.value - 0.7) < 1e-12
    t = decompose(np.array([[0, 1j], [1, 0]]), ZXZ)
    assert t.gamma.is_zero() and abs(t.beta.value - math.pi) < 1e-12


def test_color_swap_preserves_matrix(rng):
    for _ in range(100):
        t = decompose(random_unitary(rng), ZXZ)
        s = color_swap(t)
        assert s.order == XZX
        assert np.linalg.norm(recompose(s) - recompose(t)) <= 1e-9
        assert triples_close(color_swap(s), t)


def test_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        decompose([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        decompose(np.eye(3))
    with pytest.raises(ValueError):
        decompose(np.eye(2), "zyz")


def test_diagram_matches_recompose(rng):
    for order in (ZXZ, XZX):
        t = decompose(random_unitary(rng), order)
        d, omitted = as_diagram(t)
        assert omitted == t.global_phase
        assert np.linalg.norm(np.exp(1j * omitted.value) * interpret(d) - recompose(t)) <= 1e-9
        full, none = as_diagram(t, realize_phase=True)
        assert none.is_zero()
        assert np.linalg.norm(interpret(full) - recompose(t)) <= 1e-9


@pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 2, math.pi, 4.0, 2 * math.pi - 1e-3])
def test_phase_gadget(theta):
    v = interpret(phase_gadget(Phase.radians(theta)))[0, 0]
    assert abs(v - np.exp(1j * theta)) <= 1e-9


def test_triple_json_round_trip():
    t = EulerTriple("XZX", Phase.pi(1, 3), 0.5, Phase.pi(1), Phase.pi(1, 4))
    assert t.order == XZX
    assert EulerTriple.from_json(t.to_json()) == t
