"""Spider phases: angles on the circle group.

A phase is stored either exactly, as a rational multiple of pi kept in
``[0, 2)``, or as a float number of radians in ``[0, 2*pi)``. Arithmetic
between exact phases stays exact, which matters when phases get multiplied
by an integer model parameter.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

TWO_PI = 2.0 * math.pi
FLOAT_ATOL = 1e-12


class Phase:
    __slots__ = ("_frac", "_rad")

    def __init__(self, frac: Fraction | None = None, rad: float | None = None):
        if (frac is None) == (rad is None):
            raise ValueError("Phase needs exactly one of frac / rad")
        if frac is not None:
            self._frac = Fraction(frac) % 2
            self._rad = None
        else:
            r = float(rad)
            if not math.isfinite(r):
                raise ValueError(f"non-finite phase {rad!r}")
            r = math.fmod(r, TWO_PI)
            if r < 0:
                r += TWO_PI
            if r >= TWO_PI:
                r = 0.0
            self._frac = None
            self._rad = r

    @classmethod
    def pi(cls, num: int = 1, den: int = 1) -> "Phase":
        """``(num/den) * pi``."""
        return cls(frac=Fraction(num, den))

    @classmethod
    def radians(cls, value: float) -> "Phase":
        return cls(rad=value)

    @classmethod
    def zero(cls) -> "Phase":
        return cls(frac=Fraction(0))

    @property
    def is_exact(self) -> bool:
        return self._frac is not None

    @property
    def fraction(self) -> Fraction | None:
        """Multiple of pi, for exact phases."""
        return self._frac

    @property
    def value(self) -> float:
        """Angle in radians, in ``[0, 2*pi)``."""
        if self._frac is not None:
            return float(self._frac) * math.pi
        return self._rad

    def is_zero(self) -> bool:
        return self == ZERO

    def __add__(self, other) -> "Phase":
        other = as_phase(other)
        if self.is_exact and other.is_exact:
            return Phase(frac=self._frac + other._frac)
        return Phase(rad=self.value + other.value)

    __radd__ = __add__

    def __neg__(self) -> "Phase":
        if self.is_exact:
            return Phase(frac=-self._frac)
        return Phase(rad=-self._rad)

    def __sub__(self, other) -> "Phase":
        return self + (-as_phase(other))

    def __mul__(self, k) -> "Phase":
        if not isinstance(k, int):
            return NotImplemented
        if self.is_exact:
            return Phase(frac=self._frac * k)
        return Phase(rad=self._rad * k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Phase):
            try:
                other = as_phase(other)
            except TypeError:
                return NotImplemented
        if self.is_exact and other.is_exact:
            return self._frac == other._frac
        d = abs(self.value - other.value)
        return min(d, TWO_PI - d) <= FLOAT_ATOL

    def __hash__(self) -> int:
        # coarse on purpose: exact and float forms of one angle must collide
        return hash(round(self.value, 9) % round(TWO_PI, 9))

    def __repr__(self) -> str:
        if self.is_exact:
            f = self._frac
            if f == 0:
                return "0"
            num = "" if f.numerator == 1 else str(f.numerator)
            return f"{num}pi" + ("" if f.denominator == 1 else f"/{f.denominator}")
        return f"{self._rad:.12g}"

    def to_json(self) -> dict:
        if self.is_exact:
            return {"pi_num": self._frac.numerator, "pi_den": self._frac.denominator}
        return {"float": self._rad}

    @classmethod
    def from_json(cls, doc) -> "Phase":
        if isinstance(doc, dict):
            if "pi_num" in doc:
                den = int(doc.get("pi_den", 1))
                if den <= 0:
                    raise ValueError("pi_den must be positive")
                return cls.pi(int(doc["pi_num"]), den)
            if "float" in doc:
                return cls.radians(float(doc["float"]))
        raise ValueError(f"bad phase document: {doc!r}")


PhaseLike = Union[Phase, Fraction, int, float]

ZERO = Phase.zero()


def as_phase(x: PhaseLike) -> Phase:
    """Coerce to a Phase.

    Integers and Fractions are read as multiples of pi; floats as radians.
    """
    if isinstance(x, Phase):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a phase")
    if isinstance(x, (int, Rational)):
        return Phase(frac=Fraction(x))
    if isinstance(x, float):
        return Phase(rad=x)
    raise TypeError(f"cannot interpret {x!r} as a phase")


_PI_TEXT = re.compile(r"^\s*([+-]?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$")


def parse_phase(x) -> Phase:
    """Phase from a JSON value or CLI string.

    Accepts phase documents, plain numbers (radians), and text such as
    ``"pi/3"``, ``"-2pi/3"`` or ``"0"``.
    """
    if isinstance(x, (dict, Phase)):
        return x if isinstance(x, Phase) else Phase.from_json(x)
    if isinstance(x, bool):
        raise ValueError("bool is not a phase")
    if isinstance(x, int):
        return Phase.radians(float(x)) if x else Phase.zero()
    if isinstance(x, float):
        return Phase.radians(x)
    if isinstance(x, str):
        m = _PI_TEXT.match(x.lower())
        if m:
            num = m.group(1)
            num = {"": 1, "+": 1, "-": -1}.get(num, None) if num in ("", "+", "-") else int(num)
            return Phase.pi(num, int(m.group(2) or 1))
        try:
            return parse_phase(float(x)) if x.strip() not in ("0", "+0", "-0") else Phase.zero()
        except ValueError:
            pass
    raise ValueError(f"cannot parse phase {x!r}")
