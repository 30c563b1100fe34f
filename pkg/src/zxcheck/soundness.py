"""Empirical soundness of the rule set under angle-multiplying models.

Each rule is instantiated on a grid of angles (multiples of pi/4) plus
seeded random angles, both sides are evaluated under the model ``k`` and
compared. A verdict of "sound" means no counterexample was found at the
given tolerance over the sampled instances; it is not a proof.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .phase import Phase
from .rules import RewriteRule, builtin_rules
from .sampling import PI_QUARTERS
from .semantics import DEFAULT_TOL, Mode, best_scalar_residual, classify, interpret

FAIL = "FAIL"
_ORDER = {Mode.EXACT.value: 0, Mode.PHASE.value: 1, Mode.SCALAR.value: 2, FAIL: 3}
GROUP_SIZE_CHOICES = (1, 2, 0)


@dataclass(frozen=True)
class SampleSpec:
    grid: tuple[Phase, ...] = PI_QUARTERS
    max_grid_vars: int = 3
    n_random: int = 50
    seed: int = 0
    tol: float = DEFAULT_TOL


@dataclass(frozen=True)
class SoundnessRow:
    rule: str
    k: int
    bindings: dict
    signature: tuple
    group_sizes: dict
    mode: str
    witness: complex
    residual: float

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "k": self.k,
            "bindings": {v: p.to_json() for v, p in self.bindings.items()},
            "signature": list(self.signature),
            "group_sizes": self.group_sizes,
            "mode": self.mode,
            "witness": [self.witness.real, self.witness.imag],
            "residual": self.residual,
        }


@dataclass
class SoundnessReport:
    rows: list[SoundnessRow] = field(default_factory=list)
    tol: float = DEFAULT_TOL

    def ks(self) -> list[int]:
        return sorted({r.k for r in self.rows})

    def rules(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r.rule not in seen:
                seen.append(r.rule)
        return seen

    def weakest(self, rule: str, k: int) -> str:
        modes = [r.mode for r in self.rows if r.rule == rule and r.k == k]
        return max(modes, key=_ORDER.__getitem__)

    def failures(self, k: int | None = None) -> list[SoundnessRow]:
        """Failing rows, most decisive (largest residual) first."""
        rows = [r for r in self.rows if r.mode == FAIL and (k is None or r.k == k)]
        return sorted(rows, key=lambda r: (-r.residual, r.rule))

    def is_sound(self, k: int) -> bool:
        return not self.failures(k)

    def samples(self, k: int) -> int:
        return sum(1 for r in self.rows if r.k == k)

    def to_json(self) -> dict:
        return {
            "tolerance": self.tol,
            "summary": {
                str(k): {
                    "sound": self.is_sound(k),
                    "samples": self.samples(k),
                    "rules": {name: self.weakest(name, k) for name in self.rules()},
                }
                for k in self.ks()
            },
            "failures": [r.to_json() for r in self.failures()],
            "rows": [r.to_json() for r in self.rows],
        }

    def table(self) -> str:
        ks = self.ks()
        width = max([len(n) for n in self.rules()] + [4])
        lines = ["rule".ljust(width) + "".join(f"  k={k:<6}" for k in ks)]
        for name in self.rules():
            lines.append(name.ljust(width) + "".join(f"  {self.weakest(name, k):<8}" for k in ks))
        for k in ks:
            if self.is_sound(k):
                verdict = (f"k={k}: sound (no counterexample at tolerance {self.tol:g} "
                           f"over {self.samples(k)} samples)")
            else:
                worst = self.failures(k)[0]
                verdict = f"k={k}: UNSOUND, worst {worst.rule} residual {worst.residual:.3g}"
            lines.append(verdict)
        return "\n".join(lines)


def angle_bindings(variables: list[str], spec: SampleSpec) -> list[dict]:
    """Exhaustive grid (when few enough variables) plus seeded random draws."""
    if not variables:
        return [{}]
    out = []
    if len(variables) <= spec.max_grid_vars:
        for combo in itertools.product(spec.grid, repeat=len(variables)):
            out.append(dict(zip(variables, combo)))
    rng = np.random.default_rng(spec.seed)
    for _ in range(spec.n_random):
        vals = rng.uniform(0.0, 2 * np.pi, size=len(variables))
        out.append({v: Phase.radians(float(x)) for v, x in zip(variables, vals)})
    return out


def _layouts(rule: RewriteRule):
    groups = sorted(rule.lhs.groups)
    sigs = rule.signatures or (("out",) * rule.n_boundaries,)
    if not groups:
        return [(sig, {}) for sig in sigs]
    sizes = [dict(zip(groups, (GROUP_SIZE_CHOICES[(i + j) % len(GROUP_SIZE_CHOICES)]
                               for j in range(len(groups)))))
             for i in range(len(GROUP_SIZE_CHOICES))]
    return [(sig, gs) for sig in sigs for gs in sizes]


def check_rule(rule: RewriteRule, k: int = 1, samples: SampleSpec | None = None) -> list[SoundnessRow]:
    """Classify both sides of ``rule`` under model ``k`` on every sample."""
    spec = samples or SampleSpec()
    rows = []
    for bindings in angle_bindings(rule.metavariables, spec):
        for sig, sizes in _layouts(rule):
            lhs = rule.lhs.instantiate(bindings, sig, sizes, rule.group_sides)
            rhs = rule.rhs.instantiate(bindings, sig, sizes, rule.group_sides)
            a, b = interpret(lhs, k), interpret(rhs, k)
            c = classify(a, b, spec.tol)
            if c is None:
                res, lam = best_scalar_residual(a, b)
                rows.append(SoundnessRow(rule.name, k, bindings, tuple(sig), sizes, FAIL, lam, res))
            else:
                rows.append(SoundnessRow(rule.name, k, bindings, tuple(sig), sizes,
                                         c.mode.value, c.witness, c.residual))
    return rows


def check_all(ks, samples: SampleSpec | None = None, rules: list[RewriteRule] | None = None) -> SoundnessReport:
    """Full rule x model matrix."""
    spec = samples or SampleSpec()
    report = SoundnessReport(tol=spec.tol)
    for k in ks:
        for rule in rules if rules is not None else builtin_rules():
            report.rows.extend(check_rule(rule, int(k), spec))
    return report


def measured_mode(rule: RewriteRule, samples: SampleSpec | None = None) -> str:
    """Weakest mode the rule needs under the standard model."""
    rows = check_rule(rule, 1, samples)
    return max((r.mode for r in rows), key=_ORDER.__getitem__)
