"""Compositional vulnerability bounds and relative-monotonicity checks.

Every estimator here is paired with direct evaluation on the composed
channel; the helpers return the predicted envelope and, where cheap, the
exact value so callers can check one against the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import hidden_choice, parallel, visible_choice
from .channel import Channel, GainFunction, Prior
from .measures import identity_gain, posterior_vulnerability
from .refinement import refines

SLACK = 1e-9
SUPPORT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class BoundInterval:
    lower: float
    upper: float
    exact: Optional[float] = None

    def contains(self, value: float, tol: float = SLACK) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def is_consistent(self, tol: float = SLACK) -> bool:
        if self.lower > self.upper + tol:
            return False
        return self.exact is None or self.contains(self.exact, tol)


def _effective_support(pi: Prior, g: GainFunction, inputs) -> np.ndarray:
    """Mask of secrets ``x`` with ``pi(x) g(w, x) > 0`` for some action ``w``."""
    weighted = g.aligned(inputs) * pi.aligned(inputs)[None, :]
    return np.any(weighted > SUPPORT_THRESHOLD, axis=0)


def parallel_bounds(pi: Prior, g: GainFunction, c1: Channel, c2: Channel, exact: bool = True) -> BoundInterval:
    v1 = posterior_vulnerability(pi, c1, g)
    v2 = posterior_vulnerability(pi, c2, g)
    mask = _effective_support(pi, g, c1.inputs)
    m2 = c2.with_input_order(c1.inputs).matrix
    if mask.any():
        f2 = float(np.sum(np.max(m2[mask], axis=0)))
        f1 = float(np.sum(np.max(c1.matrix[mask], axis=0)))
    else:
        f1 = f2 = 0.0
    # no channel beats one revealing the secret: sum_x pi(x) max_w g(w, x)
    ceiling = float(pi.aligned(c1.inputs) @ np.max(g.aligned(c1.inputs), axis=0))
    value = posterior_vulnerability(pi, parallel(c1, c2), g) if exact else None
    return BoundInterval(max(v1, v2), min(v1 * f2, v2 * f1, ceiling), value)


def visible_choice_exact(pi: Prior, g: GainFunction, c1: Channel, c2: Channel, p: float) -> float:
    """``V_g`` of a visible choice is the ``p``-weighted average of the components'."""
    return p * posterior_vulnerability(pi, c1, g) + (1 - p) * posterior_vulnerability(pi, c2, g)


def hidden_choice_bounds(
    pi: Prior, g: GainFunction, c1: Channel, c2: Channel, p: float, exact: bool = True
) -> BoundInterval:
    v1 = posterior_vulnerability(pi, c1, g)
    v2 = posterior_vulnerability(pi, c2, g)
    value = posterior_vulnerability(pi, hidden_choice(c1, c2, p), g) if exact else None
    return BoundInterval(max(p * v1, (1 - p) * v2), p * v1 + (1 - p) * v2, value)


def operator_ordering_check(pi: Prior, g: GainFunction, c1: Channel, c2: Channel, p: float) -> bool:
    """``V[par] >= V[visible] >= V[hidden]`` on the explicitly composed channels."""
    vp = posterior_vulnerability(pi, parallel(c1, c2), g)
    vv = posterior_vulnerability(pi, visible_choice(c1, c2, p), g)
    vh = posterior_vulnerability(pi, hidden_choice(c1, c2, p), g)
    return vp >= vv - SLACK and vv >= vh - SLACK


@dataclass(frozen=True)
class Counterexample:
    """One verified failure of relative monotonicity.

    ``better`` is at least as secure as ``worse`` in isolation (checked by
    refinement), yet composing both with ``context`` leaves ``left`` (the
    composition with ``better``) *more* vulnerable than ``right``.
    """

    name: str
    p: Optional[float]
    left: float
    right: float
    expected_left: float
    expected_right: float
    components_ordered: bool

    @property
    def holds(self) -> bool:
        return self.components_ordered and self.left > self.right


@dataclass(frozen=True)
class CounterexampleReport:
    cases: tuple = field(default_factory=tuple)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.cases)


_X3 = ["x1", "x2", "x3"]
_X2 = ["x1", "x2"]


def _parallel_case() -> Counterexample:
    c1 = Channel(_X3, ["y1", "y2"], [[1, 0], [1, 0], [0, 1]])
    c2 = Channel(_X3, ["y1", "y2"], [[1, 0], [0, 1], [0, 1]])
    pi, g = Prior.uniform(_X3), identity_gain(_X3)
    # only the pointwise ordering at (pi, g) is claimed
    ordered = posterior_vulnerability(pi, c2, g) <= posterior_vulnerability(pi, c1, g) + SLACK
    return Counterexample(
        "parallel",
        None,
        posterior_vulnerability(pi, parallel(c2, c1), g),
        posterior_vulnerability(pi, parallel(c1, c1), g),
        1.0,
        2.0 / 3.0,
        ordered,
    )


def _hidden_case(p: float) -> Counterexample:
    identity = Channel(_X2, ["y1", "y2"], np.eye(2))
    swap = Channel(_X2, ["y1", "y2"], [[0, 1], [1, 0]])
    if p <= 0.5:
        c1 = Channel(_X2, ["y1", "y2"], [[0.5, 0.5], [0.5, 0.5]])
        expected = (1 - p / 2, 1 - p)
    else:
        a = 1 / (2 * p) - 0.5
        c1 = Channel(_X2, ["y1", "y2"], [[a, 1 - a], [1 - a, a]])
        expected = ((p + 1) / 2, p)
    pi, g = Prior.uniform(_X2), identity_gain(_X2)
    return Counterexample(
        "hidden",
        p,
        posterior_vulnerability(pi, hidden_choice(c1, swap, p), g),
        posterior_vulnerability(pi, hidden_choice(identity, swap, p), g),
        expected[0],
        expected[1],
        refines(identity, c1).refined,
    )


def monotonicity_counterexamples(ps: Sequence[float] = (0.25, 0.5, 0.75)) -> CounterexampleReport:
    """Rebuild the parallel and hidden-choice monotonicity counterexamples.

    ``ps`` must lie in (0, 1); the hidden-choice construction switches at
    ``p = 0.5``.
    """
    cases = [_parallel_case()]
    for p in ps:
        if not 0 < p < 1:
            raise ValueError(f"hidden-choice counterexample needs p in (0, 1), got {p}")
        cases.append(_hidden_case(p))
    return CounterexampleReport(tuple(cases))
