"""g-vulnerability, g-leakage and the two closed-form capacities."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import Channel, GainFunction, Label, Prior, joint_distribution
from .errors import LabelMismatch, ZeroPriorVulnerability


def identity_gain(inputs: Sequence[Label]) -> GainFunction:
    """Gain 1 for guessing the secret exactly, 0 otherwise (Bayes vulnerability)."""
    inputs = list(inputs)
    return GainFunction(inputs, inputs, np.eye(len(inputs)))


def _gain_for(g: GainFunction, labels) -> np.ndarray:
    try:
        return g.aligned(labels)
    except LabelMismatch:
        raise LabelMismatch("gain function inputs differ from the secret set") from None


def prior_vulnerability(pi: Prior, g: GainFunction) -> float:
    """``max_w sum_x pi(x) g(w, x)``."""
    return float(np.max(_gain_for(g, pi.support) @ pi.probs))


def posterior_vulnerability(pi: Prior, c: Channel, g: GainFunction) -> float:
    """``sum_y max_w sum_x C(x, y) pi(x) g(w, x)``."""
    joint = joint_distribution(c, pi)
    return float(np.sum(np.max(_gain_for(g, c.inputs) @ joint, axis=0)))


@dataclass(frozen=True)
class LeakageReport:
    prior_vulnerability: float
    posterior_vulnerability: float
    multiplicative: Optional[float]
    additive: float

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_header(self) -> str:
        return "prior,posterior,mult,add"

    def csv_row(self, fmt=repr) -> str:
        mult = "" if self.multiplicative is None else fmt(self.multiplicative)
        return ",".join(
            [fmt(self.prior_vulnerability), fmt(self.posterior_vulnerability), mult, fmt(self.additive)]
        )


def leakage(pi: Prior, c: Channel, g: GainFunction) -> LeakageReport:
    """Multiplicative and additive g-leakage of ``c`` under ``pi``.

    Raises :class:`ZeroPriorVulnerability` when ``V_g[pi] == 0``; the
    exception's ``report`` still carries the additive leakage.
    """
    prior = prior_vulnerability(pi, g)
    post = posterior_vulnerability(pi, c, g)
    if prior <= 0.0:
        report = LeakageReport(prior, post, None, post - prior)
        raise ZeroPriorVulnerability(
            "prior g-vulnerability is zero; multiplicative leakage undefined", report
        )
    return LeakageReport(prior, post, post / prior, post - prior)


def multiplicative_capacity(c: Channel) -> float:
    """Capacity over all priors and gain functions, in bits.

    Equals ``log2 sum_y max_x C(x, y)``.
    """
    total = float(np.sum(np.max(c.matrix, axis=0)))
    return max(math.log2(total), 0.0)


def additive_capacity(c: Channel, pi: Prior) -> float:
    """Additive capacity over all gain functions for a fixed prior.

    ``sum_{x,y} pi(x) |C(x, y) - sum_x' pi(x') C(x', y)|``
    """
    probs = pi.aligned(c.inputs)
    mean = probs @ c.matrix
    return float(np.sum(probs[:, None] * np.abs(c.matrix - mean[None, :])))
