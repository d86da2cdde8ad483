"""Random channels, priors and gain functions for testing and falsification."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .channel import Channel, GainFunction, Label, Prior


def default_inputs(n: int) -> list:
    return [f"x{k + 1}" for k in range(n)]


def random_stochastic(rng: np.random.Generator, n_rows: int, n_cols: int, sparsity: float = 0.0):
    """Row-stochastic matrix with Dirichlet(1) rows; ``sparsity`` zeroes entries at random."""
    m = rng.dirichlet(np.ones(n_cols), size=n_rows)
    if sparsity > 0:
        mask = rng.random(m.shape) < sparsity
        m = np.where(mask, 0.0, m)
        empty = m.sum(axis=1) == 0
        m[empty, rng.integers(n_cols, size=int(empty.sum()))] = 1.0
        m /= m.sum(axis=1, keepdims=True)
    return m


def random_channel(
    rng: np.random.Generator,
    inputs: Sequence[Label],
    n_outputs: int,
    outputs: Optional[Sequence[Label]] = None,
    sparsity: float = 0.0,
) -> Channel:
    """Random channel over ``inputs``.

    If ``outputs`` is a pool larger than ``n_outputs``, a random subset of
    it is used, so that independently drawn channels tend to share some
    but not all output labels.
    """
    if outputs is None:
        outputs = [f"y{k + 1}" for k in range(n_outputs)]
    outputs = list(outputs)
    if len(outputs) > n_outputs:
        pick = rng.choice(len(outputs), size=n_outputs, replace=False)
        outputs = [outputs[k] for k in sorted(pick)]
    return Channel(inputs, outputs, random_stochastic(rng, len(inputs), n_outputs, sparsity))


def random_prior(rng: np.random.Generator, support: Sequence[Label], full_support: bool = True) -> Prior:
    probs = rng.dirichlet(np.ones(len(support)))
    if not full_support:
        probs[rng.random(len(support)) < 0.3] = 0.0
        if probs.sum() == 0:
            probs[rng.integers(len(support))] = 1.0
        probs /= probs.sum()
    return Prior(support, probs)


def random_gain(rng: np.random.Generator, inputs: Sequence[Label], n_actions: Optional[int] = None) -> GainFunction:
    """Gain matrix with uniform [0, 1] entries and up to ``2|X|`` actions."""
    inputs = list(inputs)
    if n_actions is None:
        n_actions = int(rng.integers(1, 2 * len(inputs) + 1))
    return GainFunction([f"w{k + 1}" for k in range(n_actions)], inputs, rng.random((n_actions, len(inputs))))
