"""Shared random-instance builders and exact oracles for the test suite."""

from fractions import Fraction

import numpy as np

from qifalgebra import Channel
from qifalgebra.sampling import random_channel, random_gain, random_prior, random_stochastic

POOL = [f"y{k}" for k in range(1, 9)]


def random_inputs(rng, lo=2, hi=6):
    return [f"x{k}" for k in range(1, int(rng.integers(lo, hi + 1)) + 1)]


def rand_channel(rng, inputs, max_out=6, pool=POOL, sparsity=0.2):
    n_out = int(rng.integers(1, max_out + 1))
    return random_channel(rng, inputs, n_out, pool, sparsity=sparsity)


def rand_transparent(rng, inputs, prefix="t"):
    """Each output column is owned by exactly one input."""
    owners = []
    for i in range(len(inputs)):
        for _ in range(int(rng.integers(1, 3))):
            owners.append(i)
    m = np.zeros((len(inputs), len(owners)))
    for i in range(len(inputs)):
        idx = [j for j, o in enumerate(owners) if o == i]
        m[i, idx] = rng.dirichlet(np.ones(len(idx)))
    return Channel(inputs, [f"{prefix}{j + 1}" for j in range(len(owners))], m)


def rand_null(rng, inputs, pool=POOL):
    k = int(rng.integers(1, 5))
    outs = [pool[j] for j in sorted(rng.choice(len(pool), size=k, replace=False))]
    row = rng.dirichlet(np.ones(k))
    return Channel(inputs, outs, np.tile(row, (len(inputs), 1)))


def rand_post(rng, inputs, max_out=5, prefix="z"):
    n_out = int(rng.integers(1, max_out + 1))
    return Channel(inputs, [f"{prefix}{k + 1}" for k in range(n_out)], random_stochastic(rng, len(inputs), n_out, 0.2))


def frac_matrix(rows):
    return [[Fraction(v) for v in r] for r in rows]


def brute_posterior_vulnerability(prior, rows, gain):
    """Exact ``sum_y max_w sum_x pi(x) C(x,y) g(w,x)`` with explicit loops over Fractions."""
    n_x, n_y = len(rows), len(rows[0])
    total = Fraction(0)
    for y in range(n_y):
        best = None
        for w in range(len(gain)):
            s = sum(prior[x] * rows[x][y] * gain[w][x] for x in range(n_x))
            best = s if best is None or s > best else best
        total += best
    return total


def identity_rows(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


__all__ = [
    "POOL",
    "random_inputs",
    "rand_channel",
    "rand_transparent",
    "rand_null",
    "rand_post",
    "random_prior",
    "random_gain",
    "brute_posterior_vulnerability",
    "frac_matrix",
    "identity_rows",
]
