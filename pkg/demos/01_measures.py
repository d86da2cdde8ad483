"""Vulnerability, leakage and capacity of a small channel.

Run with ``python demos/01_measures.py``.
"""

import math

from qifalgebra import (
    Channel,
    Prior,
    additive_capacity,
    identity_gain,
    leakage,
    multiplicative_capacity,
    posteriors,
)

# %% A three-secret channel with four observable outputs.
X = ["x1", "x2", "x3"]
C = Channel(
    X,
    ["y1", "y2", "y3", "y4"],
    [
        [1 / 6, 2 / 3, 1 / 6, 0],
        [1 / 2, 1 / 4, 1 / 4, 0],
        [1 / 2, 1 / 3, 0, 1 / 6],
    ],
)
pi = Prior(X, [1 / 2, 1 / 3, 1 / 6])

# %% Each output splits the prior into a posterior, weighted by its marginal.
for y, p_y, post in posteriors(C, pi):
    shown = ", ".join(f"{v:.4f}" for v in post.probs)
    print(f"{y}: p(y) = {p_y:.4f}  posterior = ({shown})")

# %% Bayes vulnerability: the adversary guesses the secret in one try.
report = leakage(pi, C, identity_gain(X))
print(f"prior V = {report.prior_vulnerability:.4f}, posterior V = {report.posterior_vulnerability:.4f}")
print(f"multiplicative leakage = {report.multiplicative:.4f}, additive = {report.additive:.4f}")

# %% Capacities bound leakage over every gain function.
print(f"multiplicative capacity = {multiplicative_capacity(C):.6f} bits (log2(19/12) = {math.log2(19 / 12):.6f})")
print(f"additive capacity at pi = {additive_capacity(C, pi):.6f}")
