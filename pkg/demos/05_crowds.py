"""Bounding the vulnerability of Crowds without building the infinite protocol.

Run with ``python demos/05_crowds.py``.
"""

import numpy as np

from qifalgebra import Prior, identity_gain, posterior_vulnerability
from qifalgebra.crowds import CrowdsModel, crowds_limit_channel, leakage_bounds, m_for_precision

rng = np.random.default_rng(3)

# %% Honest users forward along a random Markov chain.
n = 6
model = CrowdsModel(rng.dirichlet(np.ones(n), size=n), q=0.2, p=0.4)

# %% The sandwich tightens geometrically with m.
pi, g = Prior.uniform(model.users), identity_gain(model.users)
exact = posterior_vulnerability(pi, crowds_limit_channel(model), g)
for m in (1, 2, 4, 8):
    b = leakage_bounds(model, pi, g, m)
    print(f"m={m}: {b.lower:.6f} <= V <= {b.upper:.6f}  (gap bound {b.gap_bound:.2e})")
print(f"closed-form limit: V = {exact:.6f}")

# %% How many truncation steps a target precision needs.
m = m_for_precision(model.q, model.p, 1e-3)
print(f"precision 1e-3 needs m = {m}")
