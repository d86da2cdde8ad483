"""Deciding refinement and finding counter-evidence.

Run with ``python demos/03_refinement.py``.
"""

import numpy as np

from qifalgebra import Channel, cascade, coriaceous_falsify, posterior_vulnerability, refines
from qifalgebra.sampling import random_channel

rng = np.random.default_rng(7)
X = ["x1", "x2", "x3"]

# %% Post-processing can only destroy information, so C D refines C.
C = random_channel(rng, X, 4)
D = Channel(C.outputs, ["z1", "z2"], rng.dirichlet(np.ones(2), size=4))
verdict = refines(C, cascade(C, D))
print("C D refines C:", verdict.refined, f"(witness residual {verdict.residual:.1e})")

# %% The reverse usually fails; the falsifier then exhibits a prior and gain
# under which the supposedly safer channel leaks more.
back = refines(cascade(C, D), C, seed=0)
print("C refines C D:", back.refined)
if back.certificate is not None:
    pi, g = back.certificate
    print(
        "  certificate: V[pi, C D] =",
        round(posterior_vulnerability(pi, cascade(C, D), g), 4),
        "< V[pi, C] =",
        round(posterior_vulnerability(pi, C, g), 4),
    )

# %% Falsification is only a heuristic: finding nothing proves nothing.
print("falsifier on C vs C:", coriaceous_falsify(C, C, trials=200, seed=1))
