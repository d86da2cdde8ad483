"""Predicting the vulnerability of a composition from its parts.

Run with ``python demos/04_bounds.py``.
"""

import numpy as np

from qifalgebra import (
    hidden_choice_bounds,
    monotonicity_counterexamples,
    parallel_bounds,
    visible_choice_exact,
)
from qifalgebra.sampling import random_channel, random_gain, random_prior

rng = np.random.default_rng(11)
X = ["x1", "x2", "x3", "x4"]
pi, g = random_prior(rng, X), random_gain(rng, X)
C1, C2 = random_channel(rng, X, 3), random_channel(rng, X, 5)

# %% Bounds computed from the components alone, next to the exact value.
par = parallel_bounds(pi, g, C1, C2)
hid = hidden_choice_bounds(pi, g, C1, C2, 0.3)
print(f"parallel: {par.lower:.4f} <= {par.exact:.4f} <= {par.upper:.4f}")
print(f"hidden:   {hid.lower:.4f} <= {hid.exact:.4f} <= {hid.upper:.4f}")
print(f"visible:  {visible_choice_exact(pi, g, C1, C2, 0.3):.4f} (exact by linearity)")

# %% A safer component does not always give a safer composition.
for case in monotonicity_counterexamples().cases:
    tag = case.name if case.p is None else f"{case.name} p={case.p}"
    print(f"{tag}: safer part gives {case.left:.4f} > {case.right:.4f}")
