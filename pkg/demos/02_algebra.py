"""Composing channels: parallel, visible choice, hidden choice, cascade.

Run with ``python demos/02_algebra.py``.
"""

import numpy as np

from qifalgebra import (
    Channel,
    equal_up_to_permutation,
    equivalent,
    hidden_choice,
    is_null,
    is_transparent,
    parallel,
    refines,
    visible_choice,
)

X = ["x1", "x2", "x3"]
A = Channel(X, ["y1", "y2"], [[1, 0], [1, 0], [0, 1]])
B = Channel(X, ["y1", "y2"], [[1, 0], [0, 1], [0, 1]])

# %% Two partial views combine into full knowledge when run in parallel.
AB = parallel(A, B)
print("A || B outputs:", AB.outputs)
print("A || B transparent?", is_transparent(AB))

# %% Parallel composition commutes up to renaming the output pairs.
w = equal_up_to_permutation(AB, parallel(B, A))
print("column bijection:", {str(k): str(v) for k, v in w.label_map().items()})

# %% Visible choice tags the branch; hidden choice merges shared outputs.
print("A vis_0.3 B:\n", visible_choice(A, B, 0.3).matrix)
print("A hid_0.3 B:\n", hidden_choice(A, B, 0.3).matrix)

# %% Mixing the identity with its mirror image hides everything.
Y = ["x1", "x2"]
ident = Channel(Y, ["a", "b"], np.eye(2))
mirror = Channel(Y, ["a", "b"], [[0, 1], [1, 0]])
print("identity hid_0.5 mirror is null?", is_null(hidden_choice(ident, mirror, 0.5)))

# %% Visible choice of a channel with itself is equivalent to the channel.
print("A vis_p A equivalent to A?", equivalent(visible_choice(A, A, 0.4), A))

# %% Running A twice in parallel never leaks less than A alone.
print("A||A refined by A?", refines(parallel(A, A), A).refined)
