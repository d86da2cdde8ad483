"""Dining Cryptographers: fair coins hide the payer, biased coins do not.

Run with ``python demos/06_dining.py``.
"""

from qifalgebra import multiplicative_capacity
from qifalgebra.dining import DiningConfig, capacity_sweep, dining_channel, flatten_label

# %% Four cryptographers around a table, fair coins.
C = dining_channel(DiningConfig(4))
print("announcements:", len(C.outputs), "secrets:", C.inputs)
print("multiplicative capacity:", round(multiplicative_capacity(C), 9))

# %% With fair coins each odd-parity announcement is equally likely for every payer.
y = next(o for o in C.outputs if sum(map(int, flatten_label(o))) % 2)
print("column", "".join(flatten_label(y)), "=", [round(float(v), 4) for v in C.matrix[:, C.output_index(y)]])

# %% Biasing the coins leaks; sharing coins between every pair leaks less.
biases = [0.5, 0.6, 0.7, 0.8, 0.9]
for topology in ("cycle", "complete"):
    rows = capacity_sweep(DiningConfig(4, topology), biases)
    print(topology.ljust(8), " ".join(f"{r.mult_capacity:.3f}" for r in rows))
