"""Channel composition operators and structural predicates.

The three binary operators all require *compatible* channels, i.e. the
same input label set.  The second operand's rows are aligned to the first
operand's input order before combining, so callers never need to care
about row order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import Channel, Label, Pair, Tag
from .errors import BadProbability, IncompatibleInputs, TypeMismatch

#: Tolerance for entrywise channel comparisons.
EPS_EQ = 1e-9


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"probability {p!r} is outside [0, 1]")
    return p


def _compatible(c1: Channel, c2: Channel) -> np.ndarray:
    """Matrix of ``c2`` with rows in ``c1``'s input order."""
    return c2.with_input_order(c1.inputs, err=IncompatibleInputs).matrix


def parallel(c1: Channel, c2: Channel) -> Channel:
    """Parallel composition: both channels see the secret, both outputs are observed.

    Outputs are ``Pair(y1, y2)`` in row-major order over ``c1.outputs`` x
    ``c2.outputs``.
    """
    m2 = _compatible(c1, c2)
    m = (c1.matrix[:, :, None] * m2[:, None, :]).reshape(len(c1.inputs), -1)
    outputs = [Pair(y1, y2) for y1 in c1.outputs for y2 in c2.outputs]
    return Channel(c1.inputs, outputs, m)


def visible_choice(c1: Channel, c2: Channel, p: float) -> Channel:
    """Run ``c1`` with probability ``p``, else ``c2``; the branch is revealed."""
    p = _check_p(p)
    m2 = _compatible(c1, c2)
    m = np.hstack([p * c1.matrix, (1.0 - p) * m2])
    outputs = [Tag(y, 1) for y in c1.outputs] + [Tag(y, 2) for y in c2.outputs]
    return Channel(c1.inputs, outputs, m)


def hidden_choice(c1: Channel, c2: Channel, p: float) -> Channel:
    """Run ``c1`` with probability ``p``, else ``c2``; the branch stays hidden.

    The output set is the union of both output sets: ``c1``'s outputs in
    order, followed by the outputs only ``c2`` has.  Shared outputs mix.
    """
    p = _check_p(p)
    m2 = _compatible(c1, c2)
    outputs = list(c1.outputs)
    pos = {y: k for k, y in enumerate(outputs)}
    for y in c2.outputs:
        if y not in pos:
            pos[y] = len(outputs)
            outputs.append(y)
    m = np.zeros((len(c1.inputs), len(outputs)))
    m[:, : len(c1.outputs)] = p * c1.matrix
    cols = np.fromiter((pos[y] for y in c2.outputs), dtype=int, count=len(c2.outputs))
    m[:, cols] += (1.0 - p) * m2
    return Channel(c1.inputs, outputs, m)


def cascade(c: Channel, d: Channel) -> Channel:
    """Post-process the outputs of ``c`` with ``d`` (matrix product)."""
    md = d.with_input_order(c.outputs, err=TypeMismatch).matrix
    return Channel(c.inputs, d.outputs, c.matrix @ md)


def null_channel(inputs: Sequence[Label], n_outputs: int = 1, outputs=None) -> Channel:
    """Channel whose rows are all the same uniform distribution."""
    if outputs is None:
        if n_outputs < 1:
            raise ValueError("a null channel needs at least one output")
        outputs = [f"o{k + 1}" for k in range(n_outputs)]
    outputs = list(outputs)
    inputs = list(inputs)
    return Channel(inputs, outputs, np.full((len(inputs), len(outputs)), 1.0 / len(outputs)))


def is_null(c: Channel, tol: float = EPS_EQ) -> bool:
    return bool(np.all(np.abs(c.matrix - c.matrix[0]) <= tol))


def transparent_channel(inputs: Sequence[Label], outputs=None) -> Channel:
    """Identity channel; ``outputs`` renames the columns (defaults to the inputs)."""
    inputs = list(inputs)
    outputs = inputs if outputs is None else list(outputs)
    return Channel(inputs, outputs, np.eye(len(inputs)))


identity_channel = transparent_channel


def is_transparent(c: Channel, tol: float = EPS_EQ) -> bool:
    return bool(np.all((c.matrix > tol).sum(axis=0) <= 1))


def parallel_post(d1: Channel, d2: Channel) -> Channel:
    """``D^par``: post-processes ``Pair(y1, y2)`` into ``Pair(z1, z2)`` independently."""
    inputs = [Pair(y1, y2) for y1 in d1.inputs for y2 in d2.inputs]
    outputs = [Pair(z1, z2) for z1 in d1.outputs for z2 in d2.outputs]
    return Channel(inputs, outputs, np.kron(d1.matrix, d2.matrix))


def visible_post(d1: Channel, d2: Channel) -> Channel:
    """``D^vis``: block-diagonal post-processing of a tagged disjoint union."""
    inputs = [Tag(y, 1) for y in d1.inputs] + [Tag(y, 2) for y in d2.inputs]
    outputs = [Tag(z, 1) for z in d1.outputs] + [Tag(z, 2) for z in d2.outputs]
    m = np.zeros((len(inputs), len(outputs)))
    n1, k1 = d1.shape
    m[:n1, :k1] = d1.matrix
    m[n1:, k1:] = d2.matrix
    return Channel(inputs, outputs, m)


def channels_equal(c1: Channel, c2: Channel, tol: float = EPS_EQ) -> bool:
    """Entrywise equality after matching rows and columns by label."""
    if set(c1.inputs) != set(c2.inputs) or set(c1.outputs) != set(c2.outputs):
        return False
    other = c2.with_input_order(c1.inputs).with_output_order(c1.outputs)
    return bool(np.max(np.abs(c1.matrix - other.matrix)) <= tol)


@dataclass(frozen=True)
class PermutationWitness:
    """Bijection between the output columns of two channels.

    ``mapping`` holds ``(i, j)`` index pairs meaning column ``i`` of the
    first channel equals column ``j`` of the second.
    """

    mapping: tuple
    first_outputs: tuple
    second_outputs: tuple

    def label_map(self) -> dict:
        return {self.first_outputs[i]: self.second_outputs[j] for i, j in self.mapping}


def _sorted_columns(m: np.ndarray, tol: float) -> np.ndarray:
    q = np.round(m / tol) if tol > 0 else m
    return np.lexsort(q[::-1])


def equal_up_to_permutation(
    c1: Channel, c2: Channel, tol: float = EPS_EQ
) -> Optional[PermutationWitness]:
    """Find a column bijection making ``c1`` and ``c2`` entrywise equal.

    Columns of both matrices are sorted under a lexicographic order on
    their (quantized) entries and matched position by position; if
    quantization splits a tie the wrong way, a greedy nearest-column
    matching is tried before giving up.
    """
    if set(c1.inputs) != set(c2.inputs) or len(c1.outputs) != len(c2.outputs):
        return None
    m1 = c1.matrix
    m2 = c2.with_input_order(c1.inputs).matrix

    o1 = _sorted_columns(m1, tol)
    o2 = _sorted_columns(m2, tol)
    if np.max(np.abs(m1[:, o1] - m2[:, o2])) <= tol:
        pairs = tuple(sorted(zip(o1.tolist(), o2.tolist())))
        return PermutationWitness(pairs, c1.outputs, c2.outputs)

    free = set(range(m2.shape[1]))
    pairs = []
    for i in range(m1.shape[1]):
        dist = np.max(np.abs(m2 - m1[:, [i]]), axis=0)
        match = next((j for j in np.argsort(dist) if j in free and dist[j] <= tol), None)
        if match is None:
            return None
        free.discard(match)
        pairs.append((i, int(match)))
    return PermutationWitness(tuple(pairs), c1.outputs, c2.outputs)
