"""Labeled channel matrices, priors and gain functions.

A channel is a row-stochastic matrix whose rows are indexed by secret
inputs and whose columns are indexed by observable outputs.  Rows and
columns carry *labels*, which are either plain strings (atoms) or the
structured labels :class:`Pair` and :class:`Tag` produced by the
composition operators.  All matching between different objects is done on
label values, never on positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateLabel,
    LabelMismatch,
    NegativeEntry,
    RowSumError,
)

#: Absolute tolerance for every stochasticity check.
EPS_ROW = 1e-9


@dataclass(frozen=True)
class Pair:
    """Output of a parallel composition: ``(left, right)``."""

    left: "Label"
    right: "Label"

    def __repr__(self):
        return f"({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Tag:
    """Element of a disjoint union: ``label`` tagged with branch 1 or 2."""

    label: "Label"
    branch: int

    def __post_init__(self):
        if self.branch not in (1, 2):
            raise ValueError(f"branch must be 1 or 2, got {self.branch!r}")

    def __repr__(self):
        return f"<{self.label!r}|{self.branch}>"


Label = Union[str, Pair, Tag]


def _check_labels(labels: Iterable, what: str) -> tuple:
    labels = tuple(labels)
    for lab in labels:
        if not isinstance(lab, (str, Pair, Tag)):
            raise TypeError(f"{what} label {lab!r} is not a str, Pair or Tag")
    if len(set(labels)) != len(labels):
        seen, dups = set(), []
        for lab in labels:
            if lab in seen:
                dups.append(lab)
            seen.add(lab)
        raise DuplicateLabel(f"duplicate {what} labels: {dups[:5]!r}")
    return labels


def _stochastic_rows(matrix, what: str) -> np.ndarray:
    m = np.array(matrix, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"{what} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NegativeEntry(f"{what} contains non-finite entries")
    if m.size and m.min() < -EPS_ROW:
        i, j = np.unravel_index(np.argmin(m), m.shape)
        raise NegativeEntry(f"{what} entry ({i}, {j}) = {m[i, j]!r} is negative")
    m[m < 0] = 0.0
    sums = m.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > EPS_ROW)
    if bad.size:
        i = bad[0]
        raise RowSumError(f"{what} row {i} sums to {sums[i]!r}, not 1")
    m /= sums[:, None]
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _positions(order: Sequence, wanted: Sequence, err, what: str) -> np.ndarray:
    """Index of each label of ``wanted`` inside ``order``."""
    index = {lab: k for k, lab in enumerate(order)}
    if len(wanted) != len(order) or any(lab not in index for lab in wanted):
        raise err(f"{what}: label sets differ")
    return np.fromiter((index[lab] for lab in wanted), dtype=int, count=len(wanted))


class Channel:
    """An immutable labeled channel ``C(x, y) = p(y | x)``.

    Construction validates the matrix: entries must be non-negative and
    every row must sum to 1 within :data:`EPS_ROW`.  Rows inside the
    tolerance are renormalized exactly.
    """

    __slots__ = ("inputs", "outputs", "matrix", "_in_index", "_out_index")

    def __init__(self, inputs: Iterable[Label], outputs: Iterable[Label], matrix):
        inputs = _check_labels(inputs, "input")
        outputs = _check_labels(outputs, "output")
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape != (len(inputs), len(outputs)):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match "
                f"{len(inputs)} inputs x {len(outputs)} outputs"
            )
        if not inputs or not outputs:
            raise DimensionMismatch("a channel needs at least one input and one output")
        self.inputs = inputs
        self.outputs = outputs
        self.matrix = _frozen(_stochastic_rows(m, "channel"))
        self._in_index = None
        self._out_index = None

    # -- basic protocol -----------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.matrix.shape

    def __repr__(self):
        return f"Channel({len(self.inputs)}x{len(self.outputs)})"

    def __eq__(self, other):
        if not isinstance(other, Channel):
            return NotImplemented
        return (
            self.inputs == other.inputs
            and self.outputs == other.outputs
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None

    def input_index(self, label: Label) -> int:
        if self._in_index is None:
            self._in_index = {lab: k for k, lab in enumerate(self.inputs)}
        return self._in_index[label]

    def output_index(self, label: Label) -> int:
        if self._out_index is None:
            self._out_index = {lab: k for k, lab in enumerate(self.outputs)}
        return self._out_index[label]

    def __getitem__(self, key):
        x, y = key
        return float(self.matrix[self.input_index(x), self.output_index(y)])

    # -- relabelling and reordering ----------------------------------------

    def with_input_order(self, inputs: Sequence[Label], err=LabelMismatch) -> "Channel":
        """Same channel with rows permuted to follow ``inputs``."""
        inputs = tuple(inputs)
        if inputs == self.inputs:
            return self
        idx = _positions(self.inputs, inputs, err, "input reorder")
        return Channel(inputs, self.outputs, self.matrix[idx])

    def with_output_order(self, outputs: Sequence[Label], err=LabelMismatch) -> "Channel":
        """Same channel with columns permuted to follow ``outputs``."""
        outputs = tuple(outputs)
        if outputs == self.outputs:
            return self
        idx = _positions(self.outputs, outputs, err, "output reorder")
        return Channel(self.inputs, outputs, self.matrix[:, idx])

    def relabel_outputs(self, mapping) -> "Channel":
        """Rename outputs through ``mapping`` (a dict or a callable)."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return Channel(self.inputs, [f(y) for y in self.outputs], self.matrix)

    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)


def validate_channel(inputs, outputs, rows) -> Channel:
    """Build a :class:`Channel` from raw labels and rows, validating all invariants."""
    return Channel(inputs, outputs, rows)


class Prior:
    """A probability distribution over a labeled secret set."""

    __slots__ = ("support", "probs")

    def __init__(self, support: Iterable[Label], probs):
        support = _check_labels(support, "prior")
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.shape[0] != len(support):
            raise DimensionMismatch(
                f"prior has {p.shape} probabilities for {len(support)} labels"
            )
        if not support:
            raise DimensionMismatch("a prior needs a non-empty support")
        self.support = support
        self.probs = _frozen(_stochastic_rows(p[None, :], "prior")[0])

    @classmethod
    def uniform(cls, support: Iterable[Label]) -> "Prior":
        support = tuple(support)
        return cls(support, np.full(len(support), 1.0 / len(support)))

    def aligned(self, labels: Sequence[Label]) -> np.ndarray:
        """Probabilities listed in the order of ``labels`` (same label set required)."""
        labels = tuple(labels)
        if labels == self.support:
            return self.probs
        return self.probs[_positions(self.support, labels, LabelMismatch, "prior")]

    def __repr__(self):
        body = ", ".join(f"{lab!r}: {p:.4g}" for lab, p in zip(self.support, self.probs))
        return f"Prior({{{body}}})"


class GainFunction:
    """Gain matrix ``g(w, x)`` in [0, 1]; rows are actions, columns secrets."""

    __slots__ = ("actions", "inputs", "matrix")

    def __init__(self, actions: Iterable[Label], inputs: Iterable[Label], matrix):
        actions = _check_labels(actions, "action")
        inputs = _check_labels(inputs, "gain input")
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape != (len(actions), len(inputs)):
            raise DimensionMismatch(
                f"gain matrix shape {m.shape} does not match "
                f"{len(actions)} actions x {len(inputs)} inputs"
            )
        if not actions:
            raise DimensionMismatch("a gain function needs at least one action")
        if m.size and (m.min() < -EPS_ROW or m.max() > 1 + EPS_ROW):
            raise NegativeEntry("gain values must lie in [0, 1]")
        self.actions = actions
        self.inputs = inputs
        self.matrix = _frozen(np.clip(m, 0.0, 1.0))

    def aligned(self, labels: Sequence[Label]) -> np.ndarray:
        """Gain matrix with columns in the order of ``labels``."""
        labels = tuple(labels)
        if labels == self.inputs:
            return self.matrix
        return self.matrix[:, _positions(self.inputs, labels, LabelMismatch, "gain")]

    def __repr__(self):
        return f"GainFunction({len(self.actions)} actions x {len(self.inputs)} inputs)"


def joint_distribution(c: Channel, pi: Prior) -> np.ndarray:
    """Joint matrix ``p(x, y) = pi(x) C(x, y)`` in the channel's row/column order."""
    return pi.aligned(c.inputs)[:, None] * c.matrix


@dataclass(frozen=True)
class Posteriors:
    """Output marginals and posterior distributions of a prior through a channel.

    ``entries`` pairs every output ``y`` with ``p(y) > 0`` with its
    marginal and the posterior ``p_{X|y}``; ``skipped`` lists the
    outputs that have probability zero, for which no posterior exists.
    """

    entries: tuple
    skipped: tuple

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def marginal(self, y: Label) -> float:
        for lab, py, _ in self.entries:
            if lab == y:
                return py
        if y in self.skipped:
            return 0.0
        raise KeyError(y)

    def posterior(self, y: Label) -> Prior:
        for lab, _, post in self.entries:
            if lab == y:
                return post
        raise KeyError(y)


def posteriors(c: Channel, pi: Prior) -> Posteriors:
    joint = joint_distribution(c, pi)
    marg = joint.sum(axis=0)
    entries, skipped = [], []
    for j, y in enumerate(c.outputs):
        if marg[j] > 0:
            entries.append((y, float(marg[j]), Prior(c.inputs, joint[:, j] / marg[j])))
        else:
            skipped.append(y)
    return Posteriors(tuple(entries), tuple(skipped))


def check_stochastic(c: Channel, tol: float = EPS_ROW) -> bool:
    """True when every row of ``c`` is a probability vector within ``tol``."""
    m = c.matrix
    return bool(m.min() >= -tol and np.all(np.abs(m.sum(axis=1) - 1.0) <= tol))
