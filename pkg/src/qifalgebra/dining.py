"""Dining Cryptographers built compositionally.

``Dining = Coins . Announcements`` where ``Coins`` is the parallel
composition of one coin channel per shared coin plus the identity on the
payer, and ``Announcements`` is the parallel composition of one
deterministic channel per cryptographer.

Secrets are ``c1..cn`` (cryptographer ``i`` paid) and ``nsa``.  Coins
show ``T`` (tails, bit 1) or ``H`` (heads, bit 0); announcements are the
atoms ``"0"`` / ``"1"``.  Composite labels are the left-nested
:class:`~qifalgebra.channel.Pair` values produced by
:func:`~qifalgebra.algebra.parallel`.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import cascade, parallel
from .channel import Channel, Pair, Prior
from .errors import ChannelTooLarge, IndexOutOfRange, InvalidModel
from .measures import additive_capacity, multiplicative_capacity

NSA = "nsa"
TAILS, HEADS = "T", "H"

#: Largest Coins matrix (cells) that is materialized; beyond it the cascade is streamed.
MAX_DENSE_CELLS = 2**22
#: Largest number of joint coin outcomes the streamed cascade will enumerate.
MAX_STREAM_OUTCOMES = 2**24
_BLOCK = 2**16


@dataclass(frozen=True)
class DiningConfig:
    """Cryptographer count, coin-sharing graph and per-coin tails probability.

    ``topology`` is ``"cycle"`` (coin ``j`` shared by cryptographers
    ``j`` and ``j+1 mod n``), ``"complete"`` (one coin per pair) or
    ``"custom"`` with an explicit ``edges`` list.  ``coin_bias`` is a
    single probability applied to every coin or one value per coin.
    """

    n: int
    topology: str = "cycle"
    coin_bias: object = 0.5
    edges: Optional[tuple] = None

    def __post_init__(self):
        if self.n < 3:
            raise InvalidModel("the protocol needs at least 3 cryptographers")
        if self.topology == "cycle":
            edges = tuple((i, (i + 1) % self.n) for i in range(self.n))
        elif self.topology == "complete":
            edges = tuple(itertools.combinations(range(self.n), 2))
        elif self.topology == "custom":
            if not self.edges:
                raise InvalidModel("custom topology needs an edge list")
            edges = tuple(tuple(int(v) for v in e) for e in self.edges)
            keys = [frozenset(e) for e in edges]
            if any(len(e) != 2 or len(k) != 2 for e, k in zip(edges, keys)):
                raise InvalidModel("edges must join two distinct cryptographers")
            if len(set(keys)) != len(keys):
                raise InvalidModel("duplicate coin edge")
            if any(not 0 <= v < self.n for e in edges for v in e):
                raise InvalidModel("edge endpoint out of range")
            touched = {v for e in edges for v in e}
            if len(touched) != self.n:
                raise InvalidModel("every cryptographer must share at least one coin")
        else:
            raise InvalidModel(f"unknown topology {self.topology!r}")
        object.__setattr__(self, "edges", edges)

        bias = np.atleast_1d(np.asarray(self.coin_bias, dtype=float))
        if bias.size == 1:
            bias = np.full(len(edges), float(bias[0]))
        if bias.size != len(edges):
            raise InvalidModel(f"{bias.size} biases for {len(edges)} coins")
        if np.any((bias < 0) | (bias > 1)):
            raise InvalidModel("coin biases must lie in [0, 1]")
        object.__setattr__(self, "coin_bias", tuple(bias.tolist()))

    @property
    def n_coins(self) -> int:
        return len(self.edges)

    @property
    def secrets(self) -> list:
        return [f"c{i + 1}" for i in range(self.n)] + [NSA]

    def incidence(self) -> np.ndarray:
        """``n x n_coins`` 0/1 matrix: cryptographer ``i`` sees coin ``j``."""
        inc = np.zeros((self.n, self.n_coins), dtype=np.int64)
        for j, (a, b) in enumerate(self.edges):
            inc[a, j] = inc[b, j] = 1
        return inc

    def with_bias(self, bias) -> "DiningConfig":
        return DiningConfig(self.n, self.topology, bias, self.edges if self.topology == "custom" else None)


def coin_channel(bias: float, inputs: Sequence = ()) -> Channel:
    """Null channel ``(T, H)`` with every row ``(bias, 1 - bias)``."""
    inputs = list(inputs) or ["x1"]
    return Channel(inputs, [TAILS, HEADS], np.tile([bias, 1.0 - bias], (len(inputs), 1)))


def flatten_label(label) -> tuple:
    """Atoms of a left-nested ``Pair`` chain, in order."""
    out = []
    while isinstance(label, Pair):
        out.append(label.right)
        label = label.left
    out.append(label)
    return tuple(reversed(out))


def nest_label(atoms: Sequence):
    return reduce(Pair, atoms)


def coins_channel(config: DiningConfig) -> Channel:
    """``Coin_1 || ... || Coin_k || I``: coin outcomes plus the payer identity."""
    secrets = config.secrets
    coins = [coin_channel(b, secrets) for b in config.coin_bias]
    return reduce(parallel, coins + [Channel(secrets, secrets, np.eye(len(secrets)))])


def _announce(bits: np.ndarray, payer: np.ndarray, incidence: np.ndarray) -> np.ndarray:
    """Announcement bits for coin-bit rows ``bits`` and payer indices (``n`` = nsa)."""
    xor = (bits @ incidence.T) % 2
    flip = payer[:, None] == np.arange(incidence.shape[0])[None, :]
    return (xor ^ flip).astype(np.int64)


def crypto_channel(config: DiningConfig, i: int, inputs: Optional[Sequence] = None) -> Channel:
    """Deterministic announcement of cryptographer ``i`` (0-based).

    The announcement is the XOR of the coins the cryptographer sees,
    negated iff they are the payer.  ``inputs`` defaults to the outputs
    of :func:`coins_channel`.
    """
    if not 0 <= i < config.n:
        raise IndexOutOfRange(f"cryptographer index {i} outside 0..{config.n - 1}")
    if inputs is None:
        inputs = coins_channel(config).outputs
    inputs = list(inputs)
    secret_index = {s: k for k, s in enumerate(config.secrets)}
    mine = [j for j, e in enumerate(config.edges) if i in e]
    m = np.zeros((len(inputs), 2))
    for row, lab in enumerate(inputs):
        atoms = flatten_label(lab)
        coins, payer = atoms[:-1], atoms[-1]
        bit = sum(coins[j] == TAILS for j in mine) % 2
        if secret_index[payer] == i:
            bit ^= 1
        m[row, bit] = 1.0
    return Channel(inputs, ["0", "1"], m)


def announcements_channel(config: DiningConfig, inputs: Optional[Sequence] = None) -> Channel:
    if inputs is None:
        inputs = coins_channel(config).outputs
    return reduce(parallel, [crypto_channel(config, i, inputs) for i in range(config.n)])


def announcement_outputs(n: int) -> list:
    return [nest_label(bits) for bits in itertools.product("01", repeat=n)]


def _streamed_dining(config: DiningConfig) -> Channel:
    """Cascade evaluated block by block over joint coin outcomes.

    Never materializes ``Coins``; each block holds up to ``_BLOCK`` coin
    outcomes, their probabilities (the ``Coins`` entries) and the
    announcement each outcome produces for every payer.
    """
    k, n = config.n_coins, config.n
    if 2**k > MAX_STREAM_OUTCOMES:
        raise ChannelTooLarge(f"{2 ** k} coin outcomes exceed the streaming limit {MAX_STREAM_OUTCOMES}")
    bias = np.asarray(config.coin_bias)
    inc = config.incidence()
    weights = 1 << np.arange(n - 1, -1, -1)
    out = np.zeros((n + 1, 2**n))
    for start in range(0, 2**k, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, 2**k))
        bits = (idx[:, None] >> np.arange(k - 1, -1, -1)[None, :]) & 1
        prob = np.prod(np.where(bits == 1, bias, 1 - bias), axis=1)
        for payer in range(n + 1):
            ann = _announce(bits, np.full(len(idx), payer), inc)
            np.add.at(out[payer], ann @ weights, prob)
    return Channel(config.secrets, announcement_outputs(n), out)


def dining_channel(config: DiningConfig) -> Channel:
    """``Coins . Announcements``; streamed when ``Coins`` would be too large."""
    n_in = config.n + 1
    if n_in * n_in * 2**config.n_coins > MAX_DENSE_CELLS:
        return _streamed_dining(config)
    coins = coins_channel(config)
    return cascade(coins, announcements_channel(config, coins.outputs))


def enumeration_oracle(config: DiningConfig) -> Channel:
    """Dining channel by brute force over every coin outcome (test oracle)."""
    secrets = config.secrets
    table = {s: {} for s in secrets}
    for coins in itertools.product((0, 1), repeat=config.n_coins):
        prob = 1.0
        for c, b in zip(coins, config.coin_bias):
            prob *= b if c == 1 else 1 - b
        for pi, payer in enumerate(secrets):
            ann = []
            for i in range(config.n):
                v = 0
                for j, (a, b) in enumerate(config.edges):
                    if i in (a, b):
                        v ^= coins[j]
                ann.append(str(v ^ (pi == i)))
            key = tuple(ann)
            table[payer][key] = table[payer].get(key, 0.0) + prob
    outputs = list(itertools.product("01", repeat=config.n))
    m = [[table[s].get(o, 0.0) for o in outputs] for s in secrets]
    return Channel(secrets, [nest_label(o) for o in outputs], m)


@dataclass(frozen=True)
class SweepRow:
    topology: str
    n: int
    bias: float
    mult_capacity: float
    add_capacity: float


SWEEP_HEADER = ["topology", "n", "bias", "mult_capacity", "add_capacity"]


def capacity_sweep(config: DiningConfig, biases: Iterable[float], prior: Optional[Prior] = None) -> list:
    """Both capacities for each bias value applied to every coin."""
    rows = []
    for b in biases:
        cfg = config.with_bias(float(b))
        ch = dining_channel(cfg)
        pi = prior if prior is not None else Prior.uniform(cfg.secrets)
        rows.append(SweepRow(cfg.topology, cfg.n, float(b), multiplicative_capacity(ch), additive_capacity(ch, pi)))
    return rows


def sweep_to_csv(rows: Sequence[SweepRow], fmt=repr) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([r.topology, r.n, fmt(r.bias), fmt(r.mult_capacity), fmt(r.add_capacity)])
    return buf.getvalue()
