"""Crowds anonymity protocol over an arbitrary honest-user forwarding chain.

Inputs of every channel here are the initiators ``u1..un``; outputs are
either ``d_j`` (user ``j`` was detected forwarding to a corrupt user) or
``s_j`` (user ``j`` delivered the request to the server).

Blocks of the truncated protocol, in the order events can happen::

    A0 = I_d,  A1 = I_s P_s,  A2 = I_d P_d,  A3 = I_s P_s^2, ...
    A(2k) = I_d P_d^k,  A(2k+1) = I_s P_s^(k+1)

``C_i`` nests ``A0 .. A(2i-1)`` right-to-left with hidden-choice weights
alternating ``q, p, q, p, ...``.  The flattened channel ``K_m`` mixes
``A0 .. A(2m)`` left-to-right with weights ``t_k / t_(k+1)``, which is
what makes the cheap vulnerability bounds possible.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .algebra import hidden_choice
from .channel import EPS_ROW, Channel, GainFunction, Prior
from .errors import InvalidModel
from .measures import identity_gain, posterior_vulnerability


@dataclass(frozen=True)
class CrowdsModel:
    """Honest-user Markov chain plus detection probability ``q`` and delivery probability ``p``."""

    transition: np.ndarray
    q: float
    p: float

    def __post_init__(self):
        t = np.array(self.transition, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidModel(f"transition matrix must be square, got shape {t.shape}")
        if t.min() < -EPS_ROW or np.any(np.abs(t.sum(axis=1) - 1) > EPS_ROW):
            raise InvalidModel("transition matrix must be row-stochastic")
        for name in ("q", "p"):
            v = getattr(self, name)
            if np.ndim(v) != 0:
                raise InvalidModel(f"{name} must be a single probability shared by all users")
            if not 0.0 < float(v) <= 1.0:
                raise InvalidModel(f"{name} = {v!r} must lie in (0, 1]")
            object.__setattr__(self, name, float(v))
        t = np.clip(t, 0.0, None)
        t /= t.sum(axis=1, keepdims=True)
        t.setflags(write=False)
        object.__setattr__(self, "transition", t)

    @property
    def n_users(self) -> int:
        return self.transition.shape[0]

    @property
    def users(self) -> list:
        return [f"u{i + 1}" for i in range(self.n_users)]

    @property
    def detected(self) -> list:
        return [f"d{i + 1}" for i in range(self.n_users)]

    @property
    def served(self) -> list:
        return [f"s{i + 1}" for i in range(self.n_users)]

    @classmethod
    def uniform(cls, n_users: int, q: float, p: float) -> "CrowdsModel":
        return cls(np.full((n_users, n_users), 1.0 / n_users), q, p)


def aux_channels(model: CrowdsModel):
    """Return ``(I_d, I_s, P_d, P_s)``."""
    n = model.n_users
    eye = np.eye(n)
    i_d = Channel(model.users, model.detected, eye)
    i_s = Channel(model.users, model.served, eye)
    p_d = Channel(model.detected, model.detected, model.transition)
    p_s = Channel(model.served, model.served, model.transition)
    return i_d, i_s, p_d, p_s


def _transition_powers(model: CrowdsModel, k: int) -> list:
    """``[P^1, ..., P^k]`` by iterated multiplication (``k - 1`` products)."""
    powers = [np.asarray(model.transition)]
    for _ in range(k - 1):
        powers.append(powers[-1] @ model.transition)
    return powers


def _blocks(model: CrowdsModel, count: int) -> list:
    """Blocks ``A0 .. A(count-1)``."""
    i_d, i_s, _, _ = aux_channels(model)
    powers = _transition_powers(model, max(1, (count + 1) // 2))
    blocks = []
    for k in range(count):
        j = k // 2
        if k % 2 == 0:
            blocks.append(i_d if j == 0 else Channel(model.users, model.detected, powers[j - 1]))
        else:
            blocks.append(Channel(model.users, model.served, powers[j]))
    return blocks


def _nest(blocks: list, first_weight: float, other_weight: float) -> Channel:
    """``B0 (+)_w0 (B1 (+)_w1 (... (+) Bn))`` with weights alternating from ``first_weight``."""
    acc = blocks[-1]
    for k in range(len(blocks) - 2, -1, -1):
        acc = hidden_choice(blocks[k], acc, first_weight if k % 2 == 0 else other_weight)
    return acc


def truncated_channel(model: CrowdsModel, i: int) -> Channel:
    """``C_i``: the protocol when every request is forwarded at most ``i`` times."""
    if i < 1:
        raise ValueError("the truncation index starts at 1")
    return _nest(_blocks(model, 2 * i), model.q, model.p)


def remainder_channel(model: CrowdsModel, m: int, i: int) -> Channel:
    """The tail ``D`` with ``C_i = K_m (+)_{t_2m} D`` for ``i > m``.

    It nests ``I_s P_s^(m+1), I_d P_d^(m+1), ..., I_s P_s^i`` starting with
    weight ``p``.
    """
    if not 1 <= m < i:
        raise ValueError("need 1 <= m < i")
    return _nest(_blocks(model, 2 * i)[2 * m + 1 :], model.p, model.q)


def t_sequence(q: float, p: float, upto: int) -> list:
    """``t_0 .. t_upto``: cumulative probability of the first ``k + 1`` blocks."""
    t = []
    for k in range(upto + 1):
        i, odd = divmod(k, 2)
        t.append(1 - (1 - q) ** (i + 1) * (1 - p) ** (i + odd))
    return t


def flattened_k(model: CrowdsModel, m: int) -> Channel:
    """``K_m = ((A0 (+)_{t0/t1} A1) (+)_{t1/t2} A2 ...) (+)_{t(2m-1)/t(2m)} A(2m)``."""
    if m < 1:
        raise ValueError("m starts at 1")
    return _flatten(_blocks(model, 2 * m + 1), t_sequence(model.q, model.p, 2 * m))


def _flatten(blocks: list, t: list) -> Channel:
    acc = blocks[0]
    for k in range(1, len(blocks)):
        acc = hidden_choice(acc, blocks[k], t[k - 1] / t[k])
    return acc


@dataclass(frozen=True)
class CrowdsBounds:
    m: int
    t: list
    lower: float
    upper: float
    gap_bound: float
    extra: dict = field(default_factory=dict)

    @property
    def t2m(self) -> float:
        return self.t[2 * self.m]

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("extra")
        d["t2m"] = self.t2m
        return d

    csv_header = "m,t2m,lower,upper,gap_bound"

    def csv_row(self, fmt=repr) -> str:
        return ",".join([str(self.m)] + [fmt(v) for v in (self.t2m, self.lower, self.upper, self.gap_bound)])


def gap_bound(q: float, p: float, m: int) -> float:
    return (1 - q) ** (m + 1) * (1 - p) ** m


def leakage_bounds(
    model: CrowdsModel, pi: Optional[Prior] = None, g: Optional[GainFunction] = None, m: int = 10
) -> CrowdsBounds:
    """Sandwich ``V_g[pi, Crowds]`` between ``t_2m V[K_m]`` and that plus ``(1 - t_2m) V[I_s P_s^(m+1)]``.

    Needs the powers ``P^1 .. P^(m+1)``, i.e. exactly ``m`` matrix
    products of size ``n_users``.  ``pi`` and ``g`` default to the
    uniform prior and the identity gain.
    """
    if m < 1:
        raise ValueError("m starts at 1")
    if pi is None:
        pi = Prior.uniform(model.users)
    if g is None:
        g = identity_gain(model.users)
    blocks = _blocks(model, 2 * m + 2)
    t = t_sequence(model.q, model.p, 2 * m)
    k_m = _flatten(blocks[: 2 * m + 1], t)
    v_k = posterior_vulnerability(pi, k_m, g)
    v_tail = posterior_vulnerability(pi, blocks[2 * m + 1], g)
    lower = t[2 * m] * v_k
    upper = lower + (1 - t[2 * m]) * v_tail
    return CrowdsBounds(m, t, lower, upper, gap_bound(model.q, model.p, m), {"v_k": v_k, "v_tail": v_tail})


def m_for_precision(q: float, p: float, epsilon: float, max_m: int = 100_000) -> int:
    """Smallest ``m >= 1`` with ``(1 - q)^(m+1) (1 - p)^m <= epsilon``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    for m in range(1, max_m + 1):
        if gap_bound(q, p, m) <= epsilon:
            return m
    raise ValueError(f"no m <= {max_m} reaches precision {epsilon}")


def crowds_limit_channel(model: CrowdsModel) -> Channel:
    """Closed-form limit of ``C_i`` via the geometric series of ``P``.

    Used only as an independent cross-check: detection mass
    ``q (I - r P)^-1`` and delivery mass ``(1-q) p P (I - r P)^-1`` with
    ``r = (1 - q)(1 - p)``.
    """
    n = model.n_users
    P = np.asarray(model.transition)
    r = (1 - model.q) * (1 - model.p)
    series = np.linalg.inv(np.eye(n) - r * P)
    det = model.q * series
    srv = (1 - model.q) * model.p * P @ series
    return Channel(model.users, model.detected + model.served, np.hstack([det, srv]))
