"""Refinement ``C1 [= C2`` (``C2 = C1 D`` for some channel ``D``).

The decision procedure is a phase-1 linear feasibility problem: find a
row-stochastic ``D`` with ``C1 D = C2`` cell by cell.  A positive answer
is accepted only after substituting the witness and finding every cell
within :data:`EPS_REF`; for a negative one the L-infinity distance
``min_D max |C1 D - C2|`` is reported as the residual.

A sampling falsifier searches for a (prior, gain) pair on which ``C2`` is
more vulnerable than ``C1``.  Since refinement means no gain function can
ever prefer ``C2``, such a pair certifies non-refinement.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .algebra import equal_up_to_permutation
from .channel import Channel, GainFunction, Prior
from .errors import IncompatibleInputs, SolverStall
from .measures import identity_gain, posterior_vulnerability
from .sampling import random_gain, random_prior

log = logging.getLogger(__name__)

EPS_REF = 1e-6
VIOLATION_SLACK = 1e-9


@dataclass(frozen=True)
class RefinementVerdict:
    refined: bool
    witness: Optional[Channel] = None
    certificate: Optional[tuple] = None
    residual: float = float("nan")

    def __bool__(self):
        return self.refined


def _stochastic_rows(k: int, m: int):
    """Row-sum constraints on the ``k x m`` unknown ``D`` (row-major)."""
    return sp.kron(sp.identity(k), sp.csr_matrix(np.ones((1, m))), format="csr")


def _solve(c, cap_what: str, **kw):
    n_cons = sum(kw[key].shape[0] for key in ("A_ub", "A_eq") if kw.get(key) is not None)
    cap = 10 * (len(c) + n_cons)
    res = linprog(c, bounds=(0, None), options={"maxiter": cap}, **kw)
    if res.status == 1:
        raise SolverStall(f"{cap_what} hit the iteration cap ({cap})")
    return res


def _witness_lp(m1: np.ndarray, m2: np.ndarray) -> Optional[np.ndarray]:
    """Phase-1 feasibility of ``m1 D = m2`` with ``D`` row-stochastic; ``None`` if infeasible."""
    k, m = m1.shape[1], m2.shape[1]
    A_eq = sp.vstack([sp.kron(sp.csr_matrix(m1), sp.identity(m)), _stochastic_rows(k, m)], format="csr")
    b_eq = np.concatenate([m2.ravel(), np.ones(k)])
    res = _solve(np.zeros(k * m), "refinement LP", A_eq=A_eq, b_eq=b_eq, method="highs-ds")
    if res.status == 2:
        return None
    if res.status != 0:
        raise SolverStall(f"refinement LP failed: {res.message}")
    return _normalized(res.x, k, m)


def _normalized(x: np.ndarray, k: int, m: int) -> np.ndarray:
    d = np.clip(x.reshape(k, m), 0.0, None)
    sums = d.sum(axis=1, keepdims=True)
    return np.where(sums > 0, d / np.where(sums > 0, sums, 1.0), 1.0 / m)


def _distance_lp(m1: np.ndarray, m2: np.ndarray) -> Optional[np.ndarray]:
    """Minimizer of ``max |m1 D - m2|`` over row-stochastic ``D``."""
    n, k = m1.shape
    m = m2.shape[1]
    A = sp.kron(sp.csr_matrix(m1), sp.identity(m), format="csr")
    t_col = sp.csr_matrix(-np.ones((n * m, 1)))
    A_ub = sp.vstack([sp.hstack([A, t_col]), sp.hstack([-A, t_col])], format="csr")
    b_ub = np.concatenate([m2.ravel(), -m2.ravel()])
    A_eq = sp.hstack([_stochastic_rows(k, m), sp.csr_matrix((k, 1))], format="csr")
    c = np.zeros(k * m + 1)
    c[-1] = 1.0
    res = _solve(c, "distance LP", A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=np.ones(k), method="highs-ipm")
    if res.status != 0:
        return None
    return _normalized(res.x[:-1], k, m)


def refines(
    c1: Channel,
    c2: Channel,
    tol: float = EPS_REF,
    seed: Optional[int] = None,
    trials: int = 1000,
) -> RefinementVerdict:
    """Decide whether ``c2`` refines ``c1`` (``c2`` never leaks more).

    When the answer is negative and ``seed`` is given, the falsifier is
    run to attach a ``(prior, gain)`` certificate.
    """
    if set(c1.inputs) != set(c2.inputs):
        raise IncompatibleInputs("refinement needs channels over the same inputs")
    m2 = c2.with_input_order(c1.inputs).matrix
    perm = equal_up_to_permutation(c1, c2)
    if perm is not None:
        d = np.zeros((len(c1.outputs), len(c2.outputs)))
        for i, j in perm.mapping:
            d[i, j] = 1.0
        residual = float(np.max(np.abs(c1.matrix @ d - m2)))
        return RefinementVerdict(True, Channel(c1.outputs, c2.outputs, d), None, residual)
    residual = float("nan")
    for solve in (_witness_lp, _distance_lp):
        d = solve(c1.matrix, m2)
        if d is None:
            continue
        residual = float(np.max(np.abs(c1.matrix @ d - m2)))
        if residual <= tol:
            return RefinementVerdict(True, Channel(c1.outputs, c2.outputs, d), None, residual)
    cert = None
    if seed is not None:
        cert = coriaceous_falsify(c1, c2, trials=trials, seed=seed)
    return RefinementVerdict(False, None, cert, residual)


def equivalent(c1: Channel, c2: Channel, tol: float = EPS_REF) -> bool:
    return refines(c1, c2, tol).refined and refines(c2, c1, tol).refined


def coriaceous_falsify(
    c1: Channel, c2: Channel, trials: int = 1000, seed: int = 0
) -> Optional[tuple]:
    """Look for ``(pi, g)`` with ``V_g[pi, c2] > V_g[pi, c1]``.

    The uniform prior with the identity gain is tried first, then
    ``trials`` random full-support priors paired with random gain
    matrices of at most ``2|X|`` actions.  Returns ``None`` if nothing is
    found, which is *not* a proof of refinement.
    """
    if set(c1.inputs) != set(c2.inputs):
        raise IncompatibleInputs("falsifier needs channels over the same inputs")
    inputs = c1.inputs
    rng = np.random.default_rng(seed)

    def violates(pi: Prior, g: GainFunction) -> bool:
        return posterior_vulnerability(pi, c2, g) > posterior_vulnerability(pi, c1, g) + VIOLATION_SLACK

    candidate = (Prior.uniform(inputs), identity_gain(inputs))
    if violates(*candidate):
        return candidate
    for _ in range(trials):
        candidate = (random_prior(rng, inputs), random_gain(rng, inputs))
        if violates(*candidate):
            return candidate
    log.debug("no certificate found in %d trials", trials)
    return None
