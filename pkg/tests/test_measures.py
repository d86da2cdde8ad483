import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qifalgebra import (
    Channel,
    GainFunction,
    LeakageReport,
    Prior,
    Tag,
    additive_capacity,
    identity_gain,
    leakage,
    multiplicative_capacity,
    null_channel,
    posterior_vulnerability,
    posteriors,
    prior_vulnerability,
    transparent_channel,
)
from qifalgebra.errors import LabelMismatch, ZeroPriorVulnerability

from helpers import brute_posterior_vulnerability, frac_matrix, identity_rows, rand_channel, random_gain, random_inputs, random_prior

X2 = ["x1", "x2"]


def test_prior_vulnerability_examples(three_secret):
    assert prior_vulnerability(Prior.uniform(X2), identity_gain(X2)) == pytest.approx(0.5)
    _, pi = three_secret
    assert prior_vulnerability(pi, identity_gain(pi.support)) == pytest.approx(0.5)
    ones = GainFunction(["w"], pi.support, [[1, 1, 1]])
    assert prior_vulnerability(pi, ones) == pytest.approx(1.0)


def test_prior_vulnerability_label_mismatch():
    with pytest.raises(LabelMismatch):
        prior_vulnerability(Prior.uniform(X2), identity_gain(["a", "b"]))


def test_three_secret_posterior_vulnerability(three_secret):
    c, pi = three_secret
    rows = frac_matrix([[Fraction(1, 6), Fraction(2, 3), Fraction(1, 6), 0], [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), 0], [Fraction(1, 2), Fraction(1, 3), 0, Fraction(1, 6)]])
    exact = brute_posterior_vulnerability([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)], rows, identity_rows(3))
    assert exact == Fraction(11, 18)
    assert posterior_vulnerability(pi, c, identity_gain(c.inputs)) == pytest.approx(11 / 18, abs=1e-12)


def test_three_secret_leakage(three_secret):
    c, pi = three_secret
    r = leakage(pi, c, identity_gain(c.inputs))
    assert r.additive == pytest.approx(1 / 9, abs=1e-12)
    assert r.multiplicative == pytest.approx(11 / 9, abs=1e-12)


def test_null_and_identity_leakage(rng):
    X = ["a", "b", "c", "d"]
    pi = random_prior(rng, X)
    g = random_gain(rng, X)
    n = null_channel(X, 3)
    assert posterior_vulnerability(pi, n, g) == pytest.approx(prior_vulnerability(pi, g), abs=1e-12)
    r = leakage(Prior.uniform(X), n, identity_gain(X))
    assert r.multiplicative == pytest.approx(1.0) and r.additive == pytest.approx(0.0, abs=1e-15)
    r = leakage(Prior.uniform(X), transparent_channel(X), identity_gain(X))
    assert r.posterior_vulnerability == pytest.approx(1.0)
    assert r.multiplicative == pytest.approx(4.0) and r.additive == pytest.approx(0.75)


def test_zero_prior_vulnerability_keeps_additive():
    zero = GainFunction(["w"], X2, [[0, 0]])
    with pytest.raises(ZeroPriorVulnerability) as info:
        leakage(Prior.uniform(X2), transparent_channel(X2), zero)
    report = info.value.report
    assert report.multiplicative is None and report.additive == 0.0


def test_report_serialization():
    r = LeakageReport(0.5, 0.75, 1.5, 0.25)
    assert r.csv_header() == "prior,posterior,mult,add"
    assert r.csv_row() == "0.5,0.75,1.5,0.25"
    assert r.to_dict()["multiplicative"] == 1.5
    assert LeakageReport(0.0, 0.0, None, 0.0).csv_row().split(",")[2] == ""


def test_multiplicative_capacity_examples(three_secret):
    c, _ = three_secret
    assert multiplicative_capacity(null_channel(X2, 3)) == 0.0
    for n in (2, 3, 5):
        assert multiplicative_capacity(transparent_channel([f"x{i}" for i in range(n)])) == pytest.approx(math.log2(n))
    assert multiplicative_capacity(c) == pytest.approx(math.log2(19 / 12), abs=1e-12)


def test_additive_capacity_examples():
    assert additive_capacity(null_channel(["a", "b", "c"], 2), Prior.uniform(["a", "b", "c"])) == pytest.approx(0.0, abs=1e-15)
    assert additive_capacity(transparent_channel(X2), Prior.uniform(X2)) == pytest.approx(1.0)
    assert additive_capacity(transparent_channel(X2), Prior(X2, [1, 0])) == 0.0


def test_identity_gain_shapes():
    assert identity_gain(["x"]).matrix.tolist() == [[1.0]]
    np.testing.assert_array_equal(identity_gain(["a", "b", "c"]).matrix, np.eye(3))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_measure_invariants(seed):
    rng = np.random.default_rng(seed)
    X = random_inputs(rng, 1, 6)
    c = rand_channel(rng, X)
    pi = random_prior(rng, X, full_support=bool(rng.integers(2)))
    g = random_gain(rng, X)

    v_prior, v_post = prior_vulnerability(pi, g), posterior_vulnerability(pi, c, g)
    assert v_post >= v_prior - 1e-9

    via_posteriors = sum(py * prior_vulnerability(post, g) for _, py, post in posteriors(c, pi))
    assert v_post == pytest.approx(via_posteriors, abs=1e-9)

    exact = brute_posterior_vulnerability(
        [Fraction(v) for v in pi.probs], frac_matrix(c.matrix.tolist()), frac_matrix(g.matrix.tolist())
    )
    assert v_post == pytest.approx(float(exact), abs=1e-12)

    full = random_prior(rng, X)
    gid = identity_gain(X)
    ratio = posterior_vulnerability(full, c, gid) / prior_vulnerability(full, gid)
    assert multiplicative_capacity(c) >= math.log2(ratio) - 1e-9
    assert additive_capacity(c, pi) >= posterior_vulnerability(pi, c, gid) - prior_vulnerability(pi, gid) - 1e-9

    perm = rng.permutation(len(c.outputs))
    shuffled = Channel(c.inputs, [c.outputs[k] for k in perm], c.matrix[:, perm])
    assert multiplicative_capacity(shuffled) == pytest.approx(multiplicative_capacity(c), abs=1e-12)
    assert additive_capacity(shuffled.relabel_outputs(lambda y: Tag(y, 2)), pi) == pytest.approx(additive_capacity(c, pi), abs=1e-12)
