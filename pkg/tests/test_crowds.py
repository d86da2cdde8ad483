from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qifalgebra.crowds as crowds
from qifalgebra import Prior, cascade, channels_equal, check_stochastic, hidden_choice, identity_gain, posterior_vulnerability, refines
from qifalgebra.crowds import (
    CrowdsBounds,
    CrowdsModel,
    aux_channels,
    crowds_limit_channel,
    flattened_k,
    gap_bound,
    leakage_bounds,
    m_for_precision,
    remainder_channel,
    t_sequence,
    truncated_channel,
)
from qifalgebra.errors import InvalidModel

from helpers import random_gain, random_prior


def random_model(rng, n=None, q=None, p=None):
    n = n or int(rng.integers(1, 6))
    P = rng.dirichlet(np.ones(n), size=n)
    return CrowdsModel(P, q if q is not None else rng.uniform(0.05, 0.5), p if p is not None else rng.uniform(0.3, 0.9))


class TestModel:
    def test_validation(self):
        with pytest.raises(InvalidModel):
            CrowdsModel(np.ones((2, 3)) / 3, 0.3, 0.5)
        with pytest.raises(InvalidModel):
            CrowdsModel([[0.5, 0.4], [0.5, 0.5]], 0.3, 0.5)
        for q, p in [(0, 0.5), (0.3, 0), (1.2, 0.5)]:
            with pytest.raises(InvalidModel):
                CrowdsModel.uniform(2, q, p)
        with pytest.raises(InvalidModel):
            CrowdsModel(np.eye(2), [0.3, 0.4], 0.5)

    def test_aux_channels(self):
        i_d, i_s, p_d, p_s = aux_channels(CrowdsModel.uniform(2, 0.3, 0.5))
        np.testing.assert_array_equal(i_d.matrix, np.eye(2))
        assert i_d.outputs == ("d1", "d2") and i_s.outputs == ("s1", "s2")
        assert not set(i_d.outputs) & set(i_s.outputs)
        np.testing.assert_allclose(p_s.matrix, np.full((2, 2), 0.5))
        assert p_d.inputs == p_d.outputs == ("d1", "d2")


class TestTruncated:
    def test_one_forward(self, rng):
        model = random_model(rng, 3)
        i_d, i_s, _, p_s = aux_channels(model)
        assert channels_equal(truncated_channel(model, 1), hidden_choice(i_d, cascade(i_s, p_s), model.q))

    def test_two_forwards(self, rng):
        model = random_model(rng, 3)
        i_d, i_s, p_d, p_s = aux_channels(model)
        isp = cascade(i_s, p_s)
        idp = cascade(i_d, p_d)
        isp2 = cascade(isp, p_s)
        manual = hidden_choice(i_d, hidden_choice(isp, hidden_choice(idp, isp2, model.q), model.p), model.q)
        assert channels_equal(truncated_channel(model, 2), manual)

    def test_single_user(self):
        model = CrowdsModel([[1.0]], 0.3, 0.5)
        c = truncated_channel(model, 4)
        assert check_stochastic(c)
        t = t_sequence(0.3, 0.5, 7)
        detected = t[0] + sum(t[k] - t[k - 1] for k in range(2, 8, 2))
        assert c["u1", "d1"] == pytest.approx(detected, abs=1e-12)

    def test_index_starts_at_one(self, rng):
        with pytest.raises(ValueError):
            truncated_channel(random_model(rng), 0)

    def test_converges_to_closed_form(self, rng):
        model = random_model(rng, 4)
        assert channels_equal(truncated_channel(model, 80), crowds_limit_channel(model), 1e-9)


class TestTSequence:
    def test_values(self):
        assert t_sequence(0.3, 0.5, 2) == pytest.approx([0.3, 0.65, 0.755], abs=1e-15)
        assert t_sequence(1.0, 0.5, 5) == [1.0] * 6
        assert t_sequence(0.3, 1.0, 1)[1] == 1.0

    def test_increasing(self):
        t = t_sequence(0.1, 0.4, 20)
        assert all(a < b for a, b in zip(t, t[1:])) and t[-1] < 1


class TestFlattened:
    def test_m1_structure(self, rng):
        model = random_model(rng, 3)
        i_d, i_s, p_d, p_s = aux_channels(model)
        t = t_sequence(model.q, model.p, 2)
        manual = hidden_choice(hidden_choice(i_d, cascade(i_s, p_s), t[0] / t[1]), cascade(i_d, p_d), t[1] / t[2])
        assert channels_equal(flattened_k(model, 1), manual)

    def test_uniform_two_users_m1(self):
        # exact rational evaluation of the three-block mixture
        q, p = Fraction(3, 10), Fraction(1, 2)
        t0, t1 = q, 1 - (1 - q) * (1 - p)
        t2 = 1 - (1 - q) ** 2 * (1 - p)
        w_d, w_s, w_dp = t0 / t2, (t1 - t0) / t2, (t2 - t1) / t2
        half = Fraction(1, 2)
        row_u1 = {"d1": w_d + w_dp * half, "d2": w_dp * half, "s1": w_s * half, "s2": w_s * half}
        assert row_u1 == {"d1": Fraction(141, 302), "d2": Fraction(21, 302), "s1": Fraction(35, 151), "s2": Fraction(35, 151)}
        k = flattened_k(CrowdsModel.uniform(2, 0.3, 0.5), 1)
        assert k.shape == (2, 4)
        for y, v in row_u1.items():
            assert k["u1", y] == pytest.approx(float(v), abs=1e-12)
        assert k["u2", "d2"] == pytest.approx(141 / 302, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 5), extra=st.integers(1, 3))
    def test_flattened_plus_remainder(self, seed, m, extra):
        rng = np.random.default_rng(seed)
        model = random_model(rng)
        i = m + extra
        t2m = t_sequence(model.q, model.p, 2 * m)[2 * m]
        mixed = hidden_choice(flattened_k(model, m), remainder_channel(model, m, i), t2m)
        assert channels_equal(truncated_channel(model, i), mixed, 1e-9)


class TestBounds:
    def test_q_one(self, rng):
        model = random_model(rng, 3, q=1.0)
        pi = random_prior(rng, model.users)
        g = random_gain(rng, model.users)
        b = leakage_bounds(model, pi, g, 3)
        i_d = aux_channels(model)[0]
        assert b.lower == pytest.approx(b.upper) == pytest.approx(posterior_vulnerability(pi, i_d, g))

    def test_random_three_users_m8(self, rng):
        model = random_model(rng, 3)
        pi, g = random_prior(rng, model.users), random_gain(rng, model.users)
        b = leakage_bounds(model, pi, g, 8)
        exact = posterior_vulnerability(pi, truncated_channel(model, 30), g)
        assert b.lower - 1e-9 <= exact <= b.upper + 1e-9

    @pytest.mark.parametrize("m", [1, 2, 5, 10])
    def test_uniform_gap(self, m):
        model = CrowdsModel.uniform(4, 0.3, 0.5)
        b = leakage_bounds(model, m=m)
        assert b.upper - b.lower <= 0.7 ** (m + 1) * 0.5**m + 1e-12
        assert b.gap_bound == pytest.approx(gap_bound(0.3, 0.5, m))

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_sandwich_is_monotone_and_cauchy(self, seed):
        rng = np.random.default_rng(seed)
        model = random_model(rng)
        pi, g = random_prior(rng, model.users), random_gain(rng, model.users)
        bounds = [leakage_bounds(model, pi, g, m) for m in range(1, 9)]
        for a, b in zip(bounds, bounds[1:]):
            assert b.lower >= a.lower - 1e-12
            assert abs(b.lower - a.lower) <= a.gap_bound + 1e-12
            assert abs(b.upper - a.upper) <= a.gap_bound + 1e-12
            assert a.lower <= a.upper and a.upper - a.lower <= a.gap_bound + 1e-9

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 4))
    def test_overpower(self, seed, m):
        rng = np.random.default_rng(seed)
        model = random_model(rng)
        pi, g = random_prior(rng, model.users), random_gain(rng, model.users)
        tail = crowds._blocks(model, 2 * m + 2)[2 * m + 1]
        d = remainder_channel(model, m, m + 3)
        assert posterior_vulnerability(pi, d, g) <= posterior_vulnerability(pi, tail, g) + 1e-9

    def test_powers_refine(self, rng):
        model = random_model(rng, 3)
        blocks = crowds._blocks(model, 8)
        served = blocks[1::2]
        for j in range(1, len(served)):
            assert refines(served[0], served[j]).refined

    @pytest.mark.parametrize("m", [1, 4, 9])
    def test_product_count(self, monkeypatch, m):
        seen = []
        original = crowds._transition_powers

        def spy(model, k):
            seen.append(k)
            return original(model, k)

        monkeypatch.setattr(crowds, "_transition_powers", spy)
        leakage_bounds(CrowdsModel.uniform(3, 0.2, 0.6), m=m)
        assert [k - 1 for k in seen] == [m]

    def test_serialization(self):
        b = leakage_bounds(CrowdsModel.uniform(2, 0.3, 0.5), m=1)
        assert CrowdsBounds.csv_header == "m,t2m,lower,upper,gap_bound"
        fields = b.csv_row().split(",")
        assert fields[0] == "1" and float(fields[1]) == pytest.approx(0.755)
        d = b.to_dict()
        assert set(d) == {"m", "t", "lower", "upper", "gap_bound", "t2m"}

    def test_defaults_are_uniform_identity(self, rng):
        model = random_model(rng, 3)
        a = leakage_bounds(model, m=3)
        b = leakage_bounds(model, Prior.uniform(model.users), identity_gain(model.users), 3)
        assert a.lower == b.lower and a.upper == b.upper


class TestPrecision:
    @pytest.mark.parametrize("r, bound", [(0.5, 10), (0.7, 20), (0.9, 66)])
    def test_anchors(self, r, bound):
        for q in (0.01, 0.05, 0.09):
            p = 1 - r / (1 - q)
            assert 0 < p <= 1
            m = m_for_precision(q, p, 0.001)
            assert m <= bound
            assert gap_bound(q, p, m) <= 0.001
            assert m == 1 or gap_bound(q, p, m - 1) > 0.001

    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError):
            m_for_precision(0.3, 0.5, 0)
