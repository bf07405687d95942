import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochnorm import constants as K
from stochnorm.distributions import DiscreteRV
from stochnorm.errors import CapExceededError
from stochnorm.norms import Lp, Ordered, TopL, max_scaled
from stochnorm.stats import (ProductVector, exceptional_mass, expected_count_above, expected_norm,
                             expected_norms_exact, expected_topl_exact, gamma, gamma_min_form,
                             integrate_count_above, sorted_mean_vector, tau, total_excess)

from conftest import product_vectors

COIN = DiscreteRV.from_dict({0: 0.5, 2: 0.5})


def point(*xs):
    return ProductVector([DiscreteRV.from_dict({x: 1.0}) for x in xs])


def norms_for(m):
    out = [TopL(l) for l in range(1, m + 1)]
    out += [Lp(2.0), Ordered(tuple(np.linspace(1.0, 0.2, m))),
            max_scaled([TopL(1), TopL(m)], [1.0, 2.0]).as_normalized()]
    return out


class TestExamples:
    def test_count_above(self):
        Y = ProductVector([COIN, COIN])
        assert expected_count_above(Y, 1) == 1.0
        assert expected_count_above(Y, 2) == 0.0
        assert expected_count_above(point(2, 1), 1.5) == 1

    def test_tau_deterministic(self):
        Y = point(2, 1)
        assert tau(Y, 1) == 2 and tau(Y, 2) == 1
        assert tau(Y, 3) == 0 and tau(Y, 0) == math.inf

    def test_tau_single_coin(self):
        assert tau(ProductVector([COIN]), 1) == 0

    def test_gamma(self):
        assert gamma(point(2, 1), 1) == 2
        assert gamma(point(2, 1), 2) == 3
        assert gamma(ProductVector([COIN]), 1) == 1

    def test_expected_top(self):
        Y = ProductVector([COIN, COIN])
        assert expected_topl_exact(Y, 1) == 1.5
        assert expected_topl_exact(Y, 2) == 2.0
        assert expected_topl_exact(point(3, 1, 2), 2) == 5

    def test_expected_norm(self):
        Y = ProductVector([COIN, COIN])
        assert expected_norm(Y, TopL(1)) == (1.5, 0.0)

    def test_mc_is_seeded(self):
        Y = ProductVector([COIN, COIN, COIN])
        a = expected_norm(Y, TopL(1), "mc", 500, seed=3)
        b = expected_norm(Y, TopL(1), "mc", 500, seed=3)
        assert a == b
        assert abs(a[0] - expected_topl_exact(Y, 1)) <= 3 * a[1]

    def test_mc_rejects_zero_samples(self):
        with pytest.raises(ValueError):
            expected_norm(point(1), TopL(1), "mc", 0)

    def test_sorted_mean(self):
        assert np.array_equal(sorted_mean_vector(point(1, 2)), [2, 1])
        assert np.allclose(sorted_mean_vector(ProductVector([COIN, COIN])), [1.5, 0.5])
        assert np.allclose(sorted_mean_vector(ProductVector([COIN])), [1.0])

    def test_exceptional_mass(self):
        assert exceptional_mass(ProductVector([COIN]), 1) == 1.0
        assert exceptional_mass(ProductVector([COIN, COIN]), 0) == 2.0
        assert exceptional_mass(point(2, 1), 1.5) == 2

    def test_cap(self):
        x = DiscreteRV(np.arange(10.0), np.full(10, 0.1))
        with pytest.raises(CapExceededError):
            expected_topl_exact(ProductVector([x] * 4), 1, cap=1000)

    def test_gamma_range(self):
        with pytest.raises(ValueError):
            gamma(point(1, 2), 3)

    def test_empty_vector_rejected(self):
        with pytest.raises(ValueError):
            ProductVector([])


class TestProperties:
    @given(product_vectors(max_m=5))
    def test_gamma_sandwich_and_min_form(self, Y):
        for l in range(1, Y.m + 1):
            e = expected_topl_exact(Y, l)
            g = gamma(Y, l)
            assert abs(g - gamma_min_form(Y, l)) <= 1e-9
            assert e - 1e-9 <= g <= 4 * e + 1e-9

    @given(product_vectors(), st.floats(0.01, 5))
    def test_proxy_bounds(self, Y, theta):
        for l in range(1, Y.m + 1):
            e = expected_topl_exact(Y, l)
            if exceptional_mass(Y, theta) <= l * theta:
                assert e <= 2 * l * theta + 1e-9
            else:
                assert e > l * theta / 2 - 1e-9

    @given(product_vectors(), st.floats(0, 5))
    def test_integral_identity(self, Y, t):
        assert abs(integrate_count_above(Y, t) - total_excess(Y, t)) <= 1e-9

    @given(product_vectors(max_m=5))
    def test_consecutive_gamma_differences(self, Y):
        for l in range(2, Y.m + 1):
            d = gamma(Y, l) - gamma(Y, l - 1)
            assert tau(Y, l - 1) + 1e-9 >= d >= tau(Y, l) - 1e-9

    @given(product_vectors(max_m=5))
    def test_tau_monotone(self, Y):
        ts = [tau(Y, l) for l in range(1, Y.m + 2)]
        assert all(a >= b for a, b in zip(ts, ts[1:]))

    @given(product_vectors())
    def test_expectation_of_norm(self, Y):
        s = sorted_mean_vector(Y)
        assert np.all(np.diff(s) <= 1e-12)
        fs = norms_for(Y.m)
        for f, e in zip(fs, expected_norms_exact(Y, fs)):
            assert f(s) <= e + 1e-9
            assert e <= K.EXPECTED_NORM * f(s) + 1e-9

    @given(product_vectors())
    def test_tau_expression(self, Y):
        taus = np.array([tau(Y, l) for l in range(1, Y.m + 1)])
        fs = norms_for(Y.m)
        for f, e in zip(fs, expected_norms_exact(Y, fs)):
            expr = total_excess(Y, taus[0]) + f(taus)
            assert expr <= K.TAU_EXPR_LOWER * e + 1e-9
            assert e <= K.TAU_EXPR_UPPER * expr + 1e-9

    @settings(max_examples=40)
    @given(product_vectors(max_m=3), st.data())
    def test_stochastic_majorization(self, Y, data):
        V = ProductVector([data.draw(product_vectors(max_m=1)).coords[0] for _ in range(Y.m)])
        tops = [TopL(l) for l in range(1, Y.m + 1)]
        ey, ev = expected_norms_exact(Y, tops), expected_norms_exact(V, tops)
        if min(ev) <= 0:
            return
        alpha = max(a / b for a, b in zip(ey, ev))
        fs = norms_for(Y.m)
        for f, a, b in zip(fs, expected_norms_exact(Y, fs), expected_norms_exact(V, fs)):
            assert a <= K.EXPECTED_NORM * alpha * b + 1e-9
