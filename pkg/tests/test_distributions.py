import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stochnorm.distributions import (DiscreteRV, bernoulli_decompose, bernoulli_trial, convolve,
                                     convolve_all, is_geometric, max_of_trials,
                                     modified_effective_size, round_up_to_geometric,
                                     stochastically_dominates, sum_of_trials)
from stochnorm.errors import CapExceededError

from conftest import rvs


def rv(d):
    return DiscreteRV.from_dict(d)


class TestConstruction:
    def test_merges_and_sorts(self):
        x = DiscreteRV([2, 0, 2], [0.25, 0.5, 0.25])
        assert x.atoms() == [(0.0, 0.5), (2.0, 0.5)]

    def test_drops_zero_probability(self):
        assert rv({0: 1.0, 3: 0.0}).size == 1

    @pytest.mark.parametrize("values, probs", [
        ([-1, 1], [0.5, 0.5]),
        ([1, 2], [0.5, 0.6]),
        ([1], [-1.0]),
        ([], []),
        ([np.inf], [1.0]),
    ])
    def test_rejects_invalid(self, values, probs):
        with pytest.raises(ValueError):
            DiscreteRV(values, probs)

    def test_arrays_are_read_only(self):
        x = rv({1: 1.0})
        with pytest.raises(ValueError):
            x.values[0] = 2

    def test_bernoulli_detection(self):
        assert rv({0: 0.5, 3: 0.5}).is_bernoulli()
        assert rv({3: 1.0}).is_bernoulli()
        assert not rv({1: 0.5, 3: 0.5}).is_bernoulli()


class TestRestrict:
    def test_below_drops_large_atom(self):
        assert rv({0: 0.5, 2: 0.5}).restrict(1, "below") == rv({0: 1.0})

    def test_at_or_above_keeps_large_atom(self):
        assert rv({0: 0.5, 2: 0.5}).restrict(1, "at_or_above") == rv({0: 0.5, 2: 0.5})

    def test_below_moves_mass_to_zero(self):
        assert rv({1: 0.3, 3: 0.7}).restrict(2, "below").allclose(rv({0: 0.7, 1: 0.3}))

    def test_unknown_part(self):
        with pytest.raises(ValueError):
            rv({1: 1.0}).restrict(1, "middle")

    @given(rvs(), st.floats(0, 5))
    def test_conservation(self, x, theta):
        parts = x.restrict(theta, "below").mean() + x.restrict(theta, "at_or_above").mean()
        assert parts == pytest.approx(x.mean(), abs=1e-12)
        assert x.truncated_mean(theta) + x.exceptional_mean(theta) == pytest.approx(x.mean(), abs=1e-12)


class TestMoments:
    def test_two_point(self):
        x = rv({0: 0.5, 2: 0.5})
        assert x.mean() == 1.0
        assert x.tail(1) == 0.5
        assert x.excess_mean(1) == 0.5

    def test_excess_at_zero_is_mean(self):
        assert rv({3: 1.0}).excess_mean(0) == 3.0

    def test_excess_above_two(self):
        assert rv({1: 0.3, 3: 0.7}).excess_mean(2) == pytest.approx(0.7)

    def test_tail_is_strict(self):
        x = rv({1: 0.3, 3: 0.7})
        assert x.tail(3) == 0.0
        assert x.tail_geq(3) == pytest.approx(0.7)


class TestEffectiveSize:
    def test_two_point_base_two(self):
        assert rv({0: 0.5, 1: 0.5}).effective_size(2) == pytest.approx(math.log2(1.5), abs=1e-12)

    @pytest.mark.parametrize("lam", [1.5, 2, 10, 1000])
    def test_deterministic(self, lam):
        assert rv({2.5: 1.0}).effective_size(lam) == pytest.approx(2.5, abs=1e-12)

    def test_lambda_one_is_mean(self):
        assert rv({0: 0.5, 1: 0.5}).effective_size(1) == 0.5

    def test_rejects_small_lambda(self):
        with pytest.raises(ValueError):
            rv({1: 1.0}).effective_size(0.5)

    def test_large_values_do_not_overflow(self):
        assert rv({0: 0.5, 2000: 0.5}).effective_size(100) == pytest.approx(2000 - math.log(2, 100))

    @given(rvs(), rvs(), st.sampled_from([1, 2, 4, 8, 100]))
    def test_additive_over_independent_sums(self, x, y, lam):
        lhs = convolve(x, y).effective_size(lam)
        assert abs(lhs - x.effective_size(lam) - y.effective_size(lam)) <= 1e-9

    @given(rvs(), st.sampled_from([2, 4, 8]))
    def test_between_mean_and_max(self, x, lam):
        b = x.effective_size(lam)
        assert x.mean() - 1e-12 <= b <= x.max_value + 1e-12


class TestModifiedEffectiveSize:
    @pytest.mark.parametrize("q, s, lam, expected", [
        (0.5, 2, 2, 2.0),
        (1.0, 1, 2, 1.0),
        (0.1, 1, 2, 0.2),
    ])
    def test_examples(self, q, s, lam, expected):
        assert modified_effective_size(q, s, lam) == pytest.approx(expected)

    def test_trial_constructor(self):
        assert bernoulli_trial(0.25, 2) == rv({0: 0.75, 2: 0.25})
        assert bernoulli_trial(1.0, 2) == rv({2: 1.0})
        with pytest.raises(ValueError):
            bernoulli_trial(0.0, 1)


class TestConvolve:
    def test_two_coins(self):
        c = rv({0: 0.5, 1: 0.5})
        assert convolve(c, c) == rv({0: 0.25, 1: 0.5, 2: 0.25})

    def test_zero_is_identity(self):
        x = rv({1: 0.3, 3: 0.7})
        assert convolve(x, rv({0: 1.0})) == x

    def test_points(self):
        assert convolve(rv({1: 1.0}), rv({2: 1.0})) == rv({3: 1.0})

    def test_cap(self):
        x = DiscreteRV(np.arange(100) * 1.0, np.full(100, 0.01))
        with pytest.raises(CapExceededError):
            convolve(x, x, cap=1000)

    def test_empty_sum_is_zero(self):
        assert convolve_all([]) == rv({0: 1.0})

    @given(rvs(), rvs())
    def test_mean_is_additive(self, x, y):
        assert convolve(x, y).mean() == pytest.approx(x.mean() + y.mean(), abs=1e-12)


class TestGeometric:
    def test_rounds_up(self):
        assert round_up_to_geometric(rv({0.22: 1.0})) == rv({0.25: 1.0})

    def test_power_of_two_unchanged(self):
        assert round_up_to_geometric(rv({0.125: 1.0})) == rv({0.125: 1.0})

    def test_three_goes_to_four(self):
        assert round_up_to_geometric(rv({0: 0.5, 3: 0.5})) == rv({0: 0.5, 4: 0.5})

    @given(rvs())
    def test_result_is_geometric_and_dominates(self, x):
        g = round_up_to_geometric(x)
        assert is_geometric(g)
        assert stochastically_dominates(g, x)
        assert g.mean() <= 2 * x.mean() + 1e-12


class TestBernoulliDecompose:
    def test_single_atom(self):
        assert bernoulli_decompose(rv({0: 0.5, 1: 0.5})) == [(0.5, 1.0)]

    def test_two_atoms(self):
        pairs = bernoulli_decompose(rv({0: 0.25, 0.5: 0.25, 1: 0.5}))
        assert pairs == [(0.5, 1.0), (0.5, 0.5)]
        B = sum_of_trials(pairs)
        window = sum(p for v, p in B.atoms() if 0.5 <= v < 1)
        assert window == pytest.approx(0.25, abs=1e-15)

    def test_certain(self):
        assert bernoulli_decompose(rv({1: 1.0})) == [(1.0, 1.0)]

    def test_rejects_non_geometric(self):
        with pytest.raises(ValueError):
            bernoulli_decompose(rv({3: 1.0}))

    @given(st.lists(st.integers(-3, 4), min_size=1, max_size=6, unique=True),
           st.booleans(), st.data())
    def test_window_identity(self, exps, with_zero, data):
        vals = [2.0 ** e for e in exps] + ([0.0] if with_zero else [])
        w = data.draw(st.lists(st.floats(0.05, 1), min_size=len(vals), max_size=len(vals)))
        R = DiscreteRV(vals, np.array(w) / sum(w))
        B = sum_of_trials(bernoulli_decompose(R))
        for t, p in R.atoms():
            if t > 0:
                assert abs(p - sum(q for v, q in B.atoms() if t <= v < 2 * t)) <= 1e-12
        assert stochastically_dominates(B, R)
        assert stochastically_dominates(R, B.scale(0.5))
        # the maximum of the trials has exactly the law of R
        assert max_of_trials(bernoulli_decompose(R)).allclose(R, tol=1e-12)


class TestDominance:
    def test_examples(self):
        assert stochastically_dominates(rv({2: 1}), rv({1: 1}))
        assert not stochastically_dominates(rv({1: 1}), rv({2: 1}))
        assert not stochastically_dominates(rv({0: 0.5, 2: 0.5}), rv({1: 1}))

    @given(rvs())
    def test_reflexive(self, x):
        assert stochastically_dominates(x, x)


class TestSample:
    def test_point_mass(self):
        rng = np.random.default_rng(0)
        assert np.all(rv({5: 1.0}).sample(rng, 100) == 5)

    def test_mean(self):
        x = rv({0: 0.5, 1: 0.5})
        assert abs(x.sample(np.random.default_rng(1), 100_000).mean() - 0.5) < 0.01

    def test_seeded(self):
        x = rv({0: 0.2, 1: 0.3, 4: 0.5})
        a = x.sample(np.random.default_rng(7), 50)
        b = x.sample(np.random.default_rng(7), 50)
        assert np.array_equal(a, b)

    def test_scalar(self):
        assert isinstance(rv({0: 0.5, 1: 0.5}).sample(np.random.default_rng(0)), float)
