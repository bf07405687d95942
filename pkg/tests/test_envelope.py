import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stochnorm import constants as K
from stochnorm.envelope import (GuessVector, canonical_guess_loadbal, canonical_guess_tree,
                                enumerate_guesses_loadbal, enumerate_guesses_tree, envelope_curve,
                                envelope_vector, expansion, monotone_sequence_bound,
                                monotone_sequence_count, pos_set)
from stochnorm.norms import Lp, Ordered, TopL, max_scaled, top_l
from stochnorm.stats import expected_norms_exact, tau, total_excess

from conftest import product_vectors


def norms_for(m):
    out = [TopL(l) for l in range(1, m + 1)]
    out += [Lp(2.0), Ordered(tuple(np.linspace(1.0, 0.3, m))),
            max_scaled([TopL(1), TopL(m)], [1.0, 3.0]).as_normalized()]
    return out


@st.composite
def budgets(draw, max_m=8):
    """Non-decreasing budgets on pos_set(m) with B_l <= 2 B_{l/2}."""
    m = draw(st.integers(1, max_m))
    B = {1: draw(st.floats(0.1, 5))}
    levels = pos_set(m)
    for prev, l in zip(levels, levels[1:]):
        B[l] = B[prev] * draw(st.floats(1.0, 2.0))
    return m, B


class TestPosAndExpansion:
    @pytest.mark.parametrize("m, expected", [(5, (1, 2, 4)), (1, (1,)), (8, (1, 2, 4, 8))])
    def test_pos_set(self, m, expected):
        assert pos_set(m) == expected

    def test_expansion(self):
        assert list(expansion({1: 4, 2: 2, 4: 1}, 6)) == [4, 2, 2, 1, 1, 1]
        assert list(expansion({1: 7}, 1)) == [7]
        assert list(expansion({1: 3, 2: 2, 4: 1}, 4)) == [3, 2, 2, 1]

    def test_expansion_missing_index(self):
        with pytest.raises(ValueError):
            expansion({1: 1}, 2)

    def test_guess_vector_invariants(self):
        with pytest.raises(ValueError):
            GuessVector(2, (1.0, 2.0))
        with pytest.raises(ValueError):
            GuessVector(2, (1.0,))
        with pytest.raises(ValueError):
            GuessVector(1, (0.0,))
        g = GuessVector(4, (4.0, 2.0, 2.0))
        assert g[2] == 2.0 and g.budgets() == {1: 4.0, 2: 4.0, 4: 8.0}


class TestEnvelope:
    def test_line(self):
        assert np.allclose(envelope_vector({1: 1, 2: 2, 4: 4}, 4), [1, 1, 1, 1])

    def test_flat(self):
        assert np.allclose(envelope_vector({1: 2, 2: 2, 4: 2}, 4), [2, 0, 0, 0])

    def test_zero(self):
        assert np.all(envelope_vector({1: 0, 2: 0, 4: 0}, 5) == 0)

    @pytest.mark.parametrize("B", [{1: 2, 2: 1}, {1: 1, 2: 3}, {1: -1, 2: -1}])
    def test_rejects_bad_budgets(self, B):
        with pytest.raises(ValueError):
            envelope_vector(B, 2)

    @given(budgets())
    def test_concave_and_matches_hull(self, mB):
        m, B = mB
        b = envelope_vector(B, m)
        curve = envelope_curve(B, m)
        assert np.all(np.diff(b) <= 1e-12)
        assert np.allclose(np.cumsum(b), curve[1:], atol=1e-9)
        for l in pos_set(m):
            assert top_l(b, l) >= B[l] - 1e-9
        # the curve ends at the largest budget
        assert curve[m] == pytest.approx(B[pos_set(m)[-1]])

    @given(budgets(max_m=6), st.data())
    def test_envelope_dominates_budgeted_vectors(self, mB, data):
        m, B = mB
        b = envelope_vector(B, m)
        y = np.sort(data.draw(st.lists(st.floats(0, 5), min_size=m, max_size=m)))[::-1]
        scale = min(B[l] / top_l(y, l) for l in pos_set(m) if top_l(y, l) > 0) if y.sum() > 0 else 1
        y = y * min(scale, 1.0)
        for f in norms_for(m):
            assert f(y) <= 2 * f(b) + 1e-9

    @given(budgets(max_m=6), st.data())
    def test_envelope_below_covering_vectors(self, mB, data):
        m, B = mB
        b = envelope_vector(B, m)
        y = np.array(data.draw(st.lists(st.floats(0.01, 5), min_size=m, max_size=m)))
        scale = max(B[l] / top_l(y, l) for l in pos_set(m))
        y = y * max(scale, 1.0)
        for f in norms_for(m):
            assert f(y) >= f(b) / 3 - 1e-9


class TestDetEstimate:
    @given(product_vectors(max_m=4), st.floats(1.0, 3.0))
    def test_both_parts(self, Y, alpha):
        m = Y.m
        fs = norms_for(m)
        ef = expected_norms_exact(Y, fs)
        etop = dict(zip(range(1, m + 1), ef[:m]))
        # part (a): B_l = E[top_l] / alpha, made feasible for the envelope
        B, prev = {}, None
        for l in pos_set(m):
            B[l] = etop[l] / alpha if prev is None else min(max(etop[l] / alpha, B[prev]), 2 * B[prev])
            prev = l
        if all(etop[l] <= alpha * B[l] + 1e-12 for l in pos_set(m)):
            b = envelope_vector(B, m)
            for f, e in zip(fs, ef):
                assert e <= 2 * K.EXPECTED_NORM * alpha * f(b) + 1e-9
        # part (b): B_l = E[top_l] satisfies the premise with factor 1
        b = envelope_vector({l: etop[l] for l in pos_set(m)}, m)
        for f, e in zip(fs, ef):
            assert f(b) <= 6 * e + 1e-9


class TestThresholdProxy:
    @given(product_vectors(max_m=5), st.integers(1, 3), st.floats(1.0, 3.0), st.data())
    def test_part_a(self, Y, beta, alpha, data):
        m = Y.m
        levels = pos_set(m)
        # thresholds at least tau_{beta l} / alpha, kept non-increasing and positive
        raw = [tau(Y, beta * l) / alpha * data.draw(st.floats(1.0, 2.0)) for l in levels]
        t = np.maximum(np.maximum.accumulate(raw[::-1])[::-1], 1e-6)
        tp = expansion(dict(zip(levels, t)), m)
        fs = norms_for(m)
        for f, e in zip(fs, expected_norms_exact(Y, fs)):
            rhs = total_excess(Y, alpha * t[0]) + f(tp)
            assert e <= 2 * K.PROXY_LOWER * (alpha + 2) * beta * rhs + 1e-9

    @given(product_vectors(max_m=5), st.floats(0, 1), st.data())
    def test_part_b(self, Y, kappa, data):
        m = Y.m
        levels = pos_set(m)
        taus = [tau(Y, l) for l in levels]
        lo_hi = [(a, 2 * a + kappa) for a in taus]
        t = [lo + data.draw(st.floats(0, 1)) * (hi - lo) for lo, hi in lo_hi]
        # keep the sequence non-increasing and inside every window
        t = list(np.minimum.accumulate(t))
        if any(v < lo - 1e-12 for v, (lo, _) in zip(t, lo_hi)):
            return
        tp = expansion(dict(zip(levels, t)), m)
        fs = norms_for(m)
        for f, e in zip(fs, expected_norms_exact(Y, fs)):
            lhs = total_excess(Y, t[0]) + f(tp)
            assert lhs <= K.APX_STATS_LOWER * e + m * kappa + 1e-9


class TestGuesses:
    def test_loadbal_m2(self):
        gs = enumerate_guesses_loadbal(1.0, 2)
        assert len(gs) == 5
        assert [g.values for g in gs] == [(0.5, 0.5), (1.0, 1.0), (1.0, 0.5), (2.0, 2.0), (2.0, 1.0)]

    def test_loadbal_m1(self):
        assert [g.values for g in enumerate_guesses_loadbal(1.0, 1)] == [(2.0,)]

    @given(st.floats(0.01, 100), st.integers(1, 16))
    def test_loadbal_invariants(self, UB, m):
        gs = enumerate_guesses_loadbal(UB, m)
        assert len(set(g.values for g in gs)) == len(gs)
        for g in gs:
            ts = g.values
            assert all(2 * UB / m**2 <= t < 4 * UB for t in ts)
            assert all(a / b in (1.0, 2.0) for a, b in zip(ts, ts[1:]))
            assert all(math.frexp(t)[0] == 0.5 for t in ts)
        bound = (math.log2(2 * m * m) + 2) * 2 ** (len(pos_set(m)) - 1)
        assert len(gs) <= bound

    def test_tree_n2(self):
        gs = enumerate_guesses_tree(1.0, 1, n_vertices=2)
        assert [g.values[0] for g in gs] == [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]

    @given(st.floats(0.01, 10), st.integers(1, 6))
    def test_tree_invariants(self, UB, dim):
        gs = enumerate_guesses_tree(UB, dim)
        delta = UB / (dim + 1) ** 2
        M = len(enumerate_guesses_tree(UB, 1, dim + 1))
        assert len(gs) == monotone_sequence_count(M - 1, len(pos_set(dim)))
        for g in gs:
            assert all(delta / 2 < t <= 8 * UB + delta for t in g.values)

    def test_rejects_nonpositive_ub(self):
        with pytest.raises(ValueError):
            enumerate_guesses_loadbal(0.0, 2)
        with pytest.raises(ValueError):
            enumerate_guesses_tree(0.0, 2)

    @given(product_vectors(max_m=4))
    def test_canonical_loadbal_guess_is_enumerated(self, Y):
        m = Y.m
        etop = dict(zip(range(1, m + 1), expected_norms_exact(Y, [TopL(l) for l in range(1, m + 1)])))
        if etop[m] <= 0:
            return
        # Y plays the optimum and E[top_m] is a valid upper bound on it
        UB = etop[m]
        g = canonical_guess_loadbal(etop, m)
        if all(2 * UB / m**2 <= t for t in g.values):
            assert g in enumerate_guesses_loadbal(UB, m)

    @given(product_vectors(max_m=4))
    def test_canonical_tree_guess_is_enumerated(self, Y):
        m = Y.m
        UB = sum(c.mean() for c in Y.coords)
        if UB <= 0:
            return
        delta = UB / (m + 1) ** 2
        g = canonical_guess_tree({l: tau(Y, l) for l in pos_set(m)}, m, delta)
        assert g in enumerate_guesses_tree(UB, m)


class TestMonotoneSequences:
    @pytest.mark.parametrize("M, k", [(0, 1), (1, 1), (2, 2), (3, 4), (5, 2)])
    def test_count_by_brute_force(self, M, k):
        import itertools
        seqs = [s for s in itertools.product(range(M + 1), repeat=k)
                if all(a >= b for a, b in zip(s, s[1:]))]
        assert len(seqs) == monotone_sequence_count(M, k)

    @given(st.integers(1, 30), st.integers(1, 30))
    def test_bound(self, M, k):
        assert monotone_sequence_count(M, k) <= monotone_sequence_bound(M, k)
