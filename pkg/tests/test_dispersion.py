import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.stateful import RuleBasedStateMachine, initialize, invariant, rule

from msdiv.checks import eq3_slack, random_matrix, random_subset
from msdiv.dispersion import (OpCounter, apply_swap, check_state, cross_sum, dispersion, make_state,
                              swap_value)
from msdiv.distance import DistanceMatrix

seeds = st.integers(0, 2 ** 32 - 1)


def test_dispersion_examples(line):
    assert dispersion(line, [0, 1, 2]) == 6
    assert dispersion(line, [1]) == 0 and dispersion(line, []) == 0
    tri = DistanceMatrix(np.ones((3, 3)) - np.eye(3))
    assert dispersion(tri, [0, 1, 2]) == 3


def test_cross_sum_examples(line):
    # points {0,1} x {1,3}: 1 + 3 + 0 + 2
    assert cross_sum(line, [0, 1], [1, 2]) == 6
    assert cross_sum(line, [0, 2], []) == 0
    assert cross_sum(line, [0, 1, 2], [0, 1, 2]) == 2 * dispersion(line, [0, 1, 2])


def test_swap_value_examples(line):
    s = make_state(line, [0, 1])
    assert swap_value(s, 1, 2, line) == 3 == dispersion(line, [0, 2])
    assert swap_value(s, 1, 1, line) == s.disp
    with pytest.raises(ValueError):
        swap_value(s, 2, 1, line)


def test_apply_swap_identity(line):
    s = make_state(line, [0, 1])
    t = apply_swap(s, 0, 0, line)
    assert (t.members, t.disp, t.row) == (s.members, s.disp, s.row)


def test_apply_swap_counts_are_linear_in_k(rng):
    D = random_matrix(rng, 30, kernel="euclidean")
    for k in (3, 6, 12):
        s = make_state(D, range(k))
        cnt = OpCounter()
        apply_swap(s, 0, 29, D, cnt)
        assert cnt.distance_evals <= 4 * k


@given(seeds)
def test_swap_value_equals_recompute(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 16))
    D = random_matrix(rng, n)
    A = random_subset(rng, n, int(rng.integers(1, n)))
    s = make_state(D, A)
    for a in A:
        for b in range(n):
            if b in A:
                continue
            slow = dispersion(D, [x for x in A if x != a] + [b])
            assert swap_value(s, a, b, D) == pytest.approx(slow, rel=1e-9, abs=1e-9)


@given(seeds)
def test_set_inequality(seed):
    rng = np.random.default_rng(seed)
    D = random_matrix(rng, int(rng.integers(1, 21)))
    A = random_subset(rng, D.n, int(rng.integers(1, D.n + 1)))
    B = random_subset(rng, D.n, int(rng.integers(1, D.n + 1)))
    assert eq3_slack(D, A, B) >= -1e-9


@given(seeds)
def test_cheap_matching_any_bijection(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 21))
    D = random_matrix(rng, n)
    k = int(rng.integers(1, n + 1))
    A = random_subset(rng, n, k)
    B = list(rng.permutation(random_subset(rng, n, k)))
    lhs = sum(D.entries[a, b] for a, b in zip(A, B))
    rhs = 2 / k * cross_sum(D, A, B)
    assert lhs <= rhs + 1e-9 * max(1.0, rhs)


def test_set_inequality_fails_off_negative_type():
    M = np.ones((4, 4))
    np.fill_diagonal(M, 0)
    M[0, 1] = M[1, 0] = M[2, 3] = M[3, 2] = 3
    assert eq3_slack(DistanceMatrix(M), [0, 1], [2, 3]) < 0


class SwapMachine(RuleBasedStateMachine):
    @initialize(seed=seeds, k=st.integers(1, 8))
    def setup(self, seed, k):
        self.rng = np.random.default_rng(seed)
        self.D = random_matrix(self.rng, 12)
        self.state = make_state(self.D, random_subset(self.rng, 12, k))

    @rule(data=st.data())
    def swap(self, data):
        a = data.draw(st.sampled_from(self.state.members))
        outside = [x for x in range(12) if x not in self.state.members]
        b = data.draw(st.sampled_from(outside + [a]))
        expected = dispersion(self.D, [x for x in self.state.members if x != a] + [b])
        self.state = apply_swap(self.state, a, b, self.D)
        assert self.state.disp == pytest.approx(expected, rel=1e-9, abs=1e-12)

    @invariant()
    def caches_consistent(self):
        if hasattr(self, "state"):
            check_state(self.D, self.state)
            assert math.isclose(sum(self.state.row.values()), 2 * self.state.disp, rel_tol=1e-9, abs_tol=1e-12)


TestSwapMachine = SwapMachine.TestCase
TestSwapMachine.settings = settings(max_examples=40, stateful_step_count=60, deadline=None)
