import math
from math import comb

import pytest

from msdiv.checks import random_matching_constraint, random_matrix
from msdiv.dispersion import dispersion
from msdiv.local_search_intersection import (enumerate_exchange_sets, exchange_count, intersection_bound,
                                intersection_local_search, ptas_schedule)
from msdiv.matroid import IntersectionConstraint, UniformMatroid, is_maximal_common
from msdiv.oracle import brute_force_intersection


def test_exchange_enumeration_count():
    pairs = list(enumerate_exchange_sets([0, 1], 2, 4))
    assert len(pairs) == 12 == exchange_count(2, 4, 2)
    assert pairs[0] == ((), ())
    assert ((0,), ()) in pairs
    assert len(set(pairs)) == len(pairs)
    for size_a, n, p in [(3, 7, 2), (4, 9, 3), (0, 5, 2)]:
        got = sum(1 for _ in enumerate_exchange_sets(range(size_a), p, n))
        assert got == sum(comb(size_a, s) for s in range(p + 1)) * sum(comb(n - size_a, t) for t in range(p))


def test_exchange_enumeration_is_deterministic():
    assert list(enumerate_exchange_sets([3, 1], 2, 5)) == list(enumerate_exchange_sets([1, 3], 2, 5))


def test_line_two_uniform(line):
    c = IntersectionConstraint(UniformMatroid(3, 2), UniformMatroid(3, 2))
    A, trace = intersection_local_search(line, c, p=2, ell=10)
    assert A == [0, 2]
    assert brute_force_intersection(line, c) == ([0, 2], 3.0)


def test_local_optimum_unchanged(line):
    c = IntersectionConstraint(UniformMatroid(3, 2), UniformMatroid(3, 2))
    A, trace = intersection_local_search(line, c, p=2, ell=10, start=[0, 2])
    assert A == [0, 2] and trace.iterations == [] and trace.local_optimum


def test_small_k_warning(line):
    c = IntersectionConstraint(UniformMatroid(3, 2), UniformMatroid(3, 2))
    _, trace = intersection_local_search(line, c, p=2, ell=1)
    assert trace.warnings and "8p" in trace.warnings[0]


def test_p_must_be_at_least_two(line):
    c = IntersectionConstraint(UniformMatroid(3, 2), UniformMatroid(3, 2))
    with pytest.raises(ValueError):
        intersection_local_search(line, c, p=1)


def test_random_matching_runs(rng):
    for _ in range(40):
        n = int(rng.integers(3, 11))
        c = random_matching_constraint(rng, n, 3, 4)
        D = random_matrix(rng, c.n, kernel="euclidean")
        A, trace = intersection_local_search(D, c, 2, check=True)
        assert is_maximal_common(c, A) and 2 * len(A) >= c.k_common
        vals = [trace.start_value] + [s.value for s in trace.iterations]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        _, opt = brute_force_intersection(D, c)
        assert dispersion(D, A) <= opt * (1 + 1e-9)


def test_bound_preconditions():
    assert intersection_bound(2, 100, 10_000) is None  # beta = -1 - 48/k < 0
    assert intersection_bound(25, 100, 10_000) is None  # 8p > k
    b = intersection_bound(25, 100_000, 100_000 + 10**7)
    beta = 1 - 2 / 24 - 24 * 25 / 100_000
    assert b == pytest.approx(beta ** 2 - 2 * (1 - 1 / 6e6) ** 10**7)


def test_schedule_examples():
    s = ptas_schedule(0.5, 10)
    assert s.mode == "enumerate" and s.p == 25 and s.threshold == 288 * 25
    assert ptas_schedule(0.5, 10_000).mode == "search"
    with pytest.raises(ValueError):
        ptas_schedule(1.0, 10)
    with pytest.raises(ValueError):
        ptas_schedule(0.0, 10)


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.3, 0.5, 0.9])
@pytest.mark.parametrize("k", [1, 10, 100, 1000, 20_000])
def test_schedule_conditions(eps, k):
    s = ptas_schedule(eps, k)
    assert s.ell >= k
    assert 2 * (1 - 1 / (60 * k)) ** (s.ell - k) <= eps / 3
    if s.ell > k:
        assert 2 * (1 - 1 / (60 * k)) ** (s.ell - k - 1) > eps / 3
    # the e^-x bound is sufficient, so the smallest l never exceeds it
    assert s.ell - k <= math.ceil(60 * k * math.log(6 / eps))
