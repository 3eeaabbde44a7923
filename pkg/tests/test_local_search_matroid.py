import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from msdiv.checks import random_matrix, random_partition_matroid
from msdiv.dispersion import dispersion
from msdiv.local_search_matroid import (convergence_bound, default_iterations, greedy_baseline, initial_basis,
                                local_search)
from msdiv.matroid import ExplicitMatroid, PartitionMatroid, UniformMatroid, is_basis
from msdiv.oracle import brute_force_msd


def smallest_ell(k):
    """Independent check: walk l upward until (1 - 1/k)^l <= 1/k."""
    ell = 0
    while (1 - 1 / k) ** ell > 1 / k:
        ell += 1
    return ell


def test_initial_basis_examples():
    assert initial_basis(UniformMatroid(4, 2)) == [0, 1]
    assert initial_basis(PartitionMatroid(3, [[0, 1], [2]], [1, 1])) == [0, 2]
    assert initial_basis(ExplicitMatroid.from_bases(4, [(1, 2)])) == [1, 2]
    assert initial_basis(UniformMatroid(3, 0)) == []


def test_default_iterations_examples():
    assert default_iterations(2) == 1
    assert default_iterations(10) == 22
    assert default_iterations(1) == 1 and default_iterations(0) == 1


def test_default_iterations_matches_walk_and_bound():
    for k in list(range(2, 400)) + [1000, 5000, 10_000]:
        ell = default_iterations(k)
        if k < 400:
            assert ell == smallest_ell(k)
        assert (1 - 1 / k) ** ell <= 1 / k < (1 - 1 / k) ** (ell - 1)
        assert ell <= math.ceil(k * math.log(k)) + 1


def test_line_instance(line):
    A, trace = local_search(line, UniformMatroid(3, 2), ell=5, start=[0, 1])
    assert A == [0, 2] and dispersion(line, A) == 3
    assert len(trace.iterations) == 1 and trace.local_optimum
    assert brute_force_msd(line, UniformMatroid(3, 2)) == ([0, 2], 3.0)


def test_already_optimal(line):
    A, trace = local_search(line, UniformMatroid(3, 2), ell=5, start=[0, 2])
    assert A == [0, 2] and trace.iterations == [] and trace.local_optimum


def test_zero_iterations(line):
    A, trace = local_search(line, UniformMatroid(3, 2), ell=0, start=[0, 1])
    assert A == [0, 1] and trace.scans == 0


def test_start_must_be_basis(line):
    with pytest.raises(ValueError):
        local_search(line, UniformMatroid(3, 2), start=[0])


def test_tie_break_lexicographic():
    # all distances equal: nothing improves, start stays
    from msdiv.distance import DistanceMatrix
    D = DistanceMatrix(np.ones((5, 5)) - np.eye(5))
    A, trace = local_search(D, UniformMatroid(5, 2), ell=3)
    assert A == [0, 1] and trace.local_optimum


def test_tie_break_prefers_smallest_pair():
    from msdiv.distance import DistanceMatrix
    # from {0,1}: swapping 0->2 or 1->3 both reach value 5; (0, 2) is smaller
    M = np.array([[0, 1, 1, 5], [1, 0, 5, 1], [1, 5, 0, 1], [5, 1, 1, 0]], dtype=float)
    A, trace = local_search(DistanceMatrix(M), UniformMatroid(4, 2), ell=1)
    assert trace.iterations[0].removed == (0,) and trace.iterations[0].added == (2,)


@given(st.integers(0, 2 ** 32 - 1))
def test_trace_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 15))
    k = int(rng.integers(2, n))
    D = random_matrix(rng, n)
    M = random_partition_matroid(rng, n, k)
    A, trace = local_search(D, M, ell=50, check=True)
    vals = [trace.start_value] + [s.value for s in trace.iterations]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert trace.end_value == pytest.approx(dispersion(D, A), rel=1e-9)
    assert is_basis(M, A)


@given(st.integers(0, 2 ** 32 - 1))
def test_guarantee_small(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 13))
    k = int(rng.integers(2, min(6, n) + 1))
    D = random_matrix(rng, n, kernel=("euclidean", "manhattan")[seed % 2])
    M = UniformMatroid(n, k) if seed % 3 else random_partition_matroid(rng, n, k)
    ell = default_iterations(k)
    A, _ = local_search(D, M, ell)
    _, opt = brute_force_msd(D, M)
    assert dispersion(D, A) >= convergence_bound(k, ell) * opt - 1e-9 * max(1, opt)
    if k >= 6:
        assert dispersion(D, A) >= (1 - 5 / k) * opt - 1e-9 * max(1, opt)


def test_cost_per_scan(rng):
    for n in (50, 100, 200):
        k = 8
        D = random_matrix(rng, n, kernel="euclidean")
        _, trace = local_search(D, UniformMatroid(n, k), ell=default_iterations(k))
        assert trace.distance_evals <= 3 * n * k * (trace.scans + 1)
        assert trace.oracle_calls <= n * k * (trace.scans + 1) + n


def test_greedy_examples(line):
    assert greedy_baseline(line, UniformMatroid(3, 2)) == [0, 2]
    assert greedy_baseline(line, UniformMatroid(3, 1)) == [0]


def test_greedy_not_better_than_local_search(rng):
    wins = 0
    for _ in range(100):
        n = int(rng.integers(6, 13))
        k = int(rng.integers(2, 6))
        D = random_matrix(rng, n, kernel="euclidean")
        M = UniformMatroid(n, k)
        g = dispersion(D, greedy_baseline(D, M))
        A, _ = local_search(D, M, ell=100)
        wins += dispersion(D, A) >= g - 1e-9
    # statistical check, not a guarantee
    assert wins >= 80
