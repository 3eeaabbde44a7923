"""Random instance generators and the invariant suites run by ``msdiv verify``.

Each suite takes a numpy Generator and a trial count and returns a
:class:`SuiteResult`; the first failing instance is kept in JSON-ready form
so it can be replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from .dispersion import cross_sum, dispersion, make_state, swap_value
from .distance import KERNELS, DistanceMatrix, PointSet, build_distance_matrix, verify_negative_type
from .local_search_intersection import intersection_bound, intersection_local_search
from .local_search_matroid import convergence_bound, default_iterations, local_search
from .matroid import (IntersectionConstraint, PartitionMatroid, UniformMatroid, brualdi_bijection,
                      greedy_basis, is_maximal_common)
from .oracle import brute_force_combined, brute_force_intersection, brute_force_msd
from .submodular import (CoverageFn, ExplicitFn, LinearFn, SubmodularError, combined_bound,
                         combined_local_search, decompose, objective)

REL = 1e-9


# -- generators -----------------------------------------------------------------

def random_points(rng, n: int, dim: int, kernel: str) -> np.ndarray:
    if kernel == "jaccard":
        pts = rng.random((n, dim))
        pts[rng.random((n, dim)) < 0.3] = 0.0
        return pts
    if kernel == "cosine":
        pts = rng.normal(size=(n, dim))
        pts[np.linalg.norm(pts, axis=1) == 0, 0] = 1.0
        return pts
    return rng.normal(size=(n, dim))


def random_matrix(rng, n: int, dim: int = None, kernel: str = None) -> DistanceMatrix:
    kernel = kernel or KERNELS[rng.integers(len(KERNELS))]
    dim = dim or int(rng.integers(1, 6))
    return build_distance_matrix(PointSet(random_points(rng, n, dim, kernel), tuple(range(n))), kernel)


def random_subset(rng, n: int, size: int) -> List[int]:
    return sorted(int(x) for x in rng.choice(n, size=size, replace=False))


def random_partition_matroid(rng, n: int, k: int) -> PartitionMatroid:
    """Random partition of 0..n-1 into blocks whose capacities sum to rank k."""
    nblocks = int(rng.integers(1, min(k, n) + 1))
    labels = rng.permutation(np.arange(n) % nblocks)
    blocks = [sorted(int(x) for x in np.flatnonzero(labels == j)) for j in range(nblocks)]
    caps = [1] * nblocks
    remaining = k - nblocks
    while remaining > 0:
        room = [j for j in range(nblocks) if caps[j] < len(blocks[j])]
        j = room[int(rng.integers(len(room)))]
        caps[j] += 1
        remaining -= 1
    return PartitionMatroid(n, blocks, caps)


def random_matching_constraint(rng, n: int, left: int, right: int) -> IntersectionConstraint:
    """Ground set = n random edges of a left x right bipartite graph."""
    pairs = [(i, j) for i in range(left) for j in range(right)]
    chosen = rng.choice(len(pairs), size=min(n, len(pairs)), replace=False)
    edges = [pairs[int(c)] for c in chosen]
    m = len(edges)
    by_left = [[e for e in range(m) if edges[e][0] == i] for i in range(left)]
    by_right = [[e for e in range(m) if edges[e][1] == j] for j in range(right)]
    m1 = PartitionMatroid(m, [b for b in by_left if b], [1] * sum(1 for b in by_left if b))
    m2 = PartitionMatroid(m, [b for b in by_right if b], [1] * sum(1 for b in by_right if b))
    return IntersectionConstraint(m1, m2)


def random_submodular(rng, n: int) -> ExplicitFn:
    """Tabulated mix of weighted coverage, concave-of-modular and linear parts."""
    ntypes = int(rng.integers(1, 2 * n + 1))
    types = [[x for x in range(n) if rng.random() < 0.35] for _ in range(ntypes)]
    cov = CoverageFn(n, types, list(rng.random(ntypes)))
    w = rng.random(n)
    lin = rng.random(n) * rng.integers(0, 2)
    alpha = float(rng.random())
    table = []
    for m in range(1 << n):
        members = [i for i in range(n) if m >> i & 1]
        s = float(w[members].sum()) if members else 0.0
        l = float(lin[members].sum()) if members else 0.0
        table.append(cov.value(members) + alpha * math.sqrt(s) + l)
    return ExplicitFn(n, table)


# -- suites -------------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    passed: int = 0
    skipped: int = 0
    failure: Optional[dict] = None
    worst_slack: float = math.inf

    @property
    def ok(self) -> bool:
        return self.failure is None and self.passed + self.skipped == self.trials

    def record(self, ok: bool, slack: float, instance: Callable[[], dict]):
        self.trials += 1
        self.worst_slack = min(self.worst_slack, slack)
        if ok:
            self.passed += 1
        elif self.failure is None:
            self.failure = instance()


def _dump(D) -> list:
    return [[float(v) for v in row] for row in (D.entries if hasattr(D, "entries") else D)]


def suite_negative_type_kernels(rng, trials: int) -> SuiteResult:
    res = SuiteResult("negative_type_kernels")
    for t in range(trials):
        kernel = KERNELS[t % len(KERNELS)]
        n = int(rng.integers(1, 21))
        D = random_matrix(rng, n, kernel=kernel)
        out = verify_negative_type(D, 1e-9)
        res.record(out.holds, -out.max_eigenvalue, lambda: {"kernel": kernel, "matrix": _dump(D)})
    return res


def eq3_slack(D, A, B) -> float:
    """d(A,B) - (|B|/|A|) d(A) - (|A|/|B|) d(B), scaled by max(1, d(A,B))."""
    dab = cross_sum(D, A, B)
    lhs = len(B) / len(A) * dispersion(D, A) + len(A) / len(B) * dispersion(D, B)
    return (dab - lhs) / max(1.0, abs(dab))


def suite_set_inequality(rng, trials: int, D: Optional[DistanceMatrix] = None) -> SuiteResult:
    res = SuiteResult("set_inequality")
    fixed = D
    if fixed is not None:
        witness = verify_negative_type(fixed).witness
        if witness is not None:
            A = [int(i) for i in np.flatnonzero(witness > 1e-12)]
            B = [int(i) for i in np.flatnonzero(witness < -1e-12)]
            s = eq3_slack(fixed, A, B)
            res.record(s >= -REL, s, lambda: {"matrix": _dump(fixed), "A": A, "B": B})
    for _ in range(trials - res.trials):
        D = fixed if fixed is not None else random_matrix(rng, int(rng.integers(1, 21)))
        n = D.n
        A = random_subset(rng, n, int(rng.integers(1, n + 1)))
        B = random_subset(rng, n, int(rng.integers(1, n + 1)))
        s = eq3_slack(D, A, B)
        res.record(s >= -REL, s, lambda: {"matrix": _dump(D), "A": A, "B": B})
    return res


def suite_cheap_matching(rng, trials: int) -> SuiteResult:
    res = SuiteResult("cheap_matching")
    for _ in range(trials):
        n = int(rng.integers(2, 21))
        D = random_matrix(rng, n)
        k = int(rng.integers(1, n + 1))
        A = random_subset(rng, n, k)
        B = [int(x) for x in rng.permutation(random_subset(rng, n, k))]
        pairs = sum(D.entries[a, b] for a, b in zip(A, B))
        bound = 2 / k * cross_sum(D, A, B)
        s = (bound - pairs) / max(1.0, bound)
        res.record(s >= -REL, s, lambda: {"matrix": _dump(D), "A": A, "pi": dict(zip(A, B))})
    return res


def suite_swap_identity(rng, trials: int) -> SuiteResult:
    res = SuiteResult("swap_identity")
    for _ in range(trials):
        n = int(rng.integers(2, 21))
        D = random_matrix(rng, n)
        k = int(rng.integers(1, n))
        A = random_subset(rng, n, k)
        a = A[int(rng.integers(k))]
        outside = [x for x in range(n) if x not in A]
        b = outside[int(rng.integers(len(outside)))]
        state = make_state(D, A)
        fast = swap_value(state, a, b, D)
        slow = dispersion(D, [x for x in A if x != a] + [b])
        err = abs(fast - slow) / max(1.0, abs(slow))
        res.record(err <= REL, -err, lambda: {"matrix": _dump(D), "A": A, "a": a, "b": b})
    return res


def suite_decomposition(rng, trials: int) -> SuiteResult:
    res = SuiteResult("decomposition")
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        f = random_submodular(rng, n)
        try:
            dec = decompose(f, verify=True)
            k = int(rng.integers(1, n + 1))
            M = random_partition_matroid(rng, n, k)
            A = greedy_basis(M, order=[int(x) for x in rng.permutation(n)])
            B = greedy_basis(M, order=[int(x) for x in rng.permutation(n)])
            pi = brualdi_bijection(M, A, B)
            lA = dec.linear(A)
            rhs = dec.linear(B) + sum(lA - dec.linear([x for x in A if x != a] + [pi[a]]) for a in A)
            err = abs(lA - rhs) / max(1.0, abs(lA))
            ok = err <= REL
        except SubmodularError:
            ok, err = False, math.inf
        res.record(ok, -err, lambda: {"table": [float(v) for v in f.table]})
    return res


def suite_matroid_guarantee(rng, trials: int) -> SuiteResult:
    res = SuiteResult("matroid_guarantee")
    for t in range(trials):
        n = int(rng.integers(4, 13))
        k = int(rng.integers(2, min(6, n) + 1))
        kernel = ("euclidean", "manhattan")[t % 2]
        D = random_matrix(rng, n, kernel=kernel)
        M = UniformMatroid(n, k) if t % 4 < 2 else random_partition_matroid(rng, n, k)
        ell = default_iterations(k)
        A, _ = local_search(D, M, ell)
        _, opt = brute_force_msd(D, M)
        got = dispersion(D, A)
        ratio = got / opt if opt > 0 else 1.0
        need = convergence_bound(k, ell)
        if k >= 6:
            need = max(need, 1 - 5 / k)
        ok = ratio >= need - REL and ratio <= 1 + REL
        res.record(ok, ratio - need, lambda: {"matrix": _dump(D), "k": k, "constraint": M.to_config()})
    return res


def suite_intersection_guarantee(rng, trials: int, p: int = 2) -> SuiteResult:
    res = SuiteResult("intersection_guarantee")
    for _ in range(trials):
        n = int(rng.integers(3, 11))
        c = random_matching_constraint(rng, n, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        D = random_matrix(rng, c.n, kernel="euclidean")
        k = c.k_common
        ell = k + math.ceil(60 * k * math.log(6))
        A, trace = intersection_local_search(D, c, p, ell)
        ok = all(c.is_independent(s.members) and is_maximal_common(c, s.members) for s in trace.iterations)
        ok = ok and is_maximal_common(c, A)
        _, opt = brute_force_intersection(D, c)
        got = dispersion(D, A)
        ratio = got / opt if opt > 0 else 1.0
        bound = intersection_bound(p, k, ell)
        ok = ok and ratio <= 1 + REL
        if bound is not None and bound > 0:
            ok = ok and ratio >= bound - REL
        res.record(ok, ratio - (bound or 0.0), lambda: {"matrix": _dump(D), "constraint": c.to_config()})
    return res


def suite_combined_guarantee(rng, trials: int) -> SuiteResult:
    res = SuiteResult("combined_guarantee")
    for t in range(trials):
        n = int(rng.integers(4, 13))
        k = int(rng.integers(3, min(6, n) + 1))
        D = random_matrix(rng, n, kernel=("euclidean", "manhattan")[t % 2])
        M = UniformMatroid(n, k) if t % 4 < 2 else random_partition_matroid(rng, n, k)
        f = LinearFn(rng.random(n) * float(rng.choice([0.1, 1.0, 10.0])))
        A, _ = combined_local_search(D, M, f, "linear_exact")
        _, gopt, lam_d, _ = brute_force_combined(D, M, f)
        g = objective(D, f, A)[2]
        need = combined_bound(k, 0.0, lam_d) * gopt
        s = (g - need) / max(1.0, gopt)
        res.record(s >= -REL, s, lambda: {"matrix": _dump(D), "weights": [float(w) for w in f.weights],
                                          "constraint": M.to_config()})
    return res


CHEAP = ("negative_type_kernels", "set_inequality", "cheap_matching", "swap_identity")
SUITES: Dict[str, Callable] = {
    "negative_type_kernels": suite_negative_type_kernels,
    "set_inequality": suite_set_inequality,
    "cheap_matching": suite_cheap_matching,
    "swap_identity": suite_swap_identity,
    "decomposition": suite_decomposition,
    "matroid_guarantee": suite_matroid_guarantee,
    "intersection_guarantee": suite_intersection_guarantee,
    "combined_guarantee": suite_combined_guarantee,
}
