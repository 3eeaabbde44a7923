"""p-exchange local search under the intersection of two matroids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

from .dispersion import dispersion
from .local_search_matroid import RunTrace, Step, strict_threshold
from .matroid import IntersectionConstraint, augment_to_maximal, is_maximal_common


def enumerate_exchange_sets(A: Sequence[int], p: int, n: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """All (S, T) with S a subset of A, |S| <= p, T outside A, |T| <= p - 1.

    Order: S by size then lexicographically; for each S, T likewise.
    """
    inside = sorted(A)
    outside = [x for x in range(n) if x not in set(inside)]
    t_choices = [T for t in range(p) for T in combinations(outside, t)]
    for s in range(p + 1):
        for S in combinations(inside, s):
            for T in t_choices:
                yield S, T


def exchange_count(size_a: int, n: int, p: int) -> int:
    return sum(comb(size_a, s) for s in range(p + 1)) * sum(comb(n - size_a, t) for t in range(p))


def intersection_bound(p: int, k: int, ell: int) -> Optional[float]:
    """Guaranteed fraction of d(OPT) after ell >= k iterations.

    None when the preconditions 8p <= k, ell >= k and
    1 - 2/(p-1) - 24p/k > 0 are not all met.
    """
    if p < 2 or k <= 0 or 8 * p > k or ell < k:
        return None
    beta = 1 - 2 / (p - 1) - 24 * p / k
    if beta <= 0:
        return None
    return beta ** 2 - 2 * (1 - 1 / (60 * k)) ** (ell - k)


def intersection_local_search(D, c: IntersectionConstraint, p: int = 2, ell: Optional[int] = None,
                              start: Optional[Sequence[int]] = None,
                              check: bool = False) -> Tuple[List[int], RunTrace]:
    """Best-improvement (S, T) exchanges followed by greedy augmentation.

    Starts from the maximal augmentation of ``start`` (default: of the
    empty set). ``ell`` defaults to ``k + ceil(60 k ln 6)``.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    M_ = D.entries if hasattr(D, "entries") else D
    n = M_.shape[0]
    trace = RunTrace()
    counter = trace.counter
    k = c.k_common
    if 8 * p > k:
        trace.warnings.append(f"8p = {8 * p} exceeds k = {k}; convergence guarantee does not apply")
    if ell is None:
        ell = k + math.ceil(60 * max(k, 1) * math.log(6))
    A = augment_to_maximal(c, start or [], counter)
    disp = dispersion(M_, A)
    counter.distance_evals += len(A) ** 2
    trace.start_value = disp
    for _ in range(ell):
        trace.scans += 1
        threshold = strict_threshold(disp)
        best = None
        best_val = threshold
        Aset = set(A)
        for S, T in enumerate_exchange_sets(A, p, n):
            if not T:
                # pure deletions never raise a nonnegative dispersion
                continue
            cand = (Aset - set(S)) | set(T)
            counter.oracle_calls += 2
            if not c.is_independent(cand):
                continue
            val = dispersion(M_, cand)
            counter.distance_evals += len(cand) ** 2
            if val > best_val:
                best_val, best = val, (S, T, cand)
        if best is None:
            trace.local_optimum = True
            break
        S, T, cand = best
        A = augment_to_maximal(c, cand, counter)
        disp = dispersion(M_, A)
        if check:
            assert c.is_independent(A) and is_maximal_common(c, A), A
        trace.iterations.append(Step(tuple(S), tuple(T), disp, tuple(A)))
    trace.end_value = disp
    return A, trace


@dataclass(frozen=True)
class Schedule:
    mode: str
    p: int
    ell: int
    threshold: float


def _exact(eps: float) -> Fraction:
    # decimal reading of eps so that e.g. 12/0.3 is exactly 40
    return Fraction(repr(eps))


def ptas_schedule(epsilon: float, k_common: int) -> Schedule:
    """Parameters that make the exchange search a (1 - epsilon)-approximation.

    ``mode`` is ``"enumerate"`` when k is below the threshold where
    exhaustive search is the intended route; p and ell are reported in
    both modes.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if k_common < 0:
        raise ValueError("k_common must be nonnegative")
    e = _exact(epsilon)
    p = math.ceil(Fraction(12) / e) + 1
    threshold = Fraction(144) / e * p
    k = k_common
    ell = k
    if k > 0:
        target = epsilon / 3
        q = 1 - 1 / (60 * k)
        extra = max(0, math.ceil(math.log(target / 2) / math.log(q)))
        while extra > 0 and 2 * q ** (extra - 1) <= target:
            extra -= 1
        while 2 * q ** extra > target:
            extra += 1
        ell = k + extra
    mode = "enumerate" if k < threshold else "search"
    return Schedule(mode, p, ell, float(threshold))
