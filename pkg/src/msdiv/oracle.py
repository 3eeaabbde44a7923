"""Exhaustive solvers for small instances."""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import List, Tuple

import numpy as np

from .matroid import IntersectionConstraint, Matroid

ENUM_LIMIT = 10 ** 6


class EnumerationTooLarge(ValueError):
    pass


def _dispersions(M: np.ndarray, combos: np.ndarray) -> np.ndarray:
    if combos.shape[1] < 2:
        return np.zeros(combos.shape[0])
    sub = M[combos[:, :, None], combos[:, None, :]]
    return sub.sum(axis=(1, 2)) / 2.0


def _chunks(n: int, r: int, size: int = 20000):
    it = combinations(range(n), r)
    while True:
        block = list(_take(it, size))
        if not block:
            return
        yield np.array(block, dtype=int).reshape(len(block), r)


def _take(it, size):
    for _ in range(size):
        try:
            yield next(it)
        except StopIteration:
            return


def bases(M: Matroid) -> List[Tuple[int, ...]]:
    """All bases in lexicographic order (guarded)."""
    n, k = M.n, M.rank
    total = comb(n, k)
    if total > ENUM_LIMIT:
        raise EnumerationTooLarge(f"C({n}, {k}) = {total} candidate sets exceeds {ENUM_LIMIT}")
    return [c for c in combinations(range(n), k) if M.is_independent(c)]


def brute_force_msd(D, M: Matroid) -> Tuple[List[int], float]:
    """Exact maximum of d over the bases of M; ties go to the first basis in lexicographic order."""
    entries = D.entries if hasattr(D, "entries") else D
    n, k = M.n, M.rank
    total = comb(n, k)
    if total > ENUM_LIMIT:
        raise EnumerationTooLarge(f"C({n}, {k}) = {total} candidate sets exceeds {ENUM_LIMIT}")
    best, best_val = None, -np.inf
    for block in _chunks(n, k):
        ok = np.array([M.is_independent(row) for row in block], dtype=bool)
        if not ok.any():
            continue
        block = block[ok]
        vals = _dispersions(entries, block)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best = float(vals[i]), [int(x) for x in block[i]]
    return best, best_val


def common_independent_sets(c: IntersectionConstraint) -> List[Tuple[int, ...]]:
    n = c.n
    k = c.k_common
    total = sum(comb(n, r) for r in range(k + 1))
    if total > ENUM_LIMIT:
        raise EnumerationTooLarge(f"{total} candidate sets exceeds {ENUM_LIMIT}")
    return [s for r in range(k + 1) for s in combinations(range(n), r) if c.is_independent(s)]


def brute_force_intersection(D, c: IntersectionConstraint) -> Tuple[List[int], float]:
    """Exact maximum of d over all common independent sets.

    Candidates are ordered by size, then lexicographically; the first
    maximizer wins.
    """
    entries = D.entries if hasattr(D, "entries") else D
    n, k = c.n, c.k_common
    total = sum(comb(n, r) for r in range(k + 1))
    if total > ENUM_LIMIT:
        raise EnumerationTooLarge(f"{total} candidate sets exceeds {ENUM_LIMIT}")
    best, best_val = [], 0.0
    for r in range(2, k + 1):
        for block in _chunks(n, r):
            ok = np.array([c.is_independent(row) for row in block], dtype=bool)
            if not ok.any():
                continue
            block = block[ok]
            vals = _dispersions(entries, block)
            i = int(np.argmax(vals))
            if vals[i] > best_val:
                best_val, best = float(vals[i]), [int(x) for x in block[i]]
    if not best and k > 0:
        # every candidate has dispersion 0: report the first nonempty one
        for r in range(1, k + 1):
            for s in combinations(range(n), r):
                if c.is_independent(s):
                    return list(s), 0.0
    return best, best_val


def brute_force_combined(D, M: Matroid, f) -> Tuple[List[int], float, float, float]:
    """Exact maximum of g = d + f over bases, with lambda_d and lambda_f.

    When g(OPT) = 0 the split is reported as lambda_d = 1, lambda_f = 0.
    """
    entries = D.entries if hasattr(D, "entries") else D
    n, k = M.n, M.rank
    total = comb(n, k)
    if total > ENUM_LIMIT:
        raise EnumerationTooLarge(f"C({n}, {k}) = {total} candidate sets exceeds {ENUM_LIMIT}")
    weights = getattr(f, "weights", None) if getattr(f, "kind", "") == "linear" else None
    best, best_g, best_d = None, -np.inf, 0.0
    for block in _chunks(n, k):
        ok = np.array([M.is_independent(row) for row in block], dtype=bool)
        if not ok.any():
            continue
        block = block[ok]
        dv = _dispersions(entries, block)
        if weights is not None:
            fv = weights[block].sum(axis=1) if k else np.zeros(len(block))
        else:
            fv = np.array([f.value(row) for row in block])
        g = dv + fv
        i = int(np.argmax(g))
        if g[i] > best_g:
            best_g, best_d, best = float(g[i]), float(dv[i]), [int(x) for x in block[i]]
    if best_g > 0:
        lam_d = best_d / best_g
        lam_f = 1.0 - lam_d
    else:
        lam_d, lam_f = 1.0, 0.0
    return best, best_g, lam_d, lam_f
