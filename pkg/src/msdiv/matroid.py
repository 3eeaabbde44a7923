"""Matroid independence oracles and matroid-intersection routines.

Elements are integer indices ``0..n-1``. Every routine that consults an
oracle accepts an optional :class:`~msdiv.dispersion.OpCounter` and bills
one unit per independence query.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

import numpy as np

from .dispersion import OpCounter


class MatroidError(ValueError):
    pass


def _tick(counter: Optional[OpCounter], calls: int = 1) -> None:
    if counter is not None:
        counter.oracle_calls += calls


class Matroid:
    """Base class: subclasses implement :meth:`is_independent`."""

    kind = "abstract"

    def __init__(self, n: int):
        if n < 0:
            raise MatroidError("ground set size must be nonnegative")
        self.n = n
        self._rank: Optional[int] = None

    def is_independent(self, A: Iterable[int]) -> bool:
        raise NotImplementedError

    def exchange_mask(self, A: Sequence[int], a: int) -> np.ndarray:
        """Boolean mask over the ground set: entry b is True iff A-a+b is independent.

        Entries for b in A-a are meaningless and set False.
        """
        base = set(A)
        base.discard(a)
        mask = np.zeros(self.n, dtype=bool)
        for b in range(self.n):
            if b not in base:
                mask[b] = self.is_independent(base | {b})
        return mask

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = len(greedy_basis(self))
        return self._rank

    def to_config(self, ids: Optional[Sequence[str]] = None) -> dict:
        return {"kind": self.kind}


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, n: int, k: int):
        super().__init__(n)
        if k < 0:
            raise MatroidError("uniform rank must be nonnegative")
        self.k = min(k, n)
        self._rank = self.k

    def is_independent(self, A) -> bool:
        A = set(A)
        return len(A) <= self.k and all(0 <= x < self.n for x in A)

    def exchange_mask(self, A, a):
        mask = np.ones(self.n, dtype=bool)
        rest = [x for x in A if x != a]
        mask[rest] = False
        if len(rest) + 1 > self.k:
            mask[:] = False
        return mask

    def to_config(self, ids=None):
        return {"kind": "uniform", "k": self.k}


class PartitionMatroid(Matroid):
    """At most ``capacities[j]`` elements from ``blocks[j]``.

    Elements that belong to no block can never be selected.
    """

    kind = "partition"

    def __init__(self, n: int, blocks: Sequence[Iterable[int]], capacities: Sequence[int]):
        super().__init__(n)
        blocks = [sorted(set(b)) for b in blocks]
        if len(blocks) != len(capacities):
            raise MatroidError(f"{len(blocks)} blocks but {len(capacities)} capacities")
        self.block_of = np.full(n, -1, dtype=int)
        for j, block in enumerate(blocks):
            for x in block:
                if not 0 <= x < n:
                    raise MatroidError(f"element {x} outside ground set of size {n}")
                if self.block_of[x] != -1:
                    raise MatroidError(f"element {x} appears in more than one block")
                self.block_of[x] = j
        if any(c < 0 for c in capacities):
            raise MatroidError("capacities must be nonnegative")
        self.blocks = blocks
        self.capacities = np.array(capacities, dtype=int)
        self._rank = int(sum(min(c, len(b)) for b, c in zip(blocks, capacities)))

    def _counts(self, A) -> np.ndarray:
        idx = self.block_of[list(A)] if len(A) else np.array([], dtype=int)
        if np.any(idx < 0):
            return None
        return np.bincount(idx, minlength=len(self.blocks))

    def is_independent(self, A) -> bool:
        A = set(A)
        if any(not 0 <= x < self.n for x in A):
            return False
        counts = self._counts(A)
        return counts is not None and bool(np.all(counts <= self.capacities))

    def exchange_mask(self, A, a):
        rest = [x for x in A if x != a]
        counts = self._counts(rest)
        mask = np.zeros(self.n, dtype=bool)
        if counts is None or np.any(counts > self.capacities):
            return mask
        free = counts < self.capacities
        ok = self.block_of >= 0
        mask[ok] = free[self.block_of[ok]]
        mask[rest] = False
        return mask

    def to_config(self, ids=None):
        name = (lambda x: ids[x]) if ids is not None else (lambda x: x)
        return {"kind": "partition",
                "blocks": [[name(x) for x in b] for b in self.blocks],
                "capacities": [int(c) for c in self.capacities]}


class ExplicitMatroid(Matroid):
    """A matroid given by its full family of independent sets.

    Construction verifies the matroid axioms exhaustively, so this is only
    meant for small ground sets.
    """

    kind = "explicit"

    def __init__(self, n: int, independent: Iterable[Iterable[int]]):
        super().__init__(n)
        family = {frozenset(s) for s in independent}
        if frozenset() not in family:
            raise MatroidError("the empty set must be independent")
        for s in family:
            if any(not 0 <= x < n for x in s):
                raise MatroidError(f"set {sorted(s)} leaves the ground set")
            for x in s:
                if s - {x} not in family:
                    raise MatroidError(f"not downward closed: {sorted(s)} in family but {sorted(s - {x})} missing")
        members = sorted(family, key=lambda s: (len(s), sorted(s)))
        for big in members:
            for small in members:
                if len(big) > len(small) and not any(small | {x} in family for x in big - small):
                    raise MatroidError(f"exchange axiom fails for {sorted(big)} and {sorted(small)}")
        self.family: FrozenSet[FrozenSet[int]] = frozenset(family)
        self._rank = max(len(s) for s in family)

    @classmethod
    def from_bases(cls, n: int, bases: Iterable[Iterable[int]]) -> "ExplicitMatroid":
        family = set()
        for B in bases:
            B = sorted(set(B))
            for r in range(len(B) + 1):
                family.update(frozenset(c) for c in combinations(B, r))
        return cls(n, family)

    def is_independent(self, A) -> bool:
        return frozenset(A) in self.family


class FreeMatroid(UniformMatroid):
    """Every subset is independent."""

    def __init__(self, n: int):
        super().__init__(n, n)


# -- basic queries ---------------------------------------------------------

def greedy_basis(M: Matroid, counter: Optional[OpCounter] = None, order: Optional[Iterable[int]] = None) -> List[int]:
    A: List[int] = []
    for x in (range(M.n) if order is None else order):
        _tick(counter)
        if M.is_independent(A + [x]):
            A.append(x)
    return sorted(A)


def is_basis(M: Matroid, A: Iterable[int], counter: Optional[OpCounter] = None) -> bool:
    A = set(A)
    _tick(counter)
    if not M.is_independent(A):
        return False
    for x in range(M.n):
        if x not in A:
            _tick(counter)
            if M.is_independent(A | {x}):
                return False
    return True


# -- bipartite matching used for exchange bijections ----------------------

def _perfect_matching(left: Sequence[int], adj: Dict[int, List[int]]) -> Optional[Dict[int, int]]:
    """Kuhn's augmenting-path matching; neighbours are tried in list order."""
    match_right: Dict[int, int] = {}

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in left:
        if not augment(u, set()):
            return None
    return {u: v for v, u in match_right.items()}


def brualdi_bijection(M: Matroid, A: Iterable[int], B: Iterable[int],
                      counter: Optional[OpCounter] = None) -> Dict[int, int]:
    """Bijection pi: A -> B with A - a + pi(a) independent for all a.

    It is the identity on A & B; the rest comes from a perfect matching of
    the exchange graph between A - B and B - A.
    """
    A, B = set(A), set(B)
    if len(A) != len(B):
        raise MatroidError("sets must have equal size")
    _tick(counter, 2)
    if not (M.is_independent(A) and M.is_independent(B)):
        raise MatroidError("both sets must be independent")
    left = sorted(A - B)
    right = sorted(B - A)
    adj = {}
    for a in left:
        adj[a] = []
        for b in right:
            _tick(counter)
            if M.is_independent((A - {a}) | {b}):
                adj[a].append(b)
    pi = _perfect_matching(left, adj)
    if pi is None:
        raise RuntimeError("exchange graph has no perfect matching; the oracle is not a matroid")
    pi.update({x: x for x in A & B})
    return pi


# -- matroid intersection ---------------------------------------------------

class IntersectionConstraint:
    """Common independent sets of two matroids on the same ground set."""

    kind = "intersection"

    def __init__(self, m1: Matroid, m2: Matroid):
        if m1.n != m2.n:
            raise MatroidError(f"ground sets differ: {m1.n} vs {m2.n}")
        self.m1, self.m2 = m1, m2
        self.n = m1.n
        self._k_common: Optional[int] = None

    def is_independent(self, A) -> bool:
        A = set(A)
        return self.m1.is_independent(A) and self.m2.is_independent(A)

    @property
    def k_common(self) -> int:
        if self._k_common is None:
            self._k_common = len(max_common_independent(self.m1, self.m2))
        return self._k_common

    def to_config(self, ids=None) -> dict:
        return {"kind": "intersection", "m1": self.m1.to_config(ids), "m2": self.m2.to_config(ids)}


def max_common_independent(m1: Matroid, m2: Matroid, counter: Optional[OpCounter] = None) -> List[int]:
    """Maximum-cardinality common independent set via shortest augmenting paths.

    Exchange graph for current I: x in I, y not in I,
    edge x -> y if I - x + y in I1, edge y -> x if I - x + y in I2.
    Sources: y with I + y in I1; sinks: y with I + y in I2.
    BFS visits vertices in ascending index so paths are deterministic.
    """
    if m1.n != m2.n:
        raise MatroidError("matroids live on different ground sets")
    n = m1.n
    I: set = set()
    while True:
        outside = [y for y in range(n) if y not in I]
        inside = sorted(I)
        sources, sinks = set(), set()
        for y in outside:
            _tick(counter, 2)
            if m1.is_independent(I | {y}):
                sources.add(y)
            if m2.is_independent(I | {y}):
                sinks.add(y)
        if not sources or not sinks:
            break
        direct = sorted(sources & sinks)
        if direct:
            I.add(direct[0])
            continue
        succ: Dict[int, List[int]] = {v: [] for v in range(n)}
        for x in inside:
            for y in outside:
                swapped = (I - {x}) | {y}
                _tick(counter, 2)
                if m1.is_independent(swapped):
                    succ[x].append(y)
                if m2.is_independent(swapped):
                    succ[y].append(x)
        parent = {s: None for s in sorted(sources)}
        queue = deque(sorted(sources))
        end = None
        while queue:
            v = queue.popleft()
            if v in sinks:
                end = v
                break
            for w in sorted(succ[v]):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        if end is None:
            break
        v = end
        while v is not None:
            if v in I:
                I.remove(v)
            else:
                I.add(v)
            v = parent[v]
    return sorted(I)


def augment_to_maximal(c: IntersectionConstraint, A: Iterable[int],
                       counter: Optional[OpCounter] = None) -> List[int]:
    """Greedily add elements in ascending index while common independence holds."""
    A = set(A)
    for x in range(c.n):
        if x in A:
            continue
        _tick(counter, 2)
        if c.is_independent(A | {x}):
            A.add(x)
    return sorted(A)


def is_maximal_common(c: IntersectionConstraint, A: Iterable[int]) -> bool:
    A = set(A)
    if not c.is_independent(A):
        return False
    return not any(c.is_independent(A | {x}) for x in range(c.n) if x not in A)


# -- config -------------------------------------------------------------------

def constraint_from_config(cfg: dict, ids: Sequence[str], k: Optional[int] = None):
    """Build a matroid or intersection constraint from its JSON-style config.

    ``ids`` maps element indices to identifiers; block members in the config
    are matched against them as strings.
    """
    index = {str(x): i for i, x in enumerate(ids)}
    n = len(ids)
    kind = cfg.get("kind")
    if kind == "uniform":
        kk = cfg.get("k", k)
        if kk is None:
            raise MatroidError("uniform constraint needs k")
        return UniformMatroid(n, int(kk))
    if kind == "partition":
        blocks = []
        for block in cfg.get("blocks", []):
            members = []
            for x in block:
                if str(x) not in index:
                    raise MatroidError(f"unknown element id {x!r} in partition block")
                members.append(index[str(x)])
            blocks.append(members)
        return PartitionMatroid(n, blocks, [int(c) for c in cfg.get("capacities", [])])
    if kind == "intersection":
        if "m1" not in cfg or "m2" not in cfg:
            raise MatroidError("intersection constraint needs m1 and m2")
        m1 = constraint_from_config(cfg["m1"], ids, k)
        m2 = constraint_from_config(cfg["m2"], ids, k)
        if isinstance(m1, IntersectionConstraint) or isinstance(m2, IntersectionConstraint):
            raise MatroidError("only two matroids may be intersected")
        return IntersectionConstraint(m1, m2)
    raise MatroidError(f"unknown constraint kind {kind!r}")
