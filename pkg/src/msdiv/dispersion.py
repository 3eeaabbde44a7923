"""Dispersion, cross sums and O(k) single-swap updates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

REL_TOL = 1e-9


@dataclass
class OpCounter:
    """Unit-cost accounting: one distance lookup or one oracle query each."""

    distance_evals: int = 0
    oracle_calls: int = 0


def _entries(D) -> np.ndarray:
    return getattr(D, "entries", D)


def dispersion(D, A: Iterable[int]) -> float:
    """Sum of d(a, b) over unordered pairs {a, b} of A."""
    idx = np.fromiter(A, dtype=int)
    if idx.size < 2:
        return 0.0
    M = _entries(D)
    return float(M[np.ix_(idx, idx)].sum()) / 2.0


def cross_sum(D, A: Iterable[int], B: Iterable[int]) -> float:
    """Sum of d(a, b) over ordered pairs a in A, b in B (sets may overlap)."""
    a = np.fromiter(A, dtype=int)
    b = np.fromiter(B, dtype=int)
    if a.size == 0 or b.size == 0:
        return 0.0
    return float(_entries(D)[np.ix_(a, b)].sum())


@dataclass
class SearchState:
    """Current set with cached dispersion and row sums d(a, A).

    ``swaps`` counts swaps since the caches were last rebuilt.
    """

    members: Tuple[int, ...]
    disp: float
    row: Dict[int, float]
    swaps: int = 0

    @property
    def k(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return x in self.row


def make_state(D, A: Iterable[int], counter: Optional[OpCounter] = None) -> SearchState:
    members = tuple(sorted(set(A)))
    M = _entries(D)
    if members:
        idx = np.array(members)
        sub = M[np.ix_(idx, idx)]
        rows = sub.sum(axis=1)
        disp = float(rows.sum()) / 2.0
        row = {a: float(r) for a, r in zip(members, rows)}
    else:
        disp, row = 0.0, {}
    if counter is not None:
        counter.distance_evals += len(members) ** 2
    return SearchState(members, disp, row)


def swap_value(state: SearchState, a: int, b: int, D, counter: Optional[OpCounter] = None) -> float:
    """d(A - a + b) = d(A) + d(A, b) - d(a, b) - d(a, A)."""
    if a not in state:
        raise ValueError(f"{a} is not in the current set")
    if a == b:
        return state.disp
    if b in state:
        raise ValueError(f"{b} is already in the current set")
    M = _entries(D)
    col = float(M[list(state.members), b].sum())
    if counter is not None:
        counter.distance_evals += state.k + 1
    return state.disp + col - float(M[a, b]) - state.row[a]


def apply_swap(state: SearchState, a: int, b: int, D, counter: Optional[OpCounter] = None,
               rebuild_every: Optional[int] = None) -> SearchState:
    """Return the state for A - a + b with caches updated in O(k) lookups.

    Caches are rebuilt from scratch once ``rebuild_every`` swaps have
    accumulated (default ``10 * k``) to keep round-off bounded.
    """
    if a == b:
        return SearchState(state.members, state.disp, dict(state.row), state.swaps)
    new_disp = swap_value(state, a, b, D, counter)
    M = _entries(D)
    members = tuple(sorted((set(state.members) - {a}) | {b}))
    limit = rebuild_every if rebuild_every is not None else 10 * max(1, state.k)
    if state.swaps + 1 >= limit:
        return make_state(D, members, counter)
    row = {}
    row_b = 0.0
    for x in members:
        if x == b:
            continue
        dxb = float(M[x, b])
        row[x] = state.row[x] - float(M[x, a]) + dxb
        row_b += dxb
    row[b] = row_b
    if counter is not None:
        counter.distance_evals += 2 * (len(members) - 1)
    return SearchState(members, new_disp, row, state.swaps + 1)


def check_state(D, state: SearchState, rel_tol: float = REL_TOL) -> None:
    """Raise AssertionError if the caches disagree with recomputation."""
    fresh = make_state(D, state.members)
    scale = max(1.0, abs(fresh.disp))
    assert abs(state.disp - fresh.disp) <= rel_tol * scale, (state.disp, fresh.disp)
    for a, r in fresh.row.items():
        assert abs(state.row[a] - r) <= rel_tol * scale, (a, state.row[a], r)
    assert abs(sum(state.row.values()) - 2 * state.disp) <= rel_tol * scale
