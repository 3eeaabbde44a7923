"""Best-improvement single-swap local search over matroid bases."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .dispersion import OpCounter, SearchState, apply_swap, make_state
from .matroid import Matroid, greedy_basis, is_basis

STRICT_EPS = 1e-12


def strict_threshold(value: float) -> float:
    return value + STRICT_EPS * max(1.0, abs(value))


@dataclass
class Step:
    removed: Tuple[int, ...]
    added: Tuple[int, ...]
    value: float
    members: Tuple[int, ...]


@dataclass
class RunTrace:
    start_value: float = 0.0
    end_value: float = 0.0
    iterations: List[Step] = field(default_factory=list)
    counter: OpCounter = field(default_factory=OpCounter)
    scans: int = 0
    local_optimum: bool = False
    warnings: List[str] = field(default_factory=list)

    @property
    def oracle_calls(self) -> int:
        return self.counter.oracle_calls

    @property
    def distance_evals(self) -> int:
        return self.counter.distance_evals


def initial_basis(M: Matroid, counter: Optional[OpCounter] = None) -> List[int]:
    """Greedy lowest-index basis."""
    return greedy_basis(M, counter)


def default_iterations(k: int) -> int:
    """Smallest l with (1 - 1/k)^l <= 1/k; 1 when k < 2."""
    if k < 2:
        return 1
    ell = max(1, math.ceil(math.log(k) / -math.log1p(-1.0 / k)))
    while ell > 1 and (1 - 1 / k) ** (ell - 1) <= 1 / k:
        ell -= 1
    while (1 - 1 / k) ** ell > 1 / k:
        ell += 1
    return ell


def convergence_bound(k: int, ell: int) -> float:
    """Guaranteed fraction of d(OPT) after ell iterations from any basis."""
    if k < 1:
        return 0.0
    return (1 - (1 - 1 / k) ** ell) * (1 - 4 / k)


# A swap potential maps (members, removed element, candidate mask) to the
# potential change of every candidate swap, excluding the dispersion part.
SwapPotential = Callable[[Tuple[int, ...], int, np.ndarray], np.ndarray]


def best_swap(state: SearchState, D, M: Matroid, counter: OpCounter,
              d_weight: float = 1.0, extra: Optional[SwapPotential] = None,
              extra_value: float = 0.0):
    """Scan every feasible swap and return ``(a, b, new_disp, new_potential)``.

    The potential of a set is ``d_weight * d(A) + extra``. Ties go to the
    lexicographically smallest (a, b). Returns None when no swap improves
    the potential strictly.
    """
    M_ = D.entries if hasattr(D, "entries") else D
    n = M_.shape[0]
    members = state.members
    k = len(members)
    if k == 0 or k == n:
        return None
    idx = np.array(members)
    outside = np.ones(n, dtype=bool)
    outside[idx] = False
    col = M_[idx].sum(axis=0)
    counter.distance_evals += k * (n - k)
    current = d_weight * state.disp + extra_value
    threshold = strict_threshold(current)
    best = None
    best_pot = threshold
    for a in members:
        counter.oracle_calls += n - k
        feasible = M.exchange_mask(members, a) & outside
        nfeas = int(feasible.sum())
        if nfeas == 0:
            continue
        counter.distance_evals += nfeas
        new_disp = state.disp + col - M_[a] - state.row[a]
        pot = d_weight * new_disp
        if extra is not None:
            pot = pot + extra(members, a, feasible)
        else:
            pot = pot + extra_value
        pot = np.where(feasible, pot, -np.inf)
        b = int(np.argmax(pot))
        if pot[b] > best_pot:
            best_pot = float(pot[b])
            best = (a, b, float(new_disp[b]), best_pot)
    return best


def local_search(D, M: Matroid, ell: Optional[int] = None, start: Optional[Sequence[int]] = None,
                 check: bool = False) -> Tuple[List[int], RunTrace]:
    """Run up to ``ell`` best-improvement swaps starting from a basis.

    ``ell`` defaults to :func:`default_iterations` of the rank. Stops early
    at a local optimum. With ``check=True`` every intermediate set is
    asserted to be a basis.
    """
    trace = RunTrace()
    counter = trace.counter
    A = list(start) if start is not None else initial_basis(M, counter)
    if start is not None and not is_basis(M, A, counter):
        raise ValueError("start set is not a basis")
    k = len(A)
    if ell is None:
        ell = default_iterations(k)
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    state = make_state(D, A, counter)
    trace.start_value = state.disp
    for _ in range(ell):
        trace.scans += 1
        move = best_swap(state, D, M, counter)
        if move is None:
            trace.local_optimum = True
            break
        a, b, _, _ = move
        state = apply_swap(state, a, b, D, counter)
        if check:
            assert is_basis(M, state.members), state.members
        trace.iterations.append(Step((a,), (b,), state.disp, state.members))
    trace.end_value = state.disp
    return list(state.members), trace


def greedy_baseline(D, M: Matroid, counter: Optional[OpCounter] = None) -> List[int]:
    """Add the feasible element with the largest d(A, {b}) until A is a basis."""
    M_ = D.entries if hasattr(D, "entries") else D
    n = M_.shape[0]
    A: List[int] = []
    gain = np.zeros(n)
    while True:
        best, best_gain = None, -math.inf
        for b in range(n):
            if b in A:
                continue
            if counter is not None:
                counter.oracle_calls += 1
            if M.is_independent(A + [b]) and gain[b] > best_gain:
                best, best_gain = b, gain[b]
        if best is None:
            break
        A.append(best)
        gain = gain + M_[best]
        if counter is not None:
            counter.distance_evals += n
    return sorted(A)
