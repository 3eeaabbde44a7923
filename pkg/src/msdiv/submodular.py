"""Monotone submodular objectives and local search for g = d + f."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .dispersion import dispersion, make_state, apply_swap
from .local_search_matroid import RunTrace, Step, best_swap, initial_basis
from .matroid import Matroid

TOL = 1e-9
CURVATURE_SNAP = 1e-12


class SubmodularError(ValueError):
    pass


class SubmodularFn:
    """Value oracle for a normalized monotone submodular set function."""

    kind = "abstract"

    def __init__(self, n: int):
        self.n = n

    def value(self, A: Iterable[int]) -> float:
        raise NotImplementedError

    def __call__(self, A) -> float:
        return self.value(A)

    def ground(self) -> frozenset:
        return frozenset(range(self.n))


class LinearFn(SubmodularFn):
    kind = "linear"

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise SubmodularError("linear weights must be nonnegative for a monotone objective")
        super().__init__(len(w))
        self.weights = w

    def value(self, A) -> float:
        idx = list(A)
        return float(self.weights[idx].sum()) if idx else 0.0


class CoverageFn(SubmodularFn):
    """Total weight of the types hit by A."""

    kind = "coverage"

    def __init__(self, n: int, types: Sequence[Iterable[int]], type_weights: Optional[Sequence[float]] = None):
        super().__init__(n)
        self.types = [frozenset(t) for t in types]
        if type_weights is None:
            type_weights = [1.0] * len(self.types)
        if len(type_weights) != len(self.types):
            raise SubmodularError("one weight per type is required")
        if any(w < 0 for w in type_weights):
            raise SubmodularError("type weights must be nonnegative")
        self.type_weights = [float(w) for w in type_weights]

    def value(self, A) -> float:
        A = set(A)
        return float(sum(w for t, w in zip(self.types, self.type_weights) if t & A))


class ExplicitFn(SubmodularFn):
    """Tabulated function over all 2^n subsets, indexed by bitmask."""

    kind = "explicit"

    def __init__(self, n: int, table):
        super().__init__(n)
        if isinstance(table, dict):
            arr = np.zeros(1 << n)
            for S, v in table.items():
                arr[_mask(S)] = v
        else:
            arr = np.asarray(table, dtype=float)
            if arr.shape != (1 << n,):
                raise SubmodularError(f"table must have 2^{n} entries")
        self.table = arr

    @classmethod
    def tabulate(cls, f: SubmodularFn) -> "ExplicitFn":
        return cls(f.n, [f.value(_members(m, f.n)) for m in range(1 << f.n)])

    def value(self, A) -> float:
        return float(self.table[_mask(A)])


class ResidualFn(SubmodularFn):
    """f minus a linear function."""

    kind = "residual"

    def __init__(self, f: SubmodularFn, weights: np.ndarray):
        super().__init__(f.n)
        self.f = f
        self.weights = weights

    def value(self, A) -> float:
        idx = list(A)
        lin = float(self.weights[idx].sum()) if idx else 0.0
        return self.f.value(idx) - lin


def _mask(A) -> int:
    m = 0
    for x in A:
        m |= 1 << x
    return m


def _members(mask: int, n: int) -> List[int]:
    return [i for i in range(n) if mask >> i & 1]


def check_submodular(f: SubmodularFn, tol: float = TOL) -> None:
    """Exhaustively check normalization, monotonicity and submodularity.

    Raises SubmodularError naming the first violation. Cost is
    O(2^n n^2) evaluations, so keep n small.
    """
    n = f.n
    vals = np.array([f.value(_members(m, n)) for m in range(1 << n)])
    scale = max(1.0, float(np.abs(vals).max()))
    if abs(vals[0]) > tol * scale:
        raise SubmodularError(f"f(empty) = {vals[0]} is not 0")
    for m in range(1 << n):
        for x in range(n):
            if m >> x & 1:
                continue
            mx = m | 1 << x
            if vals[mx] < vals[m] - tol * scale:
                raise SubmodularError(f"not monotone at {_members(m, n)} + {x}")
            for y in range(x + 1, n):
                if m >> y & 1:
                    continue
                if vals[mx] + vals[m | 1 << y] < vals[mx | 1 << y] + vals[m] - tol * scale:
                    raise SubmodularError(f"not submodular at {_members(m, n)} with {x}, {y}")


def marginal_last(f: SubmodularFn) -> np.ndarray:
    """f(X) - f(X - x) for every x."""
    X = list(range(f.n))
    top = f.value(X)
    return np.array([top - f.value([y for y in X if y != x]) for x in X])


def curvature(f: SubmodularFn) -> float:
    """1 - min over x of (f(X) - f(X - x)) / f(x).

    Elements with f(x) = 0 are skipped; if every singleton is worthless the
    curvature is taken to be 0.
    """
    if isinstance(f, LinearFn):
        return 0.0
    last = marginal_last(f)
    ratios = []
    for x in range(f.n):
        single = f.value([x])
        if single > 0:
            ratios.append(last[x] / single)
    if not ratios:
        return 0.0
    c = 1.0 - min(ratios)
    # marginals of a tabulated linear f differ from f(x) only by summation round-off
    if c <= CURVATURE_SNAP:
        return 0.0
    return float(min(1.0, c))


def zero_singletons(f: SubmodularFn) -> List[int]:
    return [x for x in range(f.n) if f.value([x]) == 0]


@dataclass
class Decomposition:
    l_weights: np.ndarray
    f_prime: SubmodularFn
    curvature: float

    def linear(self, A) -> float:
        idx = list(A)
        return float(self.l_weights[idx].sum()) if idx else 0.0


def decompose(f: SubmodularFn, verify: Optional[bool] = None, tol: float = TOL) -> Decomposition:
    """Split f = l + f' with l(A) = sum over A of f(X) - f(X - a).

    For n <= 10 (or ``verify=True``) the residual is checked to be
    normalized, monotone, submodular and bounded by c * f on every set;
    a failure means f itself was not monotone submodular.
    """
    w = marginal_last(f)
    c = curvature(f)
    fp = ResidualFn(f, w)
    if verify is None:
        verify = f.n <= 10
    if verify:
        check_submodular(f, tol)
        check_submodular(fp, tol)
        n = f.n
        for m in range(1 << n):
            A = _members(m, n)
            fv = f.value(A)
            if fp.value(A) > c * fv + tol * max(1.0, abs(fv)):
                raise SubmodularError(f"f'({A}) exceeds c * f({A})")
    return Decomposition(w, fp, c)


# -- potentials ---------------------------------------------------------------

@dataclass
class Potential:
    """G(A) = d_weight * d(A) + F(A).

    ``F`` is any set function; ``weights`` marks F as linear so swaps can be
    scored in bulk. Plug a custom ``F`` (e.g. an estimator of a
    non-oblivious submodular potential) by constructing this directly.
    """

    name: str
    d_weight: float
    F: Callable[[Iterable[int]], float]
    weights: Optional[np.ndarray] = None


def make_potential(kind: str, f: SubmodularFn, k: int) -> Potential:
    """Potential by name.

    ``oblivious``: G = d + f.
    ``linear_exact``: G = (1 - 2/k) d + l, requires curvature 0.
    ``metric_linear``: G = d/2 + l, requires curvature 0.
    """
    if kind == "oblivious":
        w = f.weights if isinstance(f, LinearFn) else None
        return Potential(kind, 1.0, f.value, w)
    if kind in ("linear_exact", "metric_linear"):
        c = curvature(f)
        if c > TOL:
            raise SubmodularError(f"{kind} potential needs a linear objective (curvature {c:.6g} > 0); "
                                  "use the oblivious potential instead")
        w = marginal_last(f)
        lin = LinearFn(np.maximum(w, 0.0))
        d_weight = max(0.0, 1 - 2 / k) if kind == "linear_exact" else 0.5
        return Potential(kind, d_weight, lin.value, lin.weights)
    raise SubmodularError(f"unknown potential {kind!r}")


def combined_local_search(D, M: Matroid, f: SubmodularFn, potential="linear_exact",
                          ell: Optional[int] = None, start: Optional[Sequence[int]] = None
                          ) -> Tuple[List[int], RunTrace]:
    """Best-improvement swaps over bases maximizing a potential G.

    Runs until a local optimum of G unless ``ell`` caps the iterations.
    The trace records G along the way; the returned set should be judged
    by g = d + f.
    """
    trace = RunTrace()
    counter = trace.counter
    A = list(start) if start is not None else initial_basis(M, counter)
    k = len(A)
    pot = potential if isinstance(potential, Potential) else make_potential(potential, f, max(k, 1))
    state = make_state(D, A, counter)
    Fval = pot.F(state.members)

    def extra(members, a, feasible):
        if pot.weights is not None:
            return Fval - pot.weights[a] + pot.weights
        out = np.full(len(feasible), -np.inf)
        base = [x for x in members if x != a]
        for b in np.flatnonzero(feasible):
            out[b] = pot.F(base + [int(b)])
        return out

    trace.start_value = pot.d_weight * state.disp + Fval
    steps = 0
    while ell is None or steps < ell:
        trace.scans += 1
        move = best_swap(state, D, M, counter, pot.d_weight, extra, Fval)
        if move is None:
            trace.local_optimum = True
            break
        a, b, _, gval = move
        state = apply_swap(state, a, b, D, counter)
        Fval = pot.F(state.members)
        steps += 1
        trace.iterations.append(Step((a,), (b,), gval, state.members))
    trace.end_value = pot.d_weight * state.disp + Fval
    return list(state.members), trace


def objective(D, f: SubmodularFn, A) -> Tuple[float, float, float]:
    """(d, f, g) for the set A."""
    A = list(A)
    dv = dispersion(D, A)
    fv = f.value(A)
    return dv, fv, dv + fv


def combined_bound(k: int, c: float, lambda_d: Optional[float] = None, potential: str = "linear_exact") -> float:
    """Certified fraction of g(OPT) at a local optimum.

    With the exact lambda_d the instance-specific factor is returned,
    otherwise the floor 1 - max(4/k, c/e).
    """
    if potential == "metric_linear":
        lam = 1.0 if lambda_d is None else lambda_d
        return 1 - lam / 2 - (1 - lam) * c / math.e
    if lambda_d is None:
        return 1 - max(4 / k, c / math.e)
    return 1 - lambda_d * 4 / k - (1 - lambda_d) * c / math.e


def objective_from_config(cfg: dict, ids: Sequence[str]) -> SubmodularFn:
    index = {str(x): i for i, x in enumerate(ids)}
    n = len(ids)

    def lookup(x):
        if str(x) not in index:
            raise SubmodularError(f"unknown element id {x!r} in objective")
        return index[str(x)]

    kind = cfg.get("kind")
    if kind == "linear":
        w = np.zeros(n)
        for x, v in cfg.get("weights", {}).items():
            w[lookup(x)] = float(v)
        return LinearFn(w)
    if kind == "coverage":
        types = [[lookup(x) for x in t] for t in cfg.get("types", [])]
        return CoverageFn(n, types, cfg.get("type_weights"))
    raise SubmodularError(f"unknown objective kind {kind!r}")
