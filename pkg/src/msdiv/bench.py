"""Operation-count scaling sweep for the single-matroid local search."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .distance import PointSet, build_distance_matrix
from .local_search_matroid import default_iterations, local_search
from .matroid import UniformMatroid

COLUMNS = ("n", "k", "ell", "distance_evals", "oracle_calls", "millis")


@dataclass
class BenchRow:
    n: int
    k: int
    ell: int
    distance_evals: int
    oracle_calls: int
    millis: float
    scans: int

    @property
    def evals_per_scan(self) -> float:
        return self.distance_evals / max(1, self.scans)

    def csv(self) -> str:
        return f"{self.n},{self.k},{self.ell},{self.distance_evals},{self.oracle_calls},{self.millis:.1f}"


def scaling_run(sizes: Sequence[int], k: int = 20, kernel: str = "euclidean", seed: int = 0,
                dim: int = 5) -> List[BenchRow]:
    rows = []
    ell = default_iterations(k)
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        pts = rng.random((n, dim)) if kernel == "jaccard" else rng.normal(size=(n, dim))
        D = build_distance_matrix(PointSet(pts, tuple(range(n))), kernel)
        M = UniformMatroid(n, k)
        t0 = time.perf_counter()
        _, trace = local_search(D, M, ell)
        millis = (time.perf_counter() - t0) * 1000
        rows.append(BenchRow(n, k, ell, trace.distance_evals, trace.oracle_calls, millis, trace.scans))
    return rows


def format_table(rows: Sequence[BenchRow]) -> str:
    return "\n".join([",".join(COLUMNS)] + [r.csv() for r in rows]) + "\n"
