"""Compare local-search potentials on diversity plus linear quality scores."""

from dataclasses import dataclass

import numpy as np

from _config import parse_config
from msdiv.checks import random_matrix
from msdiv.matroid import UniformMatroid
from msdiv.oracle import brute_force_combined
from msdiv.submodular import LinearFn, combined_bound, combined_local_search, objective

POTENTIALS = ("oblivious", "linear_exact", "metric_linear")


@dataclass(frozen=True)
class CompareConfig:
    """Worst ratio g(A)/g(OPT) per potential over random instances."""
    trials: int = 100
    n: int = 9
    k: int = 4
    f_scale: float = 5.0
    seed: int = 0


def main(argv=None):
    cfg = parse_config(CompareConfig, argv)
    rng = np.random.default_rng(cfg.seed)
    worst = {p: 1.0 for p in POTENTIALS}
    floor = 1.0
    for _ in range(cfg.trials):
        D = random_matrix(rng, cfg.n, kernel="euclidean")
        f = LinearFn(cfg.f_scale * rng.random(cfg.n))
        M = UniformMatroid(cfg.n, cfg.k)
        _, gopt, lam_d, _ = brute_force_combined(D, M, f)
        floor = min(floor, combined_bound(cfg.k, 0.0, lam_d))
        for p in POTENTIALS:
            A, _ = combined_local_search(D, M, f, p)
            worst[p] = min(worst[p], objective(D, f, A)[2] / gopt)
    for p in POTENTIALS:
        print(f"{p:14s} worst ratio {worst[p]:.4f}")
    print(f"{'bound':14s} smallest instance bound {floor:.4f}")


if __name__ == "__main__":
    main()
