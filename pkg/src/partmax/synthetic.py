"""Random small instances for tests, benchmarks and the ``synthetic`` CLI app."""

from __future__ import annotations

from .influence import balanced_random_groups
from .matroid import PartitionMatroid
from .oracle import (
    SumOracle,
    make_cardinality_squared,
    make_coverage,
    make_modular,
)
from .rng import make_rng

FAMILIES = ("modular", "coverage", "cardsq", "mixed")


def random_oracle(family: str, n: int, rng=0):
    rng = make_rng(rng)
    if family == "modular":
        return make_modular(rng.integers(0, 10, n))
    if family == "coverage":
        universe = max(4, 2 * n)
        covers = [rng.choice(universe, size=int(rng.integers(1, 5)), replace=False)
                  for _ in range(n)]
        return make_coverage([set(c.tolist()) for c in covers])
    if family == "cardsq":
        return make_cardinality_squared(n)
    if family == "mixed":
        # submodular coverage plus a supermodular term: neither property holds
        cov = random_oracle("coverage", n, rng)
        return SumOracle([cov, make_cardinality_squared(n)],
                         [1.0, float(rng.uniform(0.1, 1.0))])
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def random_matroid(n: int, rng=0, max_groups: int = 4, k: int | None = None,
                   budgets=None) -> PartitionMatroid:
    """Balanced random partition; budgets drawn uniformly unless given."""
    rng = make_rng(rng)
    if k is None:
        k = int(rng.integers(1, min(n, max_groups) + 1))
    groups = balanced_random_groups(n, k, rng)
    if budgets is None:
        budgets = [int(rng.integers(1, len(g) + 1)) for g in groups]
    return PartitionMatroid(groups, budgets)


def random_instance(family: str, n: int, rng=0, **matroid_kw):
    rng = make_rng(rng)
    return random_matroid(n, rng, **matroid_kw), random_oracle(family, n, rng)
