"""Partition matroid constraint and the feasibility bookkeeping around it."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetOutOfRange,
    EmptyGroup,
    InfeasibleInput,
    OverlappingGroups,
    UnknownElement,
)


class PartitionMatroid:
    """Ground set ``0..n-1`` split into disjoint groups with per-group budgets.

    A set ``S`` is feasible when it takes at most ``budgets[i]`` elements from
    group ``i``, and maximal when it takes exactly ``budgets[i]`` from every
    group.  Instances are immutable after construction.

    Parameters
    ----------
    groups : sequence of sequences of int
        Disjoint element ids.  Their union must be exactly ``range(n)``.
    budgets : sequence of int
        One budget per group, ``1 <= budgets[i] <= len(groups[i])``.
    """

    def __init__(self, groups: Sequence[Sequence[int]], budgets: Sequence[int]):
        if len(groups) == 0:
            raise EmptyGroup("at least one group is required")
        if len(budgets) != len(groups):
            raise ValueError(
                f"got {len(budgets)} budgets for {len(groups)} groups")

        seen: dict[int, int] = {}
        norm_groups = []
        for i, g in enumerate(groups):
            g = tuple(sorted(int(e) for e in g))
            if not g:
                raise EmptyGroup(f"group {i} is empty")
            for e in g:
                if e < 0:
                    raise UnknownElement(f"negative element id {e}")
                if e in seen:
                    raise OverlappingGroups(
                        f"element {e} appears in groups {seen[e]} and {i}")
                seen[e] = i
            norm_groups.append(g)

        n = len(seen)
        if max(seen) != n - 1:
            raise UnknownElement(
                f"element ids must be dense in [0, {n}); max id is {max(seen)}")

        norm_budgets = tuple(int(b) for b in budgets)
        for i, (g, b) in enumerate(zip(norm_groups, norm_budgets)):
            if b < 1 or b > len(g):
                raise BudgetOutOfRange(
                    f"group {i}: budget {b} outside [1, {len(g)}]")

        self.groups: tuple[tuple[int, ...], ...] = tuple(norm_groups)
        self.budgets: tuple[int, ...] = norm_budgets
        self.n = n
        self.k = len(norm_groups)
        self.group_sizes = tuple(len(g) for g in norm_groups)
        self.b = sum(norm_budgets)
        self.b_hat = min(norm_budgets)
        self.n_bar = max(self.group_sizes)
        self.group_of = np.empty(n, dtype=np.intp)
        for i, g in enumerate(norm_groups):
            self.group_of[list(g)] = i
        self.group_of.setflags(write=False)

    def __repr__(self):
        return (f"PartitionMatroid(n={self.n}, k={self.k}, "
                f"budgets={list(self.budgets)})")

    def occupancy(self, S: Iterable[int]) -> list[int]:
        counts = [0] * self.k
        for e in S:
            counts[self._group(e)] += 1
        return counts

    def _group(self, e: int) -> int:
        if not 0 <= e < self.n:
            raise UnknownElement(f"element {e} not in ground set of size {self.n}")
        return int(self.group_of[e])

    def is_feasible(self, S: Iterable[int]) -> bool:
        counts = self.occupancy(S)
        return all(c <= b for c, b in zip(counts, self.budgets))

    def is_maximal(self, S: Iterable[int]) -> bool:
        counts = self.occupancy(S)
        if any(c > b for c, b in zip(counts, self.budgets)):
            raise InfeasibleInput("set exceeds a group budget")
        return all(c == b for c, b in zip(counts, self.budgets))

    def new_subset(self) -> "Subset":
        return Subset(self)


def new_partition_matroid(groups, budgets) -> PartitionMatroid:
    return PartitionMatroid(groups, budgets)


class Subset:
    """Mutable feasible set with per-group occupancy counters.

    ``add`` refuses elements that would break feasibility, so a ``Subset``
    is feasible at every point of its life.
    """

    __slots__ = ("matroid", "_members", "counts", "order")

    def __init__(self, matroid: PartitionMatroid, elements: Iterable[int] = ()):
        self.matroid = matroid
        self._members: set[int] = set()
        self.counts = [0] * matroid.k
        self.order: list[int] = []
        for e in elements:
            self.add(e)

    def __contains__(self, e):
        return e in self._members

    def __len__(self):
        return len(self._members)

    def __iter__(self):
        return iter(sorted(self._members))

    def __repr__(self):
        return f"Subset({sorted(self._members)})"

    def frozen(self) -> frozenset:
        return frozenset(self._members)

    def residual(self, i: int) -> int:
        """Remaining capacity of group ``i``."""
        return self.matroid.budgets[i] - self.counts[i]

    def can_add(self, e: int) -> bool:
        return e not in self._members and self.residual(self.matroid._group(e)) > 0

    def add(self, e: int) -> int:
        e = int(e)
        i = self.matroid._group(e)
        if e in self._members:
            raise ValueError(f"element {e} already in set")
        if self.counts[i] >= self.matroid.budgets[i]:
            raise InfeasibleInput(f"group {i} is full")
        self._members.add(e)
        self.counts[i] += 1
        self.order.append(e)
        return i

    def open_groups(self) -> list[int]:
        return [i for i in range(self.matroid.k) if self.residual(i) > 0]

    def remaining(self, i: int) -> list[int]:
        """Elements of group ``i`` not yet in the set, ascending."""
        return [e for e in self.matroid.groups[i] if e not in self._members]

    def is_maximal(self) -> bool:
        return all(self.residual(i) == 0 for i in range(self.matroid.k))
