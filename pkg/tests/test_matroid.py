import pytest
from hypothesis import given, settings, strategies as st

from partmax.errors import (
    BudgetOutOfRange,
    EmptyGroup,
    InfeasibleInput,
    OverlappingGroups,
    UnknownElement,
)
from partmax.matroid import PartitionMatroid, Subset, new_partition_matroid
from partmax.synthetic import random_matroid


class TestConstruction:
    def test_basic_fields(self):
        m = new_partition_matroid([[0, 1], [2, 3]], [1, 1])
        assert (m.n, m.k, m.b, m.b_hat, m.n_bar) == (4, 2, 2, 1, 2)

    def test_overlap(self):
        with pytest.raises(OverlappingGroups):
            PartitionMatroid([[0], [0, 1]], [1, 1])

    def test_budget_too_big(self):
        with pytest.raises(BudgetOutOfRange):
            PartitionMatroid([[0, 1, 2]], [4])

    def test_budget_zero(self):
        with pytest.raises(BudgetOutOfRange):
            PartitionMatroid([[0, 1, 2]], [0])

    def test_empty_group(self):
        with pytest.raises((EmptyGroup, BudgetOutOfRange)):
            PartitionMatroid([[0, 1], []], [1, 1])

    def test_group_of(self):
        m = PartitionMatroid([[2, 0], [1, 3]], [1, 2])
        assert list(m.group_of) == [0, 1, 0, 1]
        assert m.groups[0] == (0, 2)


class TestFeasibility:
    def test_feasible(self, two_groups):
        assert two_groups.is_feasible({0, 2})
        assert not two_groups.is_feasible({0, 1})
        assert two_groups.is_feasible(set())

    def test_maximal(self, two_groups):
        assert two_groups.is_maximal({0, 2})
        assert not two_groups.is_maximal({0})
        assert PartitionMatroid([[0, 1]], [2]).is_maximal({0, 1})

    def test_maximal_requires_feasible(self, two_groups):
        with pytest.raises(InfeasibleInput):
            two_groups.is_maximal({0, 1})

    def test_unknown_element(self, two_groups):
        with pytest.raises(UnknownElement):
            two_groups.is_feasible({7})


class TestSubset:
    def test_add_and_residual(self, two_groups):
        S = Subset(two_groups)
        assert S.add(3) == 1
        assert S.residual(1) == 0 and S.residual(0) == 1
        assert S.open_groups() == [0]
        assert S.remaining(0) == [0, 1]
        assert not S.can_add(2)
        with pytest.raises(InfeasibleInput):
            S.add(2)
        S.add(1)
        assert S.is_maximal()
        assert list(S) == [1, 3]


@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_maximal_sets_have_size_b(n, seed):
    import itertools
    m = random_matroid(n, seed)
    combos = [itertools.combinations(g, b) for g, b in zip(m.groups, m.budgets)]
    S = set(itertools.chain.from_iterable(next(itertools.product(*combos))))
    assert len(S) == m.b
    assert m.is_maximal(S) and m.is_feasible(S)
