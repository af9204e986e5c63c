import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from partmax.errors import BudgetExceedsSegment, FactorizationFailure, NotSymmetric
from partmax.matroid import PartitionMatroid
from partmax.oracle import normalize
from partmax.quantify import exact_gamma_alpha
from partmax.summarization import (
    cofactor_det,
    det_objective,
    gaussian_gram,
    lemma4_gamma_bound,
    load_features_csv,
    logdet_spd,
    segment_partition,
    symmetric_eigenvalues,
)


def random_gram(seed, n, d=3):
    F = np.random.default_rng(seed).normal(size=(n, d))
    return gaussian_gram(F)


class TestGram:
    def test_identical_frames(self):
        X = gaussian_gram([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]], bandwidth=1.0)
        assert X[0, 1] == 1.0

    def test_distance_h_sqrt2(self):
        X = gaussian_gram([[0.0], [math.sqrt(2) * 0.7]], bandwidth=0.7)
        assert X[0, 1] == pytest.approx(math.exp(-1))

    @given(seed=st.integers(0, 10**6), n=st.integers(1, 10))
    @settings(max_examples=30, deadline=None)
    def test_symmetric_unit_diag(self, seed, n):
        X = random_gram(seed, n)
        np.testing.assert_array_equal(X, X.T)
        np.testing.assert_array_equal(np.diag(X), 1.0)

    def test_csv_header(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("a,b\n1,2\n3,4\n")
        np.testing.assert_array_equal(load_features_csv(p), [[1, 2], [3, 4]])


class TestDet:
    def test_identity(self):
        o = det_objective(np.eye(5))
        assert o.value({0, 2, 4}) == pytest.approx(8)
        assert o.value({3}) == pytest.approx(2)

    def test_empty_normalized(self):
        o = normalize(det_objective(np.eye(3)))
        assert o.offset == 1 and o.value(set()) == 0

    def test_matches_cofactor(self):
        for seed in range(20):
            X = random_gram(seed, 8)
            S = sorted(np.random.default_rng(seed).choice(8, 6, replace=False))
            ref = cofactor_det(np.eye(6) + X[np.ix_(S, S)])
            assert det_objective(X).value(S) == pytest.approx(ref, rel=1e-10)

    def test_not_pd(self):
        with pytest.raises(FactorizationFailure):
            logdet_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            det_objective(np.array([[1.0, 0.5], [0.2, 1.0]]))

    def test_overflow_is_inf(self):
        o = det_objective(np.eye(1100))
        assert math.isinf(o.value(range(1100)))

    @given(seed=st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_monotone(self, seed):
        X = random_gram(seed, 7)
        o = det_objective(X)
        S = [0, 3]
        for e in [1, 2, 4, 5, 6]:
            assert o.value(S + [e]) >= o.value(S) - 1e-12


class TestEigen:
    def test_diag(self, backend):
        np.testing.assert_allclose(symmetric_eigenvalues(np.diag([3.0, 1, 2]), backend=backend),
                                   [3, 2, 1])

    def test_2x2(self, backend):
        np.testing.assert_allclose(symmetric_eigenvalues([[2, 1], [1, 2]], backend=backend),
                                   [3, 1], atol=1e-12)

    def test_trace_det(self, backend):
        rng = np.random.default_rng(0)
        for _ in range(10):
            A = rng.normal(size=(8, 8))
            A = (A + A.T) / 2
            lam = symmetric_eigenvalues(A, backend=backend)
            assert lam.sum() == pytest.approx(np.trace(A), rel=1e-9, abs=1e-12)
            assert np.prod(lam) == pytest.approx(cofactor_det(A), rel=1e-9)

    def test_asymmetric(self):
        with pytest.raises(NotSymmetric):
            symmetric_eigenvalues([[1, 2], [0, 1]])


class TestLemma4:
    def test_scalar_spectrum(self):
        for c in [0.2, 0.5, 1.0]:
            p = lemma4_gamma_bound((1 + c) * np.eye(4), 2)
            assert p.gamma == pytest.approx(1 / (1 + c) ** 2) and p.alpha == 0

    def test_singular_x(self):
        X = np.ones((3, 3))  # rank one: lambda_min(A) = 1
        assert lemma4_gamma_bound(np.eye(3) + X, 2).gamma == pytest.approx(0, abs=1e-9)

    def test_degenerate(self):
        p = lemma4_gamma_bound(np.eye(3), 1)
        assert p.degenerate and p.gamma == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_sandwich(self, seed):
        X = random_gram(seed, 6)
        m = PartitionMatroid([list(range(6))], [2])
        ex = exact_gamma_alpha(m, normalize(det_objective(X)))
        bd = lemma4_gamma_bound(np.eye(6) + X, 2)
        assert ex.gamma >= bd.gamma - 1e-9
        assert ex.alpha <= 1e-9


class TestSegments:
    def test_sizes(self):
        m = segment_partition(10, 3, 1)
        assert [len(g) for g in m.groups] == [4, 3, 3]

    def test_even(self):
        m = segment_partition(6, 2, 2)
        assert m.groups == ((0, 1, 2), (3, 4, 5)) and list(m.budgets) == [2, 2]

    def test_too_big(self):
        with pytest.raises(BudgetExceedsSegment):
            segment_partition(4, 2, 3)
