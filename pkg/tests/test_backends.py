import numpy as np
import pytest

from partmax import _backend, _fallback
from partmax.influence import RealizationSet, assign_degree_weights, random_graph
from partmax.quantify import value_table
from partmax.synthetic import random_instance

needs_ext = pytest.mark.skipif(_backend.BACKEND != "cython", reason="compiled kernels not built")


def test_get_kernels_python():
    assert _backend.get_kernels("python") is _fallback
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")


def _graph_state(seed, n=60, samples=30):
    g = assign_degree_weights(random_graph(n, 2, seed))
    r = RealizationSet.sample(g.num_edges, samples, seed)
    return g, r.states(g)


def test_reach_gains_equal_count_differences(backend):
    k = _backend.get_kernels(backend)
    g, st = _graph_state(4)
    boosted = np.zeros(g.n, np.uint8)
    boosted[[3, 7, 11]] = 1
    base = k.reach_counts(g.out_ptr, g.dst, st, g.seeds, boosted).sum()
    cands = np.array([0, 1, 5, 20, 59], np.int64)
    gains = k.reach_gains(g.out_ptr, g.dst, st, g.seeds, boosted, cands)
    for c, gv in zip(cands, gains):
        b2 = boosted.copy()
        b2[c] = 1
        assert gv == k.reach_counts(g.out_ptr, g.dst, st, g.seeds, b2).sum() - base


@needs_ext
class TestParity:
    def test_reach(self):
        py, cy = _backend.get_kernels("python"), _backend.get_kernels("cython")
        for seed in range(5):
            g, st = _graph_state(seed)
            boosted = (np.random.default_rng(seed).random(g.n) < 0.2).astype(np.uint8)
            cands = np.arange(g.n, dtype=np.int64)
            a = py.reach_counts(g.out_ptr, g.dst, st, g.seeds, boosted)
            b = cy.reach_counts(g.out_ptr, g.dst, st, g.seeds, boosted)
            np.testing.assert_array_equal(a, b)
            a = py.reach_gains(g.out_ptr, g.dst, st, g.seeds, boosted, cands)
            b = cy.reach_gains(g.out_ptr, g.dst, st, g.seeds, boosted, cands)
            np.testing.assert_array_equal(a, b)

    def test_gamma_alpha(self):
        py, cy = _backend.get_kernels("python"), _backend.get_kernels("cython")
        for seed in range(10):
            m, o = random_instance("mixed", 7, seed)
            args = (value_table(o, m.n), np.asarray(m.group_of, np.int64),
                    np.asarray(m.budgets, np.int64), 1e-12)
            assert py.gamma_alpha_scan(*args) == pytest.approx(cy.gamma_alpha_scan(*args), abs=1e-14)

    def test_jacobi(self):
        py, cy = _backend.get_kernels("python"), _backend.get_kernels("cython")
        rng = np.random.default_rng(0)
        A = rng.normal(size=(8, 8))
        A = A + A.T
        a, _ = py.jacobi_eigenvalues(A.copy(), 1e-12, 100)
        b, _ = cy.jacobi_eigenvalues(A.copy(), 1e-12, 100)
        np.testing.assert_allclose(np.sort(a), np.sort(b), atol=1e-10)
