"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same four functions with the same semantics; the
package picks one at import time (see ``partmax._backend``).

Graph kernels take a CSR adjacency over out-edges (``out_ptr``, ``out_dst``)
and a per-sample edge-state matrix ``state[s, j]`` with codes
``0`` always live, ``1`` live only if the edge head is boosted, ``2`` dead.
"""

from collections import deque

import numpy as np

LIVE, BOOST, DEAD = 0, 1, 2


def _bfs(ptr, dst, row, seeds, boosted):
    seen = set()
    q = deque()
    for v in seeds:
        if v not in seen:
            seen.add(v)
            q.append(v)
    while q:
        u = q.popleft()
        for j in range(ptr[u], ptr[u + 1]):
            v = dst[j]
            if v in seen:
                continue
            st = row[j]
            if st == LIVE or (st == BOOST and boosted[v]):
                seen.add(v)
                q.append(v)
    return seen


def reach_counts(out_ptr, out_dst, state, seeds, boosted):
    """Number of nodes reachable from ``seeds`` in each sample."""
    ptr = out_ptr.tolist()
    dst = out_dst.tolist()
    bst = boosted.tolist()
    sd = seeds.tolist()
    out = np.empty(state.shape[0], dtype=np.int64)
    for s in range(state.shape[0]):
        out[s] = len(_bfs(ptr, dst, state[s].tolist(), sd, bst))
    return out


def reach_gains(out_ptr, out_dst, state, seeds, boosted, candidates):
    """Extra reach from boosting each candidate, summed over samples.

    Boosting ``c`` only changes edges into ``c``.  So in a sample, ``c``
    adds reach iff some boost-gated edge enters it from an already reached
    node, and the new nodes are those reachable from ``c`` outside the
    current reach.
    """
    ptr = out_ptr.tolist()
    dst = out_dst.tolist()
    bst = boosted.tolist()
    sd = seeds.tolist()
    cands = candidates.tolist()
    totals = np.zeros(len(cands), dtype=np.int64)
    for s in range(state.shape[0]):
        row = state[s].tolist()
        reached = _bfs(ptr, dst, row, sd, bst)
        frontier = set()
        for u in reached:
            for j in range(ptr[u], ptr[u + 1]):
                v = dst[j]
                if row[j] == BOOST and v not in reached:
                    frontier.add(v)
        memo = {}
        for ci, c in enumerate(cands):
            if c not in frontier:
                continue
            if c not in memo:
                seen = {c}
                q = deque([c])
                while q:
                    u = q.popleft()
                    for j in range(ptr[u], ptr[u + 1]):
                        v = dst[j]
                        if v in seen or v in reached:
                            continue
                        st = row[j]
                        if st == LIVE or (st == BOOST and bst[v]):
                            seen.add(v)
                            q.append(v)
                memo[c] = len(seen)
            totals[ci] += memo[c]
    return totals


def gamma_alpha_scan(values, group_of, budgets, zero_tol):
    """Minimum gain ratios over all budget-respecting (S, T, e) triples.

    ``values`` is the objective tabulated on all ``2**n`` bitmasks.  Returns
    ``(gamma_min, alpha_min)`` where ``gamma_min`` is the least
    ``gain(S)/gain(T)`` over triples with ``gain(T) > zero_tol`` and
    ``alpha_min`` the least ``gain(T)/gain(S)`` over triples with
    ``gain(S) > zero_tol``; gains at or below ``zero_tol`` count as zero.
    Either is ``inf`` when no triple qualifies.
    """
    f = np.asarray(values, dtype=float)
    n = len(group_of)
    N = 1 << n
    masks = np.arange(N, dtype=np.int64)

    G = np.full((N, n), np.nan)
    for e in range(n):
        bit = 1 << e
        out = (masks & bit) == 0
        G[out, e] = f[masks[out] | bit] - f[masks[out]]
    G = np.where(G > zero_tol, G, np.where(np.isnan(G), np.nan, 0.0))

    ok = np.ones(N, dtype=bool)
    for i, b in enumerate(budgets):
        gm = 0
        for e in range(n):
            if group_of[e] == i:
                gm |= 1 << e
        cnt = np.zeros(N, dtype=np.int64)
        for e in range(n):
            if gm >> e & 1:
                cnt += (masks >> e) & 1
        ok &= cnt <= b

    gmin = np.inf
    amin = np.inf
    for D in masks[ok]:
        S = masks[(masks & D) == 0]
        T = S | D
        gS = G[S]
        gT = G[T]
        valid = ~np.isnan(gT)
        with np.errstate(divide="ignore", invalid="ignore"):
            pos_t = valid & (gT > 0)
            if pos_t.any():
                gmin = min(gmin, float(np.min(gS[pos_t] / gT[pos_t])))
            pos_s = valid & (gS > 0)
            if pos_s.any():
                amin = min(amin, float(np.min(gT[pos_s] / gS[pos_s])))
    return gmin, amin


def jacobi_eigenvalues(A, tol, max_sweeps):
    """Cyclic Jacobi; returns ``(eigenvalues unsorted, sweeps used)``."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    for sweep in range(max_sweeps + 1):
        off = np.abs(A - np.diag(np.diag(A)))
        if n < 2 or off.max() < tol:
            return np.diag(A).copy(), sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < tol * 1e-3:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
    return np.diag(A).copy(), -1
