# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_fallback.py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, INFINITY

cnp.import_array()

ctypedef cnp.int64_t i64


cdef Py_ssize_t _bfs(const i64[::1] ptr, const i64[::1] dst,
                     const signed char[:, ::1] state, Py_ssize_t s,
                     const i64[::1] seeds, const unsigned char[::1] boosted,
                     i64[::1] mark, i64 token, i64[::1] queue) noexcept nogil:
    cdef Py_ssize_t head = 0, tail = 0, k, j
    cdef i64 u, v
    cdef signed char st
    for k in range(seeds.shape[0]):
        v = seeds[k]
        if mark[v] != token:
            mark[v] = token
            queue[tail] = v
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for j in range(ptr[u], ptr[u + 1]):
            v = dst[j]
            if mark[v] == token:
                continue
            st = state[s, j]
            if st == 0 or (st == 1 and boosted[v]):
                mark[v] = token
                queue[tail] = v
                tail += 1
    return tail


def reach_counts(const i64[::1] out_ptr, const i64[::1] out_dst,
                 const signed char[:, ::1] state, const i64[::1] seeds,
                 const unsigned char[::1] boosted):
    cdef Py_ssize_t n = out_ptr.shape[0] - 1
    cdef Py_ssize_t ns = state.shape[0], s
    cdef i64[::1] mark = np.zeros(n, dtype=np.int64)
    cdef i64[::1] queue = np.empty(n, dtype=np.int64)
    out = np.empty(ns, dtype=np.int64)
    cdef i64[::1] out_v = out
    with nogil:
        for s in range(ns):
            out_v[s] = _bfs(out_ptr, out_dst, state, s, seeds, boosted,
                            mark, s + 1, queue)
    return out


def reach_gains(const i64[::1] out_ptr, const i64[::1] out_dst,
                const signed char[:, ::1] state, const i64[::1] seeds,
                const unsigned char[::1] boosted, const i64[::1] candidates):
    cdef Py_ssize_t n = out_ptr.shape[0] - 1
    cdef Py_ssize_t ns = state.shape[0], nc = candidates.shape[0]
    cdef Py_ssize_t s, r, tail, head, tail2, ci, j
    cdef i64 token, token2 = 0, u, v, c
    cdef signed char st
    cdef i64[::1] mark = np.zeros(n, dtype=np.int64)
    cdef i64[::1] front = np.zeros(n, dtype=np.int64)
    cdef i64[::1] memo_tok = np.zeros(n, dtype=np.int64)
    cdef i64[::1] memo = np.zeros(n, dtype=np.int64)
    cdef i64[::1] seen = np.zeros(n, dtype=np.int64)
    cdef i64[::1] queue = np.empty(n, dtype=np.int64)
    cdef i64[::1] queue2 = np.empty(n, dtype=np.int64)
    totals = np.zeros(nc, dtype=np.int64)
    cdef i64[::1] tot = totals
    with nogil:
        for s in range(ns):
            token = s + 1
            tail = _bfs(out_ptr, out_dst, state, s, seeds, boosted, mark, token, queue)
            for r in range(tail):
                u = queue[r]
                for j in range(out_ptr[u], out_ptr[u + 1]):
                    v = out_dst[j]
                    if mark[v] != token and state[s, j] == 1:
                        front[v] = token
            for ci in range(nc):
                c = candidates[ci]
                if front[c] != token:
                    continue
                if memo_tok[c] != token:
                    token2 += 1
                    seen[c] = token2
                    queue2[0] = c
                    head = 0
                    tail2 = 1
                    while head < tail2:
                        u = queue2[head]
                        head += 1
                        for j in range(out_ptr[u], out_ptr[u + 1]):
                            v = out_dst[j]
                            if seen[v] == token2 or mark[v] == token:
                                continue
                            st = state[s, j]
                            if st == 0 or (st == 1 and boosted[v]):
                                seen[v] = token2
                                queue2[tail2] = v
                                tail2 += 1
                    memo_tok[c] = token
                    memo[c] = tail2
                tot[ci] += memo[c]
    return totals


def gamma_alpha_scan(const double[::1] values, const i64[::1] group_of,
                     const i64[::1] budgets, double zero_tol):
    cdef Py_ssize_t n = group_of.shape[0]
    cdef i64 N = (<i64>1) << n
    cdef Py_ssize_t k = budgets.shape[0], i, e
    cdef i64 T, S, D, bit
    cdef double gS, gT, r
    cdef double gmin = INFINITY, amin = INFINITY
    ok_arr = np.ones(N, dtype=np.uint8)
    cdef unsigned char[::1] ok = ok_arr
    cdef i64[::1] cnt = np.zeros(k, dtype=np.int64)
    with nogil:
        for D in range(N):
            for i in range(k):
                cnt[i] = 0
            for e in range(n):
                if (D >> e) & 1:
                    cnt[group_of[e]] += 1
            for i in range(k):
                if cnt[i] > budgets[i]:
                    ok[D] = 0
                    break
        for T in range(N):
            S = T
            while True:
                D = T ^ S
                if ok[D]:
                    for e in range(n):
                        bit = (<i64>1) << e
                        if T & bit:
                            continue
                        gS = values[S | bit] - values[S]
                        gT = values[T | bit] - values[T]
                        if gS <= zero_tol:
                            gS = 0.0
                        if gT <= zero_tol:
                            gT = 0.0
                        if gT > 0.0:
                            r = gS / gT
                            if r < gmin:
                                gmin = r
                        if gS > 0.0:
                            r = gT / gS
                            if r < amin:
                                amin = r
                if S == 0:
                    break
                S = (S - 1) & T
    return gmin, amin


def jacobi_eigenvalues(A_in, double tol, int max_sweeps):
    A_arr = np.array(A_in, dtype=np.float64, order="C")
    cdef double[:, ::1] A = A_arr
    cdef Py_ssize_t n = A.shape[0], p, q, r
    cdef int sweep
    cdef double off, apq, theta, t, c, s, xp, xq
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q and fabs(A[p, q]) > off:
                    off = fabs(A[p, q])
        if n < 2 or off < tol:
            return np.diag(A_arr).copy(), sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if fabs(apq) < tol * 1e-3:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for r in range(n):
                    xp = A[r, p]
                    xq = A[r, q]
                    A[r, p] = c * xp - s * xq
                    A[r, q] = s * xp + c * xq
                for r in range(n):
                    xp = A[p, r]
                    xq = A[q, r]
                    A[p, r] = c * xp - s * xq
                    A[q, r] = s * xp + c * xq
                A[p, q] = 0.0
                A[q, p] = 0.0
    return np.diag(A_arr).copy(), -1
