# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the solver's inner loops.

Mirrors colmedian._pykernels; see that module for the semantics.  The heavy
loops release the GIL so the thread-pool workers actually run in parallel.
"""

import numpy as np


def evaluate_partition(const double[:, ::1] dcf, const double[:, ::1] dff,
                       const long long[::1] cell_start,
                       const long long[::1] cell_clients,
                       const double[::1] cell_cost,
                       const long long[::1] a_idx, const long long[::1] b_idx,
                       double eps, long long ell, double d_guess):
    cdef Py_ssize_t m = dff.shape[0]
    cdef Py_ssize_t n = dcf.shape[0]
    cdef Py_ssize_t n_a = a_idx.shape[0]
    cdef Py_ssize_t n_b = b_idx.shape[0]
    cdef double inf = float("inf")
    cdef double threshold = eps * d_guess / (3.0 * ell * ell)

    marg_arr = np.empty(n_a, dtype=np.float64)
    acc_arr = np.empty(m, dtype=np.float64)
    in_r_arr = np.empty(m, dtype=np.uint8)
    taken_arr = np.zeros(n_a, dtype=np.uint8)
    closed_arr = np.empty(ell, dtype=np.int64)
    cdef double[::1] marg = marg_arr
    cdef double[::1] acc = acc_arr
    cdef unsigned char[::1] in_r = in_r_arr
    cdef unsigned char[::1] taken = taken_arr
    cdef long long[::1] closed = closed_arr

    cdef Py_ssize_t ai, i, j, t, ci, best_j, add, best_ai
    cdef long long f, g, c
    cdef long long r_size, finite
    cdef double s_f, bd, total, cost, best_m
    cdef bint feasible = True

    with nogil:
        for ai in range(n_a):
            f = a_idx[ai]
            s_f = inf
            for i in range(n_b):
                if dff[f, b_idx[i]] < s_f:
                    s_f = dff[f, b_idx[i]]
            r_size = 0
            for j in range(m):
                in_r[j] = 0
            for i in range(n_a):
                g = a_idx[i]
                if dff[f, g] < s_f:
                    in_r[g] = 1
                    r_size += 1
            if in_r[f] == 0:
                in_r[f] = 1
                r_size += 1
            marg[ai] = inf
            while r_size <= ell:
                for j in range(m):
                    acc[j] = 0.0
                for ci in range(cell_start[f], cell_start[f + 1]):
                    c = cell_clients[ci]
                    bd = inf
                    best_j = -1
                    for j in range(m):
                        if in_r[j] == 0 and dcf[c, j] < bd:
                            bd = dcf[c, j]
                            best_j = j
                    acc[best_j] += bd
                add = -1
                for i in range(n_a):
                    g = a_idx[i]
                    if in_r[g] == 0 and acc[g] > threshold:
                        add = i
                        break
                if add < 0:
                    total = 0.0
                    for j in range(m):
                        total += acc[j]
                    marg[ai] = total - cell_cost[f]
                    break
                in_r[a_idx[add]] = 1
                r_size += 1

        # greedy: the ell smallest (marginal, facility) anchors
        finite = 0
        for ai in range(n_a):
            if marg[ai] != inf:
                finite += 1
        if finite < ell or n_a < ell:
            feasible = False
        else:
            for t in range(ell):
                best_m = inf
                best_ai = -1
                for ai in range(n_a):
                    if taken[ai] == 0 and marg[ai] < best_m:
                        best_m = marg[ai]
                        best_ai = ai
                taken[best_ai] = 1
                closed[t] = a_idx[best_ai]   # a_idx ascending: ties resolve low

    if not feasible:
        return False, None, inf

    closed_arr.sort()
    cdef long long[::1] closed_sorted = closed_arr
    mask_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] closed_mask = mask_arr
    cost = 0.0
    with nogil:
        for t in range(ell):
            closed_mask[closed_sorted[t]] = 1
        for ci in range(n):
            bd = inf
            for j in range(m):
                if closed_mask[j] == 0 and dcf[ci, j] < bd:
                    bd = dcf[ci, j]
            cost += bd
    return True, closed_arr, cost


def exhaustive_best(const double[:, ::1] dcf, Py_ssize_t m, Py_ssize_t ell):
    """Cheapest ell-subset to close, lexicographically-first on ties."""
    cdef Py_ssize_t n = dcf.shape[0]
    cdef double inf = float("inf")
    if ell == 0:
        best0_arr = np.empty(0, dtype=np.int64)
        return best0_arr, _all_open_cost(dcf)

    idx_arr = np.arange(ell, dtype=np.int64)
    best_arr = np.empty(ell, dtype=np.int64)
    mask_arr = np.zeros(m, dtype=np.uint8)
    cdef long long[::1] idx = idx_arr
    cdef long long[::1] best = best_arr
    cdef unsigned char[::1] closed = mask_arr

    cdef Py_ssize_t t, u, c, j
    cdef double best_cost = inf, cost, bd
    cdef bint more = True

    with nogil:
        while more:
            for j in range(m):
                closed[j] = 0
            for t in range(ell):
                closed[idx[t]] = 1
            cost = 0.0
            for c in range(n):
                bd = inf
                for j in range(m):
                    if closed[j] == 0 and dcf[c, j] < bd:
                        bd = dcf[c, j]
                cost += bd
            if cost < best_cost:
                best_cost = cost
                for t in range(ell):
                    best[t] = idx[t]
            t = ell - 1
            while t >= 0 and idx[t] == m - ell + t:
                t -= 1
            if t < 0:
                more = False
            else:
                idx[t] += 1
                for u in range(t + 1, ell):
                    idx[u] = idx[u - 1] + 1
    return best_arr, best_cost


cdef double _all_open_cost(const double[:, ::1] dcf) nogil:
    cdef Py_ssize_t n = dcf.shape[0]
    cdef Py_ssize_t m = dcf.shape[1]
    cdef Py_ssize_t c, j
    cdef double bd, cost = 0.0
    for c in range(n):
        bd = dcf[c, 0]
        for j in range(1, m):
            if dcf[c, j] < bd:
                bd = dcf[c, j]
        cost += bd
    return cost
