# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-lattice kernels; see ``_pykernels`` for the contracts."""

import numpy as np
cimport numpy as cnp

BACKEND = "cython"

ctypedef cnp.uint8_t u8
ctypedef cnp.int32_t i32


def tables_from_leq(const u8[:, :] leq):
    cdef Py_ssize_t n = leq.shape[0]
    meet_arr = np.zeros((n, n), dtype=np.int32)
    join_arr = np.zeros((n, n), dtype=np.int32)
    cdef i32[:, :] meet = meet_arr
    cdef i32[:, :] join = join_arr
    cdef Py_ssize_t i, j, k, m
    cdef int best, least, ok
    for i in range(n):
        for j in range(i, n):
            best = -1
            for k in range(n):
                if not (leq[k, i] and leq[k, j]):
                    continue
                ok = 1
                for m in range(n):
                    if leq[m, i] and leq[m, j] and not leq[m, k]:
                        ok = 0
                        break
                if ok:
                    best = <int>k
                    break
            if best < 0:
                return (np.zeros((n, n), dtype=np.int32), np.zeros((n, n), dtype=np.int32), 1, i, j)
            least = -1
            for k in range(n):
                if not (leq[i, k] and leq[j, k]):
                    continue
                ok = 1
                for m in range(n):
                    if leq[i, m] and leq[j, m] and not leq[k, m]:
                        ok = 0
                        break
                if ok:
                    least = <int>k
                    break
            if least < 0:
                return (np.zeros((n, n), dtype=np.int32), np.zeros((n, n), dtype=np.int32), 2, i, j)
            meet[i, j] = best
            meet[j, i] = best
            join[i, j] = least
            join[j, i] = least
    return (meet_arr, join_arr, 0, -1, -1)


def modular_failure(const u8[:, :] leq, const i32[:, :] meet, const i32[:, :] join):
    cdef Py_ssize_t n = leq.shape[0]
    cdef Py_ssize_t a, b, c
    for a in range(n):
        for c in range(n):
            if not leq[c, a]:
                continue
            for b in range(n):
                if meet[a, join[b, c]] != join[meet[a, b], c]:
                    return (a, b, c)
    return None


def distributive_failure(const i32[:, :] meet, const i32[:, :] join):
    cdef Py_ssize_t n = meet.shape[0]
    cdef Py_ssize_t a, b, c
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if meet[a, join[b, c]] != join[meet[a, b], meet[a, c]]:
                    return (a, b, c)
    return None


def uvp_failure(const i32[:, :] meet, const i32[:, :] join):
    cdef Py_ssize_t n = meet.shape[0]
    cdef Py_ssize_t d, e, f
    cdef i32 p, q, u, v
    for d in range(n):
        for e in range(n):
            for f in range(n):
                p = join[join[meet[d, e], meet[e, f]], meet[f, d]]
                q = meet[meet[join[d, e], join[e, f]], join[f, d]]
                u = join[meet[d, q], p]
                v = join[meet[e, q], p]
                if meet[u, v] != p:
                    return (d, e, f)
    return None


def sublattice_closed(const i32[:, :] meet, const i32[:, :] join, idx):
    cdef Py_ssize_t n = meet.shape[0]
    cdef Py_ssize_t i, j, k = len(idx)
    cdef cnp.uint8_t[::1] member = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t[::1] items = np.asarray(idx, dtype=np.intp)
    for i in range(k):
        member[items[i]] = 1
    for i in range(k):
        for j in range(k):
            if not member[meet[items[i], items[j]]] or not member[join[items[i], items[j]]]:
                return False
    return True


def lemma_failures(const u8[:, :] leq, const i32[:, :] meet, const i32[:, :] join):
    cdef Py_ssize_t n = leq.shape[0]
    cdef Py_ssize_t a, b, c
    cdef i32 lhs, dist, mod
    cdef long f0 = 0, f1 = 0, f2 = 0, f3 = 0, f4 = 0
    cdef bint le
    for a in range(n):
        for b in range(n):
            le = leq[a, b] != 0
            if le != (join[a, b] == b) or le != (meet[a, b] == a):
                f0 += 1
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = meet[a, join[b, c]]
                dist = join[meet[a, b], meet[a, c]]
                if not leq[dist, lhs]:
                    f1 += 1
                if lhs != dist and not leq[dist, lhs]:
                    f4 += 1
                if leq[c, a]:
                    mod = join[meet[a, b], c]
                    if not leq[mod, lhs]:
                        f2 += 1
                    if lhs != mod and not leq[mod, lhs]:
                        f3 += 1
    return [f0, f1, f2, f3, f4]
