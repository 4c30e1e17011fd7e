# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled elimination kernels; see _kernels_py for the reference versions."""

from libc.stdlib cimport malloc, free


def bareiss_rank(rows):
    cdef list M = [list(r) for r in rows]
    cdef Py_ssize_t n = len(M)
    cdef Py_ssize_t m = len(M[0]) if n else 0
    cdef Py_ssize_t k, i, j, pi, pj
    cdef list Mi, rk
    cdef object prev = 1, pk, a
    cdef int rank = 0
    for k in range(min(n, m)):
        pi = -1
        for i in range(k, n):
            Mi = <list>M[i]
            for j in range(k, m):
                if Mi[j]:
                    pi = i
                    pj = j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        if pi != k:
            M[pi], M[k] = M[k], M[pi]
        if pj != k:
            for Mi in M:
                Mi[pj], Mi[k] = Mi[k], Mi[pj]
        rk = <list>M[k]
        pk = rk[k]
        for i in range(k + 1, n):
            Mi = <list>M[i]
            a = Mi[k]
            if a:
                for j in range(k + 1, m):
                    Mi[j] = (pk * Mi[j] - a * rk[j]) // prev
            else:
                for j in range(k + 1, m):
                    Mi[j] = (pk * Mi[j]) // prev
            Mi[k] = 0
        prev = pk
        rank += 1
    return rank


def bareiss_det(rows):
    cdef list M = [list(r) for r in rows]
    cdef Py_ssize_t n = len(M)
    cdef Py_ssize_t k, i, j, pi, pj
    cdef list Mi, rk
    cdef object prev = 1, pk, a
    cdef int sign = 1
    if n == 0:
        return 1
    for k in range(n):
        pi = -1
        for i in range(k, n):
            Mi = <list>M[i]
            for j in range(k, n):
                if Mi[j]:
                    pi = i
                    pj = j
                    break
            if pi >= 0:
                break
        if pi < 0:
            return 0
        if pi != k:
            M[pi], M[k] = M[k], M[pi]
            sign = -sign
        if pj != k:
            for Mi in M:
                Mi[pj], Mi[k] = Mi[k], Mi[pj]
            sign = -sign
        rk = <list>M[k]
        pk = rk[k]
        for i in range(k + 1, n):
            Mi = <list>M[i]
            a = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (pk * Mi[j] - a * rk[j]) // prev
            Mi[k] = 0
        prev = pk
    return sign * M[n - 1][n - 1]


cdef long long _inv_mod(long long x, long long p):
    cdef long long r = 1, e = p - 2
    x %= p
    while e:
        if e & 1:
            r = r * x % p
        x = x * x % p
        e >>= 1
    return r


def rank_mod_p(rows, long long p):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t m = len(rows[0]) if n else 0
    if n == 0 or m == 0:
        return 0
    cdef long long *A = <long long *> malloc(n * m * sizeof(long long))
    if A == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, c, piv
    cdef long long f, inv, t
    cdef int rank = 0
    try:
        for i in range(n):
            r = rows[i]
            for j in range(m):
                A[i * m + j] = r[j] % p
        for c in range(m):
            piv = -1
            for i in range(rank, n):
                if A[i * m + c]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(c, m):
                    t = A[piv * m + j]
                    A[piv * m + j] = A[rank * m + j]
                    A[rank * m + j] = t
            inv = _inv_mod(A[rank * m + c], p)
            for j in range(c, m):
                A[rank * m + j] = A[rank * m + j] * inv % p
            for i in range(rank + 1, n):
                f = A[i * m + c]
                if f:
                    for j in range(c, m):
                        A[i * m + j] = (A[i * m + j] - f * A[rank * m + j]) % p
                        if A[i * m + j] < 0:
                            A[i * m + j] += p
            rank += 1
            if rank == n:
                break
    finally:
        free(A)
    return rank
