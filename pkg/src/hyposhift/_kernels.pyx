# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free elimination kernels.

Same contracts as ``hyposhift._pykernels``; entries are arbitrary-precision
Python ints, the loops and index bookkeeping run in C.
"""

from libc.stdlib cimport malloc, free


def ldl_psd(list rows):
    cdef Py_ssize_t n = len(rows)
    cdef list a = [list(r) for r in rows]
    cdef Py_ssize_t *alive = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t head = 0, m = n, t, s, i, j, l
    cdef list ai, aj
    cdef object p, prev = 1, aij, v
    if alive == NULL:
        raise MemoryError()
    try:
        for t in range(n):
            alive[t] = t
        while head < m:
            i = alive[head]
            head += 1
            ai = <list> a[i]
            p = ai[i]
            if p < 0:
                return 1, i, p, prev, -1
            if p == 0:
                for t in range(head, m):
                    j = alive[t]
                    if ai[j] != 0:
                        return 1, i, 0, 1, j
                continue
            for t in range(head, m):
                j = alive[t]
                aj = <list> a[j]
                aij = ai[j]
                for s in range(t, m):
                    l = alive[s]
                    v = (p * aj[l] - aij * ai[l]) // prev
                    aj[l] = v
                    (<list> a[l])[j] = v
            prev = p
        return 0, -1, 0, 1, -1
    finally:
        free(alive)


def bareiss_det(list rows):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j, k, r
    cdef list a, ak, ai
    cdef object p, prev = 1, aik
    cdef int sign = 1
    if n == 0:
        return 1
    a = [list(x) for x in rows]
    for k in range(n - 1):
        if (<list> a[k])[k] == 0:
            for r in range(k + 1, n):
                if (<list> a[r])[k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        ak = <list> a[k]
        p = ak[k]
        for i in range(k + 1, n):
            ai = <list> a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (p * ai[j] - aik * ak[j]) // prev
        prev = p
    return sign * (<list> a[n - 1])[n - 1]
