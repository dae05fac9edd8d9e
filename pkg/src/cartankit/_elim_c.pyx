# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bareiss elimination on int64 with overflow detection.

Raises OverflowError as soon as an input or intermediate entry leaves the
int64 range; the caller then reruns the exact Python kernel.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline int ck_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int ck_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int ck_mul(long long a, long long b, long long *r) nogil
    int ck_sub(long long a, long long b, long long *r) nogil


cdef int _eliminate(int64_t *m, Py_ssize_t nrows, Py_ssize_t ncols,
                    Py_ssize_t *piv_cols, Py_ssize_t *rank_out) nogil:
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef int64_t prev = 1, piv, f, tmp
    cdef long long a, b, d
    cdef int64_t *prow
    cdef int64_t *row
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p * ncols + c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            for j in range(ncols):
                tmp = m[p * ncols + j]
                m[p * ncols + j] = m[r * ncols + j]
                m[r * ncols + j] = tmp
        prow = m + r * ncols
        piv = prow[c]
        for i in range(r + 1, nrows):
            row = m + i * ncols
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(c + 1, ncols):
                        if row[j] != 0:
                            if ck_mul(row[j], piv, &a):
                                return 1
                            row[j] = a // prev
            else:
                for j in range(c + 1, ncols):
                    if ck_mul(piv, row[j], &a):
                        return 1
                    if ck_mul(f, prow[j], &b):
                        return 1
                    if ck_sub(a, b, &d):
                        return 1
                    row[j] = d // prev
                row[c] = 0
        prev = piv
        piv_cols[r] = c
        r += 1
    rank_out[0] = r
    return 0


def bareiss_echelon(rows, Py_ssize_t ncols):
    """Same contract as the pure-Python ``bareiss_echelon``."""
    cdef Py_ssize_t nrows = len(rows), i, j, rank = 0
    if nrows == 0 or ncols == 0:
        return [], []
    cdef int64_t *m = <int64_t *> malloc(nrows * ncols * sizeof(int64_t))
    cdef Py_ssize_t *piv = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    if m == NULL or piv == NULL:
        free(m)
        free(piv)
        raise MemoryError()
    cdef int status
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = row[j]
        with nogil:
            status = _eliminate(m, nrows, ncols, piv, &rank)
        if status:
            raise OverflowError("int64 overflow in Bareiss elimination")
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(rank)]
        pivots = [piv[i] for i in range(rank)]
    finally:
        free(m)
        free(piv)
    return out, pivots


def bareiss_rank(rows, Py_ssize_t ncols):
    return len(bareiss_echelon(rows, ncols)[1])
