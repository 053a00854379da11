# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scan kernels.

Mirrors _purecore exactly (same arguments, same results in the same
order); kernels.py selects whichever module imported successfully.
All table values are nonnegative and bounded well inside 64 bits, so
plain C integer arithmetic reproduces the Python semantics.
"""

from libc.stdlib cimport free, malloc


cdef void _descend(Py_ssize_t k, Py_ssize_t n, long long qacc,
                   long long *ords, long long *qq, long long *bb,
                   long long *dots_stack, long long *x, long long two_e,
                   list out):
    cdef Py_ssize_t c, j
    cdef long long here
    cdef long long *dots = dots_stack + k * n
    cdef long long *next_dots = dots_stack + (k + 1) * n
    if k == n:
        if qacc % two_e == 0:
            out.append(tuple([x[j] for j in range(n)]))
        return
    for c in range(ords[k]):
        x[k] = c
        here = qacc + c * c * qq[k] + 2 * c * dots[k]
        for j in range(n):
            next_dots[j] = dots[j] + c * bb[k * n + j]
        _descend(k + 1, n, here, ords, qq, bb, dots_stack, x, two_e, out)
    x[k] = 0


def iso_scan(list orders, list q2, list b1, long long two_e):
    """All coefficient tuples x (0 <= x_i < orders[i]) with

        sum_i x_i^2 q2[i] + 2 sum_{i<j} x_i x_j b1[i][j]  =  0  (mod two_e)

    where q2[i] = q(g_i) * E and b1[i][j] = b(g_i, g_j) * E for
    E = two_e / 2.
    """
    cdef Py_ssize_t n = len(orders)
    if n == 0:
        return [()]
    cdef list out = []
    cdef long long *ords = <long long *> malloc(n * sizeof(long long))
    cdef long long *qq = <long long *> malloc(n * sizeof(long long))
    cdef long long *bb = <long long *> malloc(n * n * sizeof(long long))
    cdef long long *dots = <long long *> malloc(
        (n + 1) * n * sizeof(long long))
    cdef long long *x = <long long *> malloc(n * sizeof(long long))
    if ords == NULL or qq == NULL or bb == NULL or dots == NULL or x == NULL:
        free(ords); free(qq); free(bb); free(dots); free(x)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef list row
    try:
        for i in range(n):
            ords[i] = orders[i]
            qq[i] = q2[i]
            x[i] = 0
            dots[i] = 0
            row = b1[i]
            for j in range(n):
                bb[i * n + j] = row[j]
        _descend(0, n, 0, ords, qq, bb, dots, x, two_e, out)
    finally:
        free(ords); free(qq); free(bb); free(dots); free(x)
    return out


def orth_scan(list pool, list bv, long long e):
    """Elements w of the pool with sum_j bv[j] * w[j] = 0 (mod e)."""
    cdef Py_ssize_t n = len(bv)
    cdef list out = []
    cdef tuple w
    cdef long long total
    cdef Py_ssize_t j
    cdef long long *bvv = <long long *> malloc(
        (n if n else 1) * sizeof(long long))
    if bvv == NULL:
        raise MemoryError()
    try:
        for j in range(n):
            bvv[j] = bv[j]
        for w in pool:
            total = 0
            for j in range(n):
                total += bvv[j] * <long long> w[j]
            if total % e == 0:
                out.append(w)
    finally:
        free(bvv)
    return out
