# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""GMP-backed Berkowitz recursion.

Same contract as ``_pure.berkowitz``; inputs and outputs are Python ints,
all arithmetic in between runs on ``mpz_t`` values.
"""

from libc.stdlib cimport malloc, free

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct* mpz_ptr
    ctypedef const __mpz_struct* mpz_srcptr
    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_srcptr)
    void mpz_set_si(mpz_ptr, long)
    int mpz_set_str(mpz_ptr, const char*, int)
    char* mpz_get_str(char*, int, mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)
    void mpz_neg(mpz_ptr, mpz_srcptr)
    void mpz_addmul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    int mpz_sgn(mpz_srcptr)
    int mpz_fits_slong_p(mpz_srcptr)
    long mpz_get_si(mpz_srcptr)

_SMALL = 1 << 62


cdef __mpz_struct* _alloc(Py_ssize_t n) except NULL:
    cdef __mpz_struct* arr = <__mpz_struct*> malloc(max(n, 1) * sizeof(__mpz_struct))
    if arr == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        mpz_init(&arr[i])
    return arr


cdef void _release(__mpz_struct* arr, Py_ssize_t n):
    cdef Py_ssize_t i
    if arr == NULL:
        return
    for i in range(n):
        mpz_clear(&arr[i])
    free(arr)


cdef int _load(mpz_ptr z, object x) except -1:
    if -_SMALL < x < _SMALL:
        mpz_set_si(z, <long> x)
        return 0
    cdef bytes s = format(x, "x").encode("ascii")
    if mpz_set_str(z, s, 16) != 0:
        raise ValueError(f"cannot convert {x!r}")
    return 0


cdef object _dump(mpz_srcptr z):
    if mpz_fits_slong_p(z):
        return mpz_get_si(z)
    cdef size_t size = mpz_sizeinbase(z, 16) + 2
    cdef char* buf = <char*> malloc(size)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_get_str(buf, 16, z)
        return int(buf.decode("ascii"), 16)
    finally:
        free(buf)


def berkowitz(rows):
    """Coefficients ``[1, c_1, ..., c_t]`` of ``det(X*I - A)``."""
    cdef Py_ssize_t t = len(rows)
    cdef Py_ssize_t i, j, k, r, lo, hi
    cdef __mpz_struct* a = NULL
    cdef __mpz_struct* poly = NULL
    cdef __mpz_struct* new = NULL
    cdef __mpz_struct* q = NULL
    cdef __mpz_struct* v = NULL
    cdef __mpz_struct* w = NULL
    cdef __mpz_struct* tmp
    try:
        a = _alloc(t * t)
        poly = _alloc(t + 1)
        new = _alloc(t + 1)
        q = _alloc(t + 1)
        v = _alloc(t)
        w = _alloc(t)
        for i in range(t):
            row = rows[i]
            if len(row) != t:
                raise ValueError("matrix is not square")
            for j in range(t):
                _load(&a[i * t + j], row[j])

        mpz_set_si(&poly[0], 1)
        for k in range(t):
            mpz_set_si(&q[0], 1)
            mpz_neg(&q[1], &a[k * t + k])
            for i in range(k):
                mpz_set(&v[i], &a[i * t + k])
            for j in range(k):
                mpz_set_si(&q[2 + j], 0)
                for i in range(k):
                    mpz_addmul(&q[2 + j], &a[k * t + i], &v[i])
                mpz_neg(&q[2 + j], &q[2 + j])
                if j < k - 1:
                    for r in range(k):
                        mpz_set_si(&w[r], 0)
                        for i in range(k):
                            mpz_addmul(&w[r], &a[r * t + i], &v[i])
                    tmp = v
                    v = w
                    w = tmp
            for i in range(k + 2):
                mpz_set_si(&new[i], 0)
                lo = i - k - 1
                if lo < 0:
                    lo = 0
                hi = i if i < k else k
                for j in range(lo, hi + 1):
                    mpz_addmul(&new[i], &q[i - j], &poly[j])
            tmp = poly
            poly = new
            new = tmp

        return [_dump(&poly[i]) for i in range(t + 1)]
    finally:
        _release(a, t * t)
        _release(poly, t + 1)
        _release(new, t + 1)
        _release(q, t + 1)
        _release(v, t)
        _release(w, t)
