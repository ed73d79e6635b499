# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cubic-scan kernels; semantics match fuchs2._pykernels exactly."""


def first_assoc_violation(const int[::1] mul, Py_ssize_t n):
    cdef Py_ssize_t x, y, z
    cdef int xy, yz
    for x in range(n):
        for y in range(n):
            xy = mul[x * n + y]
            for z in range(n):
                yz = mul[y * n + z]
                if mul[xy * n + z] != mul[x * n + yz]:
                    return (x, y, z)
    return None


def first_condition_violation(const int[::1] mul, const int[::1] star,
                              Py_ssize_t n, Py_ssize_t a_start=0,
                              a_stop=None):
    cdef Py_ssize_t stop = n if a_stop is None else <Py_ssize_t> a_stop
    cdef Py_ssize_t a, b, c
    cdef int ab, ca, cb, ac, bc, cab, abc
    for a in range(a_start, stop):
        for b in range(n):
            ab = star[a * n + b]
            for c in range(n):
                cab = mul[c * n + ab]
                ca = mul[c * n + a]
                cb = mul[c * n + b]
                if star[cab * n + c] != star[ca * n + cb]:
                    return (a, b, c, 1)
                abc = mul[ab * n + c]
                ac = mul[a * n + c]
                bc = mul[b * n + c]
                if star[abc * n + c] != star[ac * n + bc]:
                    return (a, b, c, 2)
    return None
