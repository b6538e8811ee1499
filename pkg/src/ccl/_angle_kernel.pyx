# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo counting kernel.

Must stay arithmetic-identical to _angle_kernel_py.count_nonnegative:
plain ordered multiply/add accumulation, no FMA (the build passes
-ffp-contract=off), so counts match the fallback bit for bit.
"""

import numpy as np

BACKEND = "cython"


def count_nonnegative(double[:, ::1] points, double[:, ::1] facet_coords,
                      double eps):
    """Number of rows of ``points`` whose inner product with every row of
    ``facet_coords`` is >= -eps."""
    cdef Py_ssize_t m = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t k = facet_coords.shape[0]
    cdef Py_ssize_t r, i, j
    cdef double acc
    cdef long long count = 0
    cdef bint ok
    if facet_coords.shape[1] != d:
        raise ValueError("points and facet_coords disagree on dimension")
    with nogil:
        for r in range(m):
            ok = True
            for j in range(k):
                acc = 0.0
                for i in range(d):
                    acc = acc + points[r, i] * facet_coords[j, i]
                if acc < -eps:
                    ok = False
                    break
            if ok:
                count += 1
    return int(count)
