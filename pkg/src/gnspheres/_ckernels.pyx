# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometric-product kernels for Cl^n with e_i^2 = -1.

Blades are bitmasks: bit k set means e_{k+1} is a factor.
"""
import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline unsigned long long _mask(unsigned long long b) noexcept nogil:
    # bit k of the mask is the parity of the bits of b at positions <= k
    cdef unsigned long long x = b
    x ^= x << 1
    x ^= x << 2
    x ^= x << 4
    x ^= x << 8
    x ^= x << 16
    x ^= x << 32
    return x


cdef inline int _sign_masked(unsigned long long a, unsigned long long mb) noexcept nogil:
    return -1 if (__builtin_popcountll(a & mb) & 1) else 1


cdef inline int _sign(unsigned long long a, unsigned long long b) noexcept nogil:
    return _sign_masked(a, _mask(b))


def blade_sign(unsigned long long a, unsigned long long b):
    return _sign(a, b)


def gp_int64(const long long[:] ia, const long long[:] va,
             const long long[:] ib, const long long[:] vb, int n):
    """Sparse integer product accumulated into a dense array of length 2**n."""
    out = np.zeros(1 << n, dtype=np.int64)
    cdef long long[:] o = out
    masks = np.empty(ib.shape[0], dtype=np.uint64)
    cdef unsigned long long[:] mb = masks
    cdef Py_ssize_t p, q
    cdef unsigned long long a, b
    cdef long long x
    with nogil:
        for q in range(ib.shape[0]):
            mb[q] = _mask(<unsigned long long>ib[q])
        for p in range(ia.shape[0]):
            a = <unsigned long long>ia[p]
            x = va[p]
            if x == 0:
                continue
            for q in range(ib.shape[0]):
                b = <unsigned long long>ib[q]
                o[a ^ b] += _sign_masked(a, mb[q]) * x * vb[q]
    return out


def gp_float64(const double[:] a, const double[:] b):
    """Dense float product of two coefficient arrays of length 2**n."""
    cdef Py_ssize_t m = a.shape[0]
    out = np.zeros(m, dtype=np.float64)
    cdef double[:] o = out
    nz = np.flatnonzero(np.asarray(b))
    cdef Py_ssize_t[:] jb = nz.astype(np.intp)
    masks = np.zeros(len(nz), dtype=np.uint64)
    cdef unsigned long long[:] mb = masks
    cdef Py_ssize_t i, j, q
    cdef double x
    with nogil:
        for q in range(jb.shape[0]):
            mb[q] = _mask(jb[q])
        for i in range(m):
            x = a[i]
            if x == 0.0:
                continue
            for q in range(jb.shape[0]):
                j = jb[q]
                o[i ^ j] += _sign_masked(i, mb[q]) * x * b[j]
    return out
