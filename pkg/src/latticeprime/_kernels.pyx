# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t

cnp.import_array()

BACKEND = "cython"


def sieve_segment(long long lo, long long hi, base_primes):
    cdef Py_ssize_t count = max(0, (hi - lo + 1) // 2)
    out = np.ones(count, dtype=np.uint8)
    if count == 0:
        return out
    cdef uint8_t[::1] flags = out
    cdef const int64_t[::1] base = np.ascontiguousarray(base_primes, dtype=np.int64)
    cdef Py_ssize_t nb = base.shape[0], i
    cdef long long p, pp, start, j
    with nogil:
        for i in range(nb):
            p = base[i]
            if p == 2:
                continue
            pp = p * p
            if pp >= hi:
                break
            start = ((lo + p - 1) // p) * p
            if start < pp:
                start = pp
            if start % 2 == 0:
                start += p
            j = (start - lo) // 2
            while j < count:
                flags[j] = 0
                j += p
        if lo == 1:
            flags[0] = 0
    return out


def shift_match(values, long long z):
    cdef const int64_t[::1] v = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t n = v.shape[0], i, j = 0
    out = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef long long t
    with nogil:
        for i in range(n):
            t = v[i] + z
            while j < n and v[j] < t:
                j += 1
            if j == n:
                break
            if v[j] == t:
                o[i] = j
    return out


def pair_labels(lo_values, long long z, long long q):
    cdef const int64_t[::1] v = np.ascontiguousarray(lo_values, dtype=np.int64)
    cdef Py_ssize_t n = v.shape[0], i
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef long long a, b, zq = z % q
    if q >= 3037000499:
        return np.array([(int(x) % q) * ((int(x) + z) % q) % q for x in v], dtype=np.int64)
    with nogil:
        for i in range(n):
            a = v[i] % q
            b = (a + zq) % q
            o[i] = (a * b) % q
    return out
