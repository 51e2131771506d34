# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for batched single-iteration coloring trials.

Mirrors sleepcolor._kernels.pure bit for bit (same SplitMix64 streams,
same draw order, same modulo reduction).
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

NAME = "speed"

cdef uint64_t MASK = <uint64_t>0xFFFFFFFFFFFFFFFF
cdef uint64_t GOLDEN = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t ID_SALT = <uint64_t>0xD1342543DE82EF95


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


def trial_counts(ids, indptr, indices, list_indptr, list_values,
                 seed_base, trials):
    """See sleepcolor._kernels.pure.trial_counts."""
    cdef Py_ssize_t n = len(ids)
    cdef Py_ssize_t n_idx = len(indices)
    cdef Py_ssize_t n_vals = len(list_values)
    cdef int64_t *c_ids = <int64_t *>malloc(n * sizeof(int64_t))
    cdef int64_t *c_indptr = <int64_t *>malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *c_indices = <int64_t *>malloc((n_idx if n_idx else 1) * sizeof(int64_t))
    cdef int64_t *c_lptr = <int64_t *>malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *c_lvals = <int64_t *>malloc((n_vals if n_vals else 1) * sizeof(int64_t))
    cdef int64_t *props = <int64_t *>malloc((n if n else 1) * sizeof(int64_t))
    cdef int64_t *counts = <int64_t *>malloc((n if n else 1) * sizeof(int64_t))
    if (c_ids == NULL or c_indptr == NULL or c_indices == NULL or
            c_lptr == NULL or c_lvals == NULL or props == NULL or counts == NULL):
        free(c_ids); free(c_indptr); free(c_indices)
        free(c_lptr); free(c_lvals); free(props); free(counts)
        raise MemoryError()

    cdef Py_ssize_t i, j
    for i in range(n):
        c_ids[i] = ids[i]
        counts[i] = 0
    for i in range(n + 1):
        c_indptr[i] = indptr[i]
        c_lptr[i] = list_indptr[i]
    for i in range(n_idx):
        c_indices[i] = indices[i]
    for i in range(n_vals):
        c_lvals[i] = list_values[i]

    cdef uint64_t base = <uint64_t>(<object>seed_base & ((1 << 64) - 1))
    cdef uint64_t n_trials = <uint64_t>trials
    cdef uint64_t t, seed, s0, state, w
    cdef int64_t p, lo, size
    cdef bint ok

    with nogil:
        for t in range(n_trials):
            seed = base + t
            s0 = mix64(seed ^ GOLDEN)
            for i in range(n):
                state = mix64(s0 ^ (<uint64_t>c_ids[i] * ID_SALT))
                state = state + GOLDEN
                w = mix64(state)
                if w >> 63:
                    props[i] = 0
                    state = state + GOLDEN       # index draw still advances
                else:
                    state = state + GOLDEN
                    w = mix64(state)
                    lo = c_lptr[i]
                    size = c_lptr[i + 1] - lo
                    props[i] = c_lvals[lo + <int64_t>(w % <uint64_t>size)]
            for i in range(n):
                p = props[i]
                if p == 0:
                    continue
                ok = True
                for j in range(c_indptr[i], c_indptr[i + 1]):
                    if props[c_indices[j]] == p:
                        ok = False
                        break
                if ok:
                    counts[i] = counts[i] + 1

    out = [counts[i] for i in range(n)]
    free(c_ids); free(c_indptr); free(c_indices)
    free(c_lptr); free(c_lvals); free(props); free(counts)
    return out
