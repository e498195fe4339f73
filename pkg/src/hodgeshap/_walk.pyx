# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled walker kernel; twin of ``_walk_py``.

Same counter-based stream layout and accumulation order as the pure-Python
module, so both backends produce bitwise-identical contributions.  Keep the
constants in sync.
"""

from libc.stdlib cimport free, malloc

BACKEND = "cython"

cdef extern from *:
    """
    #include <stdint.h>

    static const uint64_t HS_GAMMA = 0x9E3779B97F4A7C15ULL;

    static inline uint64_t hs_mixdown(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static inline uint64_t hs_stream_key(uint64_t seed, uint64_t sample) {
        return hs_mixdown(seed + (sample + 1) * HS_GAMMA);
    }

    static inline int hs_draw(uint64_t key, uint64_t step, int n_players) {
        return (int)(hs_mixdown(key + step * HS_GAMMA) % (uint64_t)n_players);
    }
    """
    unsigned long long hs_mixdown(unsigned long long z) nogil
    unsigned long long hs_stream_key(unsigned long long seed, unsigned long long sample) nogil
    int hs_draw(unsigned long long key, unsigned long long step, int n_players) nogil


def stream_key(seed, sample_index):
    return hs_stream_key(<unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF),
                         <unsigned long long> sample_index)


def draw(key, step, n_players):
    """0-based player toggled at 1-based ``step`` of the keyed walk."""
    return hs_draw(<unsigned long long> key, <unsigned long long> step, <int> n_players)


cdef int _walk_once(const double* vals, int n_players, unsigned long long target,
                    unsigned long long start, unsigned long long key,
                    long long max_steps, double* acc) nogil:
    cdef unsigned long long state = start
    cdef unsigned long long new
    cdef long long step = 0
    cdef int d
    while state != target:
        if step >= max_steps:
            return 1
        step += 1
        d = hs_draw(key, <unsigned long long> step, n_players)
        new = state ^ (1ULL << d)
        acc[d] += vals[new] - vals[state]
        state = new
    return 0


def walk_players(const double[::1] values, int n_players, target, start, seed, sample_index,
                 max_steps, double[::1] out_players):
    """Run one walk to ``target``; per-player contribution sums into
    ``out_players``.  Returns 0, or 1 if the step cap was hit."""
    cdef unsigned long long c_target = <unsigned long long> target
    cdef unsigned long long c_start = <unsigned long long> start
    cdef unsigned long long key = hs_stream_key(
        <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF),
        <unsigned long long> sample_index)
    cdef long long c_max_steps = <long long> max_steps
    cdef double* acc = <double*> malloc(n_players * sizeof(double))
    cdef int status, b
    if acc == NULL:
        raise MemoryError()
    try:
        for b in range(n_players):
            acc[b] = 0.0
        with nogil:
            status = _walk_once(&values[0], n_players, c_target, c_start, key,
                                c_max_steps, acc)
        if status == 0:
            for b in range(n_players):
                out_players[b] = acc[b]
        return status
    finally:
        free(acc)


def walk_batch(const double[::1] values, int n_players, int player, target, start, seed,
               first_sample, n_samples, max_steps, double[::1] out):
    """Fill ``out[k]`` with player ``player``'s contribution on sample
    ``first_sample + k``.

    Returns ``(status, bad_sample, max_efficiency_defect)``; see the
    pure-Python twin for semantics.
    """
    cdef unsigned long long c_target = <unsigned long long> target
    cdef unsigned long long c_start = <unsigned long long> start
    cdef unsigned long long c_seed = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long c_first = <unsigned long long> first_sample
    cdef long long c_samples = <long long> n_samples
    cdef long long c_max_steps = <long long> max_steps
    cdef int p = player - 1
    cdef double span = values[c_target] - values[c_start]
    cdef double max_defect = 0.0
    cdef double total, defect
    cdef double* acc = <double*> malloc(n_players * sizeof(double))
    cdef long long k = 0
    cdef long long bad = -1
    cdef int status = 0
    cdef int b
    if acc == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(c_samples):
                for b in range(n_players):
                    acc[b] = 0.0
                status = _walk_once(&values[0], n_players, c_target, c_start,
                                    hs_stream_key(c_seed, c_first + <unsigned long long> k),
                                    c_max_steps, acc)
                if status != 0:
                    bad = <long long> c_first + k
                    break
                out[k] = acc[p]
                total = 0.0
                for b in range(n_players):
                    total += acc[b]
                defect = total - span
                if defect < 0:
                    defect = -defect
                if defect > max_defect:
                    max_defect = defect
        return status, bad, max_defect
    finally:
        free(acc)
