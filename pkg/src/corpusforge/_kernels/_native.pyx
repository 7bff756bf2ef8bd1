# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Arithmetic mirrors `_fallback` operation for operation."""

from libc.math cimport exp

import numpy as np

cimport numpy as cnp

ctypedef unsigned long long u64


def levenshtein(a, b):
    """Minimum insert/delete/substitute edits turning `a` into `b`."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] aa = np.frombuffer(
        a.encode("utf-32-le"), dtype=np.int32).copy()
    cdef cnp.ndarray[cnp.int32_t, ndim=1] bb = np.frombuffer(
        b.encode("utf-32-le"), dtype=np.int32).copy()
    cdef int la = aa.shape[0], lb = bb.shape[0]
    if la == 0:
        return lb
    if lb == 0:
        return la
    cdef cnp.ndarray[cnp.int32_t, ndim=1] prev = np.arange(lb + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cur = np.zeros(lb + 1, dtype=np.int32)
    cdef int i, j, cost, best, ca
    for i in range(1, la + 1):
        cur[0] = i
        ca = aa[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ca == bb[j - 1] else 1
            best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            if prev[j - 1] + cost < best:
                best = prev[j - 1] + cost
            cur[j] = best
        prev, cur = cur, prev
    return int(prev[lb])


def indel_distance(a, b):
    """Edit distance with inserts and deletes only (no substitution)."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] aa = np.frombuffer(
        a.encode("utf-32-le"), dtype=np.int32).copy()
    cdef cnp.ndarray[cnp.int32_t, ndim=1] bb = np.frombuffer(
        b.encode("utf-32-le"), dtype=np.int32).copy()
    cdef int la = aa.shape[0], lb = bb.shape[0]
    if la == 0:
        return lb
    if lb == 0:
        return la
    cdef cnp.ndarray[cnp.int32_t, ndim=1] prev = np.zeros(lb + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cur = np.zeros(lb + 1, dtype=np.int32)
    cdef int i, j, ca
    for i in range(1, la + 1):
        ca = aa[i - 1]
        for j in range(1, lb + 1):
            if ca == bb[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = cur[j - 1] if cur[j - 1] >= prev[j] else prev[j]
        prev, cur = cur, prev
        cur[0] = 0
    return la + lb - 2 * int(prev[lb])


cdef inline u64 _mix(u64 *state) nogil:
    cdef u64 z
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _mix_double(u64 *state) nogil:
    return (_mix(state) >> 11) * (1.0 / 9007199254740992.0)


cdef inline int _bisect(double[:] cdf, double r, int n) nogil:
    cdef int lo = 0, hi = n - 1, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if cdf[mid] < r:
            lo = mid + 1
        else:
            hi = mid
    return lo


def sgns_train(int[:] words, int[:] offsets,
               double[:, :] syn0, double[:, :] syn1,
               double[:] neg_cdf, double[:] keep_prob,
               int window, int negatives, int epochs,
               double initial_lr, unsigned long long seed):
    """Skip-gram negative-sampling training loop over an indexed corpus."""
    cdef int n_sent = offsets.shape[0] - 1
    cdef long total_words = <long>words.shape[0] * epochs
    if total_words == 0:
        return
    cdef double min_lr = initial_lr / 100.0
    cdef int dim = syn0.shape[1]
    cdef int n_cdf = neg_cdf.shape[0]
    cdef u64 state = seed ^ <u64>0xD1B54A32D192ED03
    cdef cnp.ndarray[cnp.float64_t, ndim=1] neu1e_arr = np.zeros(dim)
    cdef double[:] neu1e = neu1e_arr
    cdef cnp.ndarray[cnp.int32_t, ndim=1] kept_arr = np.zeros(
        words.shape[0] if words.shape[0] > 0 else 1, dtype=np.int32)
    cdef int[:] kept = kept_arr
    cdef long processed = 0
    cdef int epoch, s, start, end, p, w, nk, i, j, b, lo, hi
    cdef int center, context, target, neg, d
    cdef double lr, r, f, g, sig, label
    for epoch in range(epochs):
        for s in range(n_sent):
            start = offsets[s]
            end = offsets[s + 1]
            processed += end - start
            lr = initial_lr * (1.0 - <double>processed / total_words)
            if lr < min_lr:
                lr = min_lr
            nk = 0
            for p in range(start, end):
                w = words[p]
                if keep_prob[w] >= 1.0:
                    kept[nk] = w
                    nk += 1
                else:
                    r = _mix_double(&state)
                    if r < keep_prob[w]:
                        kept[nk] = w
                        nk += 1
            for i in range(nk):
                center = kept[i]
                b = 1 + <int>(_mix(&state) % <u64>window)
                lo = i - b if i - b > 0 else 0
                hi = i + b + 1 if i + b + 1 < nk else nk
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = kept[j]
                    for d in range(dim):
                        neu1e[d] = 0.0
                    for neg in range(negatives + 1):
                        if neg == 0:
                            target = context
                            label = 1.0
                        else:
                            r = _mix_double(&state)
                            target = _bisect(neg_cdf, r, n_cdf)
                            if target == context:
                                continue
                            label = 0.0
                        f = 0.0
                        for d in range(dim):
                            f += syn0[center, d] * syn1[target, d]
                        if f > 30.0:
                            sig = 1.0
                        elif f < -30.0:
                            sig = 0.0
                        else:
                            sig = 1.0 / (1.0 + exp(-f))
                        g = (label - sig) * lr
                        for d in range(dim):
                            neu1e[d] += g * syn1[target, d]
                        for d in range(dim):
                            syn1[target, d] += g * syn0[center, d]
                    for d in range(dim):
                        syn0[center, d] += neu1e[d]
