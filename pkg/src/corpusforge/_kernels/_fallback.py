"""Pure-Python kernels, bit-compatible with the compiled versions.

Every arithmetic operation here is ordered identically to `_native.pyx`
so that both backends produce byte-identical outputs for the same seed.
"""

import math

_M64 = (1 << 64) - 1


def levenshtein(a, b):
    """Minimum insert/delete/substitute edits turning `a` into `b`."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ca == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev, cur = cur, prev
    return prev[lb]


def indel_distance(a, b):
    """Edit distance with inserts and deletes only (no substitution)."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    # |a| + |b| - 2*LCS(a, b)
    prev = [0] * (lb + 1)
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        ca = a[i - 1]
        for j in range(1, lb + 1):
            if ca == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = cur[j - 1] if cur[j - 1] >= prev[j] else prev[j]
        prev, cur = cur, prev
        cur[0] = 0
    return la + lb - 2 * prev[lb]


def _next_u64(state):
    state = (state + 0x9E3779B97F4A7C15) & _M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    z = z ^ (z >> 31)
    return state, z


def _next_double(state):
    state, z = _next_u64(state)
    return state, (z >> 11) * (1.0 / 9007199254740992.0)


def sgns_train(words, offsets, syn0, syn1, neg_cdf, keep_prob,
               window, negatives, epochs, initial_lr, seed):
    """Skip-gram negative-sampling training loop over an indexed corpus.

    `words` is the whole corpus as vocab indices; `offsets` delimits
    sentences (len = n_sentences + 1). `syn0`/`syn1` are updated in place.
    """
    n_sent = len(offsets) - 1
    total_words = len(words) * epochs
    if total_words == 0:
        return
    min_lr = initial_lr / 100.0
    dim = syn0.shape[1]
    n_cdf = len(neg_cdf)
    state = (seed ^ 0xD1B54A32D192ED03) & _M64
    neu1e = [0.0] * dim
    processed = 0
    for _epoch in range(epochs):
        for s in range(n_sent):
            start = offsets[s]
            end = offsets[s + 1]
            processed += end - start
            lr = initial_lr * (1.0 - processed / total_words)
            if lr < min_lr:
                lr = min_lr
            kept = []
            for p in range(start, end):
                w = int(words[p])
                if keep_prob[w] >= 1.0:
                    kept.append(w)
                else:
                    state, r = _next_double(state)
                    if r < keep_prob[w]:
                        kept.append(w)
            nk = len(kept)
            for i in range(nk):
                center = kept[i]
                state, z = _next_u64(state)
                b = 1 + int(z % window)
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
                            state, r = _next_double(state)
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
                            sig = 1.0 / (1.0 + math.exp(-f))
                        g = (label - sig) * lr
                        for d in range(dim):
                            neu1e[d] += g * syn1[target, d]
                        for d in range(dim):
                            syn1[target, d] += g * syn0[center, d]
                    for d in range(dim):
                        syn0[center, d] += neu1e[d]


def _bisect(cdf, r, n):
    lo = 0
    hi = n - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cdf[mid] < r:
            lo = mid + 1
        else:
            hi = mid
    return lo
