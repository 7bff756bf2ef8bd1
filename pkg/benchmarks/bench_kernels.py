"""Compare the compiled kernels against the pure-Python fallback.

Run with:  python3 benchmarks/bench_kernels.py
"""

import random
import time

import numpy as np

from corpusforge._kernels import _fallback

try:
    from corpusforge._kernels import _native
except ImportError:
    _native = None


def time_call(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_levenshtein(backend):
    rng = random.Random(0)
    alphabet = "abcdefghij "
    pairs = [
        (
            "".join(rng.choice(alphabet) for _ in range(rng.randrange(10, 60))),
            "".join(rng.choice(alphabet) for _ in range(rng.randrange(10, 60))),
        )
        for _ in range(2000)
    ]

    def run():
        for a, b in pairs:
            backend.levenshtein(a, b)
            backend.indel_distance(a, b)

    return time_call(run)


def bench_sgns(backend):
    rng = np.random.default_rng(0)
    vocab, dim = 500, 64
    words = rng.integers(0, vocab, 20000).astype(np.int32)
    offsets = np.arange(0, 20001, 20, dtype=np.int32)
    counts = np.bincount(words, minlength=vocab).astype(float)
    powed = counts ** 0.75
    cdf = np.cumsum(powed / powed.sum())
    cdf[-1] = 1.0
    keep = np.full(vocab, 0.9)

    def run():
        syn0 = (np.random.default_rng(1).random((vocab, dim)) - 0.5) / dim
        syn1 = np.zeros((vocab, dim))
        backend.sgns_train(words, offsets, syn0, syn1, cdf, keep,
                           5, 5, 1, 0.025, 42)

    return time_call(run, repeats=2)


def main():
    backends = [("fallback", _fallback)]
    if _native is not None:
        backends.append(("native", _native))
    else:
        print("native extension not built; showing fallback only")

    results = {}
    for name, backend in backends:
        lev = bench_levenshtein(backend)
        sgns = bench_sgns(backend)
        results[name] = (lev, sgns)
        print(f"{name:>8}: levenshtein batch {lev * 1e3:8.1f} ms   "
              f"sgns epoch {sgns * 1e3:8.1f} ms")

    if len(results) == 2:
        f, n = results["fallback"], results["native"]
        print(f"speedup : levenshtein {f[0] / n[0]:6.1f}x   "
              f"sgns {f[1] / n[1]:6.1f}x")


if __name__ == "__main__":
    main()
