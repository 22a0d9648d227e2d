import numpy as np
import pytest

from woodtex import hashing
from woodtex import _fast


def test_hash_deterministic():
    s = 0xDEADBEEF
    assert hashing.hash_u64(s, [1, 2, 3]) == hashing.hash_u64(s, [1, 2, 3])


def test_hash_distinct_cells():
    s = 42
    assert hashing.hash_u64(s, [0, 0, 0]) != hashing.hash_u64(s, [0, 0, 1])


def test_hash_fold_composes():
    s = 7
    partial = hashing.hash_u64(s, [3, -4])
    full = hashing.hash_u64(s, [3, -4, 9])
    refold = hashing.mix64(partial ^ ((hashing.zigzag(9) + hashing.GOLDEN)
                                      & hashing.MASK64))
    assert full == refold


def test_avalanche_mean_bit_flips():
    # flipping one random input bit flips about half of the 64 output bits
    rng = np.random.default_rng(123)
    trials = 100_000
    total = 0
    for _ in range(trials):
        seed = int(rng.integers(0, 2 ** 63))
        part = int(rng.integers(-2 ** 40, 2 ** 40))
        bit = int(rng.integers(0, 128))
        h0 = hashing.hash_u64(seed, [part])
        if bit < 64:
            h1 = hashing.hash_u64(seed ^ (1 << bit), [part])
        else:
            h1 = hashing.hash_u64(seed, [part ^ (1 << (bit - 64))])
        total += bin(h0 ^ h1).count("1")
    mean = total / trials
    assert abs(mean - 32.0) < 1.0


def test_jitted_hash_matches_reference():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        seed = int(rng.integers(0, 2 ** 64, dtype=np.uint64))
        parts = [int(x) for x in rng.integers(-2 ** 50, 2 ** 50, size=4)]
        ref = hashing.hash_u64(seed, parts)
        h = _fast.hash_start(np.uint64(seed))
        for p in parts:
            h = _fast.hash_fold(h, p)
        assert int(h) == ref


def test_poisson_errors():
    with pytest.raises(ValueError):
        hashing.poisson_count(0.5, 0.0)
    with pytest.raises(ValueError):
        hashing.poisson_count(0.5, -1.0)


def test_poisson_vanishing_intensity():
    for u in (0.0, 0.3, 0.9, 0.999999):
        assert hashing.poisson_count(u, 1e-12) == 0


def _hashed_counts(seed, lam, n):
    import math
    from numba import njit

    @njit(cache=True)
    def run(seed, lam, n, out):
        cap = _fast.poisson_cap(lam)
        p0 = math.exp(-lam)
        h0 = _fast.hash_start(seed)
        for i in range(n):
            out[i] = _fast.poisson_from_u(_fast.u01(_fast.hash_fold(h0, i)),
                                          lam, cap, p0)

    out = np.empty(n, dtype=np.int64)
    run(np.uint64(seed), lam, n, out)
    return out


def test_poisson_mean_and_variance():
    # hashed cells drive the uniforms, exactly as the impulse grid does
    lam = 2.0
    counts = _hashed_counts(99, lam, 1_000_000)
    assert abs(counts.mean() - lam) < 0.005
    assert abs(counts.var() - lam) < 0.02


def test_poisson_jitted_matches_reference():
    rng = np.random.default_rng(5)
    for lam in (0.1, 0.7, 2.0, 9.5):
        cap = _fast.poisson_cap(lam)
        p0 = float(np.exp(-lam))
        for _ in range(500):
            u = float(rng.random())
            assert _fast.poisson_from_u(u, lam, cap, p0) == hashing.poisson_count(u, lam)


def test_split_stream_bits():
    s = (0x1FFFFF) | (0x100000 << 21) | (0x0 << 42) | (1 << 63)
    ux, uy, uz, sign = hashing.split_stream(s)
    assert ux == (2 ** 21 - 1) / 2 ** 21
    assert uy == 0.5
    assert uz == 0.0
    assert sign == 1.0
