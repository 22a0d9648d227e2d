"""Deterministic 64-bit hashing and hashed random streams.

All pseudo-randomness in the texture engine derives from one fixed hash:
a splitmix-style avalanche finalizer folded left-to-right over the input
parts.  Signed parts go through zig-zag encoding first so that negative
cell indexes do not collide structurally across the origin.

This module is the portable pure-Python reference; `_fast.py` carries
bit-identical jitted twins for the hot loops (cross-checked in tests).
"""

import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(z):
    """Splitmix64 finalizer: full-avalanche permutation of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def zigzag(i):
    """Map a signed integer to unsigned: 0,-1,1,-2,2.. -> 0,1,2,3,4.."""
    return ((i << 1) ^ (i >> 63)) & MASK64


def hash_u64(seed, parts=()):
    """Hash a seed and a sequence of integer parts to a uint64.

    The fold is left-to-right, one finalizer round per part, so
    ``hash_u64(s, [a, b])`` equals folding ``b`` into ``hash_u64(s, [a])``.
    """
    h = mix64((seed & MASK64) + GOLDEN)
    for p in parts:
        h = mix64(h ^ ((zigzag(int(p)) + GOLDEN) & MASK64))
    return h


def u01(h):
    """Uniform double in [0, 1) from the top 53 bits of a hash."""
    return (h >> 11) * (1.0 / 9007199254740992.0)


def poisson_count(u, lam):
    """Poisson(lam) sample by CDF inversion of a uniform in [0, 1).

    Deterministic in ``u`` and bounded: the walk is capped at
    ``lam + 10*sqrt(lam)``, far beyond any mass that matters.
    """
    if lam <= 0.0:
        raise ValueError("poisson_count: lam must be > 0")
    cap = int(lam + 10.0 * math.sqrt(lam)) + 1
    p = math.exp(-lam)
    cdf = p
    k = 0
    while u >= cdf and k < cap:
        k += 1
        p *= lam / k
        cdf += p
    return k


def split_stream(stream):
    """Unpack an impulse stream into (ux, uy, uz, sign).

    Three 21-bit uniforms for the position within the cell and the top
    bit as a random sign.
    """
    scale = 1.0 / 2097152.0
    ux = (stream & 0x1FFFFF) * scale
    uy = ((stream >> 21) & 0x1FFFFF) * scale
    uz = ((stream >> 42) & 0x1FFFFF) * scale
    sign = 1.0 if (stream >> 63) else -1.0
    return ux, uy, uz, sign
