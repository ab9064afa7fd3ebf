"""Counter-based uniforms.

``U(seed, key)`` is a pure function of a 64-bit seed and a 64-bit key (a vertex id
or any other integer), built from the SplitMix64 finalizer.  No generator state is
carried around, so any subset of vertices can be evaluated in any order, from any
worker, and the result replays bit-for-bit.
"""

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def splitmix64(x):
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def derive_seed(seed, *keys):
    """Mix integer keys into a seed, e.g. ``derive_seed(master, trial)``."""
    s = splitmix64(seed & MASK64)
    for k in keys:
        s = splitmix64(s ^ (k & MASK64))
    return s


def uniform(seed, key):
    """Uniform on [0, 1) with 53 random bits."""
    return (splitmix64(splitmix64(seed & MASK64) ^ (key & MASK64)) >> 11) * _INV53


def _splitmix64_array(x):
    x = x + np.uint64(_GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def uniforms(seed, keys):
    """Vectorised :func:`uniform` over an integer array of keys."""
    keys = np.asarray(keys).astype(np.uint64)
    base = np.uint64(splitmix64(seed & MASK64))
    with np.errstate(over="ignore"):
        z = _splitmix64_array(keys ^ base)
    return (z >> np.uint64(11)).astype(np.float64) * _INV53
