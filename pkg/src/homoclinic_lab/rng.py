"""Counter-based deterministic randomness.

Every sampled symbol is a pure function of (seed, stream index, site), with
the site keyed by a canonical 64-bit id: free-group ids chain one finalizer
round per letter from a fixed root, so the id of a word is independent of
which window or cone enumerated it.  No global state anywhere.
"""

import numpy as np

MASK = (1 << 64) - 1
GOLD = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64_int(x):
    """One 64-bit finalizer round on a Python int."""
    x &= MASK
    x ^= x >> 30
    x = (x * _MIX1) & MASK
    x ^= x >> 27
    x = (x * _MIX2) & MASK
    x ^= x >> 31
    return x


def mix64(arr):
    """The same finalizer on a numpy uint64 array (wrapping multiplies)."""
    arr = arr.astype(np.uint64, copy=True)
    arr ^= arr >> np.uint64(30)
    arr *= np.uint64(_MIX1)
    arr ^= arr >> np.uint64(27)
    arr *= np.uint64(_MIX2)
    arr ^= arr >> np.uint64(31)
    return arr


_F2_ROOT = mix64_int(0xF2)
_Z2_ROOT = mix64_int(0x5A32)

LETTER = {c: mix64_int(GOLD ^ ord(c)) for c in "abAB"}


def word_id(word):
    """Canonical id of a reduced free-group word."""
    h = _F2_ROOT
    for c in word:
        h = mix64_int(h ^ LETTER[c])
    return h


def z2_id(el):
    i, j = el
    h = mix64_int(_Z2_ROOT ^ (i & MASK))
    return mix64_int(h ^ ((j & MASK) ^ GOLD))


def element_id(group, el):
    return word_id(el) if isinstance(el, str) else z2_id(el)


def element_ids(group, elements):
    return np.array([element_id(group, el) for el in elements], dtype=np.uint64)


def child_ids(ids, letter):
    """Ids of w*letter for an array of word ids, valid when no cancellation
    can occur (the words do not end in the letter's inverse)."""
    return mix64(ids ^ np.uint64(LETTER[letter]))


def symbols(seed, index, ids, M):
    """Uniform symbols in {0,...,M-1}, one per id, for the given stream.

    Unbiased via rejection: draws landing in the final partial block of the
    64-bit range are re-finalized until they fall below it.
    """
    stream = mix64_int(mix64_int(seed) ^ mix64_int((index + 1) * GOLD))
    v = mix64(ids ^ np.uint64(stream))
    rem = (1 << 64) % M
    if rem:
        limit = np.uint64((1 << 64) - rem)
        mask = v >= limit
        while mask.any():
            v[mask] = mix64(v[mask])
            mask = v >= limit
    return (v % np.uint64(M)).astype(np.int64)


def symbol(seed, index, group, el, M):
    """Single-site convenience wrapper around symbols()."""
    ids = np.array([element_id(group, el)], dtype=np.uint64)
    return int(symbols(seed, index, ids, M)[0])
