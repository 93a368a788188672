"""Counter-based random streams.

Every random decision in the package is a pure function of
(root seed, stream tag, stream index, position), built from the splitmix64
finalizer.  This gives order-independent, splittable substreams: the j-th
uniform of a stream can be computed without generating the first j-1, and
the same arithmetic runs unchanged in vectorized numpy and in the compiled
kernels, so both produce bit-identical graphs.
"""

from __future__ import annotations

import numpy as np

U64 = np.uint64
_MASK = (1 << 64) - 1

GOLDEN = 0x9E3779B97F4A7C15
_TAG_C = 0xD1B54A32D192ED03
_IDX_C = 0x8CB92BA72F3D8DD7

# stream tags
TAG_ATTR = 1
TAG_NAIVE = 2
TAG_BUCKET = 3
TAG_USER = 7


def _mix_int(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def stream_key(seed: int, tag: int, idx: int) -> int:
    """64-bit key of substream (seed, tag, idx)."""
    h = _mix_int((seed + GOLDEN) & _MASK)
    h = _mix_int(h ^ ((tag * _TAG_C) & _MASK))
    return _mix_int(h ^ ((idx * _IDX_C) & _MASK))


def _mix_arr(z: np.ndarray) -> np.ndarray:
    z = z.astype(U64, copy=True)
    z ^= z >> U64(30)
    z *= U64(0xBF58476D1CE4E5B9)
    z ^= z >> U64(27)
    z *= U64(0x94D049BB133111EB)
    z ^= z >> U64(31)
    return z


def stream_keys(seed: int, tag: int, idx: np.ndarray) -> np.ndarray:
    """Vectorized stream_key over an array of stream indices."""
    h = _mix_int((seed + GOLDEN) & _MASK)
    h = U64(_mix_int(h ^ ((tag * _TAG_C) & _MASK)))
    z = idx.astype(U64) * U64(_IDX_C)
    return _mix_arr(z ^ h)


def uniforms(key: int, start: int, count: int) -> np.ndarray:
    """Positions start..start+count-1 of the stream as floats in [0, 1)."""
    j = np.arange(start + 1, start + count + 1, dtype=U64)
    w = _mix_arr(U64(key) ^ (j * U64(GOLDEN)))
    return (w >> U64(11)) * 2.0**-53


def uniforms_at(keys: np.ndarray, position: int) -> np.ndarray:
    """One uniform per stream, all at the same position (vectorized)."""
    j = U64((position + 1) * GOLDEN & _MASK)
    w = _mix_arr(keys ^ j)
    return (w >> U64(11)) * 2.0**-53
