"""Counter-based random numbers.

Every draw is a pure function of (seed, counter...), so results do not depend
on how work is split between processes or in which order it runs.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
# one odd multiplier per counter position so (a, b) and (b, a) differ
_LANES = [np.uint64(x) for x in (0xD6E8FEB86659FD93, 0xA0761D6478BD642F,
                                 0xE7037ED1A0B428DB, 0x8EBC6AF09C88C6E3,
                                 0x589965CC75374CC3, 0x1D8E4E27C47D124F)]
_MASK = (1 << 64) - 1


def _mix(x: np.ndarray) -> np.ndarray:
    # splitmix64 finaliser
    x = (x ^ (x >> np.uint64(30))) * _M1
    x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


def hash_u64(seed: int, *counters) -> np.ndarray:
    """64-bit hash of a seed and broadcastable integer counters."""
    with np.errstate(over="ignore"):
        h = _mix(np.atleast_1d(np.uint64(seed & _MASK)) ^ _GOLDEN)
        for lane, ctr in enumerate(counters):
            ctr = np.asarray(ctr, dtype=np.uint64)
            h = _mix(h ^ (ctr * _LANES[lane] + _GOLDEN))
    return h


def uniform(seed: int, *counters) -> np.ndarray:
    """Doubles in [0, 1) keyed by (seed, counters)."""
    return (hash_u64(seed, *counters) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, *counters: int) -> int:
    """A child seed for an independent sub-stream."""
    return int(hash_u64(seed, *counters)[0])
