"""Analytic yield models and a Monte Carlo fault-injection estimator.

q is the independent per-bit defect probability throughout.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lut import CodeResult
from .rng import uniform

MODES = ("exact_binomial", "paper_exact")


@dataclass(frozen=True)
class ReliabilityProfile:
    """Groups of (data width n, parity width s, row count f) sharing one q."""

    groups: tuple[tuple[int, int, int], ...]
    q: float

    def __post_init__(self):
        groups = tuple(tuple(int(x) for x in g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        for n, s, f in groups:
            if n < 1 or s < 0 or f < 1:
                raise ValueError(f"bad group (n={n}, s={s}, f={f})")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must lie in [0, 1]")


@dataclass(frozen=True)
class YieldEstimate:
    estimate: float
    trials: int | None = None
    successes: int | None = None
    std_error: float | None = None

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> "YieldEstimate":
        est = successes / trials
        return cls(est, trials, successes, math.sqrt(est * (1.0 - est) / trials))


def psi(n: int, f: int, q: float) -> float:
    """Probability that f uncoded rows of n bits are all defect free."""
    return (1.0 - q) ** (n * f)


def _log_chi(m: int, q: float, mode: str) -> float:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    coeff = m if mode == "exact_binomial" else m - 1
    if q >= 1.0:
        value = coeff * q if m == 1 else 0.0
        return math.log(value) if value > 0 else -math.inf
    # log[(1-q)^m (1 + coeff*q/(1-q))], stable for tiny q
    return m * math.log1p(-q) + math.log1p(coeff * q / (1.0 - q))


def chi(n: int, s: int, q: float, mode: str = "exact_binomial") -> float:
    """Probability that one corrected row of n + s bits decodes correctly.

    ``exact_binomial`` counts all n+s single-error positions; ``paper_exact``
    uses the coefficient n+s-1.
    """
    return math.exp(_log_chi(n + s, q, mode))


def chip_yield(profile: ReliabilityProfile, corrected: bool,
               mode: str = "exact_binomial") -> float:
    """Product over groups of psi (uncorrected) or chi**f (corrected)."""
    q = profile.q
    total = 0.0
    for n, s, f in profile.groups:
        if corrected:
            total += f * _log_chi(n + s, q, mode)
        elif q >= 1.0:
            return 0.0
        else:
            total += n * f * math.log1p(-q)
    return math.exp(total)


def _block_arrays(result: CodeResult):
    coded = np.array(result.coded.bits, dtype=np.uint8)
    cols = np.array(result.H.column_ints(), dtype=np.int64)
    lookup = np.full(1 << result.H.t, -2, dtype=np.int64)
    lookup[0] = -1
    lookup[cols] = np.arange(len(cols))
    return coded, cols, lookup


def _simulate_chunk(blocks, q: float, seed: int, start: int, stop: int):
    trials = np.arange(start, stop, dtype=np.uint64)[:, None, None]
    chip_ok = np.ones(stop - start, dtype=bool)
    block_ok = []
    for b, (coded, cols, lookup) in enumerate(blocks):
        l, c = coded.shape
        bit = np.arange(l * c, dtype=np.uint64).reshape(1, l, c)
        flips = uniform(seed, trials, np.uint64(b), bit) < q
        noisy = coded[None, :, :] ^ flips.astype(np.uint8)
        syn = np.bitwise_xor.reduce(np.where(noisy == 1, cols, 0), axis=2)
        pos = lookup[syn]
        fixed = noisy ^ (np.arange(c)[None, None, :] == pos[:, :, None]).astype(np.uint8)
        rows_ok = (pos != -2) & np.all(fixed == coded[None, :, :], axis=2)
        ok = np.all(rows_ok, axis=1)
        block_ok.append(int(ok.sum()))
        chip_ok &= ok
    return int(chip_ok.sum()), block_ok


def simulate_yield(
    blocks: Sequence[CodeResult],
    q: float,
    trials: int,
    seed: int,
    jobs: int = 1,
    chunk: int = 4096,
) -> tuple[YieldEstimate, list[YieldEstimate]]:
    """Monte Carlo chip and per-block yield under i.i.d. bit flips.

    Each stored bit's flip is decided by a counter-based draw keyed by
    (seed, trial, block, bit), and every row goes through syndrome decoding.
    A block survives a trial iff all its rows decode back to the stored row.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    arrays = [_block_arrays(b) for b in blocks]
    spans = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    if jobs > 1 and len(spans) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_simulate_chunk, *zip(*[(arrays, q, seed, a, b) for a, b in spans])))
    else:
        parts = [_simulate_chunk(arrays, q, seed, a, b) for a, b in spans]
    chip = sum(p[0] for p in parts)
    per_block = [sum(p[1][i] for p in parts) for i in range(len(blocks))]
    return (
        YieldEstimate.from_counts(chip, trials),
        [YieldEstimate.from_counts(s, trials) for s in per_block],
    )
