"""Overlap (cxcxc) and square (ww) detection with checkable witnesses.

An overlap is a factor of length 2p+1 with period p = |cx|; a square is a
factor of length 2p with period p. Ties resolve to the shortest period, then
the leftmost start.
"""
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from engine.lce import LongestCommonExtension
from engine.words import Word, format_word

# Anchors processed per numpy batch in the LCE scan.
_ANCHOR_BATCH = 1 << 20


@dataclass(frozen=True)
class OverlapWitness:
    """Overlap cxcxc at 0-based `start` with period p = |cx|."""

    start: int
    period: int

    @property
    def span(self) -> int:
        return 2 * self.period + 1

    def positions(self) -> Tuple[int, int, int]:
        """1-based positions j1, j2, j3 of the three copies of c."""
        j1 = self.start + 1
        return j1, j1 + self.period, j1 + 2 * self.period

    def c(self, w: Word) -> int:
        return w[self.start]

    def x(self, w: Word) -> Word:
        return w[self.start + 1 : self.start + self.period]


@dataclass(frozen=True)
class SquareWitness:
    """Square ww at 0-based `start` with |w| = half_length."""

    start: int
    half_length: int

    @property
    def span(self) -> int:
        return 2 * self.half_length


Witness = Union[OverlapWitness, SquareWitness]


def _naive_scan(letters: np.ndarray, excess: int) -> Optional[Tuple[int, int]]:
    # Exhaustive over (period, start): a hit needs p + excess consecutive
    # equalities letters[k] == letters[k + p].
    n = int(letters.shape[0])
    for p in range(1, (n - excess) // 2 + 1):
        need = p + excess
        eq = (letters[:-p] == letters[p:]).astype(np.int64)
        csum = np.concatenate(([0], np.cumsum(eq)))
        hits = np.flatnonzero(csum[need:] - csum[:-need] == need)
        if hits.size:
            return p, int(hits[0])
    return None


def _lce_scan(letters: np.ndarray, excess: int) -> Optional[Tuple[int, int]]:
    # A maximal run of period p whose equality interval has length >= p
    # contains an anchor k that is a multiple of p. Extending each anchor
    # forwards and backwards with LCE queries recovers the run, so
    # sum(n / p) queries cover every period.
    n = int(letters.shape[0])
    max_p = (n - excess) // 2
    if max_p < 1:
        return None
    fwd = LongestCommonExtension(letters)
    bwd = LongestCommonExtension(letters[::-1].copy())

    periods = np.arange(1, max_p + 1, dtype=np.int64)
    counts = (n - periods - 1) // periods + 1
    cum = np.cumsum(counts)
    first = 0
    while first < max_p:
        done = int(cum[first - 1]) if first else 0
        last = max(first, int(np.searchsorted(cum, done + _ANCHOR_BATCH, side="right")) - 1)
        block_p = periods[first : last + 1]
        block_c = counts[first : last + 1]
        first = last + 1
        p = np.repeat(block_p, block_c)
        offsets = np.arange(p.shape[0]) - np.repeat(np.cumsum(block_c) - block_c, block_c)
        k = offsets * p
        keep = letters[k] == letters[k + p]
        p, k = p[keep], k[keep]
        if p.size == 0:
            continue
        ahead = fwd.query(k, k + p)
        behind = np.zeros_like(k)
        inner = k > 0
        behind[inner] = bwd.query(n - k[inner], n - k[inner] - p[inner])
        hit = ahead + behind >= p + excess
        if hit.any():
            hp, hs = p[hit], (k - behind)[hit]
            best = np.lexsort((hs, hp))[0]
            return int(hp[best]), int(hs[best])
    return None


def find_overlap_naive(w: Word) -> Optional[OverlapWitness]:
    """Exhaustive O(|w|^2) scan; returns the (period, start)-minimal overlap."""
    found = _naive_scan(w.letters, 1)
    return OverlapWitness(start=found[1], period=found[0]) if found else None


def find_overlap_fast(w: Word) -> Optional[OverlapWitness]:
    """LCE anchor scan, O(|w| log |w|) queries.

    Reports the same (period, start)-minimal witness as the naive scan.
    """
    found = _lce_scan(w.letters, 1)
    return OverlapWitness(start=found[1], period=found[0]) if found else None


def find_square(w: Word) -> Optional[SquareWitness]:
    found = _lce_scan(w.letters, 0)
    return SquareWitness(start=found[1], half_length=found[0]) if found else None


def find_square_naive(w: Word) -> Optional[SquareWitness]:
    found = _naive_scan(w.letters, 0)
    return SquareWitness(start=found[1], half_length=found[0]) if found else None


def overlap_to_square(witness: OverlapWitness) -> SquareWitness:
    return SquareWitness(start=witness.start, half_length=witness.period)


def verify_witness(w: Word, witness: Witness) -> bool:
    if isinstance(witness, OverlapWitness):
        p, checks = witness.period, witness.period + 1
    elif isinstance(witness, SquareWitness):
        p, checks = witness.half_length, witness.half_length
    else:
        raise TypeError(f"unsupported witness type: {type(witness).__name__}")
    s = witness.start
    if p < 1 or s < 0 or s + witness.span > len(w):
        return False
    letters = w.letters
    return bool(np.array_equal(letters[s : s + checks], letters[s + p : s + p + checks]))


def format_witness(w: Word, witness: Witness, base: int = 0) -> str:
    """CLI witness line; positions are 1-based."""
    if isinstance(witness, OverlapWitness):
        c = witness.c(w) + base
        x = format_word(witness.x(w), base)
        return f"overlap start={witness.start + 1} period={witness.period} c={c} x={x}"
    half = format_word(w[witness.start : witness.start + witness.half_length], base)
    return f"square start={witness.start + 1} half_length={witness.half_length} w={half}"


def witness_to_dict(w: Word, witness: Witness, base: int = 0) -> dict:
    if isinstance(witness, OverlapWitness):
        return {
            "kind": "overlap",
            "start": witness.start + 1,
            "period": witness.period,
            "c": witness.c(w) + base,
            "x": format_word(witness.x(w), base),
        }
    return {
        "kind": "square",
        "start": witness.start + 1,
        "half_length": witness.half_length,
        "w": format_word(w[witness.start : witness.start + witness.half_length], base),
    }
