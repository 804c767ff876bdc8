"""Tiling, tile residues, decimation and column permutations of fixed points.

Positions and residues in this module are 1-based: j = (m - 1) * n + r with
r in [1, n]. Witnesses arrive 0-based and are converted here.
"""
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from engine.errors import OffsetOutOfRangeError, UnsupportedTilingError
from engine.latin import NaturalLatinSquare, to_morphism
from engine.repetition import OverlapWitness
from engine.words import FixedPointStream, Morphism, Word, apply_morphism, format_word, morphism_from_rows, parse_word


@dataclass(frozen=True)
class PositionResidue:
    m: int
    r: int

    def position(self, n: int) -> int:
        return (self.m - 1) * n + self.r


@dataclass(frozen=True)
class Tiling:
    tile_length: int
    tiles: Tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.tiles)

    def __getitem__(self, index: int) -> Word:
        return self.tiles[index]

    def concatenate(self) -> Word:
        if not self.tiles:
            return Word.empty(1)
        return Word(np.concatenate([t.letters for t in self.tiles]), self.tiles[0].alphabet_size)

    def render(self, base: int = 0, sep: Optional[str] = None) -> str:
        """Bar notation, e.g. |132|321|213|."""
        if not self.tiles:
            return "|"
        return "|" + "|".join(format_word(t, base, sep) for t in self.tiles) + "|"


def tiles(stream: FixedPointStream, count: int) -> Tiling:
    """Cut the next count * n letters of the stream into tiles of length n."""
    n = stream.morphism.uniform_length
    if n is None:
        raise UnsupportedTilingError("tiling needs every image to have the same length")
    if count < 0:
        raise ValueError("tile count must be >= 0")
    if stream.position % n:
        raise UnsupportedTilingError(f"stream is at position {stream.position}, not on a tile boundary")
    prefix = stream.take(count * n)
    size = stream.morphism.alphabet_size
    return Tiling(n, tuple(Word(chunk, size) for chunk in prefix.letters.reshape(count, n)))


def parse_tiles(text: str, base: int = 0, alphabet_size: Optional[int] = None) -> Word:
    """Re-parse bar notation into the concatenated word."""
    parts = [p for p in text.strip().split("|") if p.strip()]
    letters = []
    for part in parts:
        letters.extend(parse_word(part, base).to_list())
    if alphabet_size is None:
        alphabet_size = max(letters) + 1 if letters else 1
    return Word(np.asarray(letters, dtype=np.int64), alphabet_size)


def position_residue(j: int, n: int) -> PositionResidue:
    if j < 1 or n < 1:
        raise ValueError(f"position and tile length must be >= 1, got j={j}, n={n}")
    return PositionResidue(m=(j - 1) // n + 1, r=(j - 1) % n + 1)


def first_letter_subsequence(tile_seq: Sequence[Word]) -> Word:
    tile_seq = list(tile_seq)
    if not tile_seq:
        return Word.empty(1)
    return Word(np.asarray([t[0] for t in tile_seq], dtype=np.int64), tile_seq[0].alphabet_size)


def decimate(w: Word, i: int, n: int) -> Word:
    """Letters at 1-based positions i, i + n, i + 2n, ..."""
    if n < 1 or not 1 <= i <= n:
        raise OffsetOutOfRangeError(f"offset {i} must lie in [1, {n}]")
    return Word(w.letters[i - 1 :: n], w.alphabet_size)


def column_permutation(square: NaturalLatinSquare, i: int) -> Morphism:
    """pi_i: first-column letter t -> i-th letter of row t."""
    if not 1 <= i <= square.order:
        raise OffsetOutOfRangeError(f"column {i} must lie in [1, {square.order}]")
    return morphism_from_rows([[v] for v in square.rows[:, i - 1].tolist()], square.order)


def inverse_permutation(pi: Morphism) -> Morphism:
    if not pi.is_permutation():
        raise ValueError("morphism is not a letter permutation")
    inverse = [0] * pi.alphabet_size
    for t, img in enumerate(pi.table):
        inverse[img[0]] = t
    return morphism_from_rows([[v] for v in inverse], pi.alphabet_size)


def check_decimation_identity(square: NaturalLatinSquare, seed: int, i: int, count: int) -> bool:
    """D_(i,n) of the (count * n)-prefix equals pi_i of the count-prefix."""
    n = square.order
    if n < 2:
        raise ValueError("decimation identity needs order >= 2")
    morphism = to_morphism(square)
    long_prefix = FixedPointStream(morphism, seed).take(count * n)
    short_prefix = FixedPointStream(morphism, seed).take(count)
    return decimate(long_prefix, i, n) == apply_morphism(column_permutation(square, i), short_prefix)


def overlap_residues(witness: OverlapWitness, n: int) -> Tuple[int, int, int]:
    if n < 1:
        raise ValueError("tile length must be >= 1")
    return tuple(position_residue(j, n).r for j in witness.positions())


def residue_identity_holds(residues: Tuple[int, int, int], n: int) -> bool:
    """r3 ≡ 2 r2 - r1 (mod n)."""
    r1, r2, r3 = residues
    return (r3 - (2 * r2 - r1)) % n == 0


def decimated_witness(witness: OverlapWitness, n: int) -> Tuple[int, OverlapWitness]:
    """Contract an overlap whose period is a multiple of n.

    Returns (r1, witness') where witness' is an overlap of period p / n in
    decimate(w, r1, n), starting at tile index m1 of j1.
    """
    if witness.period % n:
        raise ValueError(f"period {witness.period} is not a multiple of {n}")
    first = position_residue(witness.start + 1, n)
    return first.r, OverlapWitness(start=first.m - 1, period=witness.period // n)
