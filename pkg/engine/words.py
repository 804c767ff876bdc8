"""Finite words, morphisms, iteration and lazy fixed-point streams.

Letters are integers in [0, n) internally. Display formats take an explicit
base: 1 for Latin-square mode (alphabet {1..n}), 0 for Z/nZ mode.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import islice
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from engine.errors import InvalidWordError, LengthOverflowError, NotProlongableError

# A letter is a plain int in [0, alphabet_size).
Letter = int

MAX_PREDICTED_LENGTH = 2 ** 62


def _as_letter_array(letters: Iterable[int]) -> np.ndarray:
    if isinstance(letters, np.ndarray):
        arr = letters.astype(np.int64, copy=True)
    else:
        arr = np.fromiter((int(x) for x in letters), dtype=np.int64)
    if arr.ndim != 1:
        raise InvalidWordError("word letters must form a one-dimensional sequence")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Word:
    """Immutable finite word over the alphabet {0, ..., alphabet_size - 1}."""

    letters: np.ndarray
    alphabet_size: int

    def __post_init__(self) -> None:
        if not isinstance(self.alphabet_size, (int, np.integer)) or self.alphabet_size < 1:
            raise InvalidWordError(f"alphabet_size must be a positive integer, got {self.alphabet_size!r}")
        arr = _as_letter_array(self.letters)
        if arr.size:
            bad = np.flatnonzero((arr < 0) | (arr >= self.alphabet_size))
            if bad.size:
                i = int(bad[0])
                raise InvalidWordError(
                    f"letter {int(arr[i])} at position {i} is outside alphabet of size {self.alphabet_size}"
                )
        object.__setattr__(self, "letters", arr)
        object.__setattr__(self, "alphabet_size", int(self.alphabet_size))

    @classmethod
    def empty(cls, alphabet_size: int) -> "Word":
        return cls(np.empty(0, dtype=np.int64), alphabet_size)

    def __len__(self) -> int:
        return int(self.letters.shape[0])

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters.tolist())

    def __getitem__(self, index: Union[int, slice]):
        if isinstance(index, slice):
            return Word(self.letters[index], self.alphabet_size)
        return int(self.letters[index])

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if other.alphabet_size != self.alphabet_size:
            raise InvalidWordError("cannot concatenate words over different alphabets")
        return Word(np.concatenate([self.letters, other.letters]), self.alphabet_size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.alphabet_size == other.alphabet_size and np.array_equal(self.letters, other.letters)

    def __hash__(self) -> int:
        return hash((self.alphabet_size, self.letters.tobytes()))

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, alphabet_size={self.alphabet_size})"

    def to_list(self) -> List[int]:
        return self.letters.tolist()


def word(letters: Iterable[int], alphabet_size: Optional[int] = None) -> Word:
    """Build a word from 0-based letters; the alphabet defaults to max letter + 1."""
    arr = _as_letter_array(letters)
    if alphabet_size is None:
        alphabet_size = int(arr.max()) + 1 if arr.size else 1
    return Word(arr, alphabet_size)


def check_letter(letter: int, alphabet_size: int) -> Letter:
    if not isinstance(letter, (int, np.integer)) or not 0 <= letter < alphabet_size:
        raise InvalidWordError(f"letter {letter!r} is outside alphabet of size {alphabet_size}")
    return int(letter)


@dataclass(frozen=True, eq=False)
class Morphism:
    """Letter-to-word map; image i is the image of letter i."""

    alphabet_size: int
    images: Tuple[Word, ...]

    def __post_init__(self) -> None:
        images = tuple(self.images)
        if len(images) != self.alphabet_size:
            raise InvalidWordError(f"expected {self.alphabet_size} images, got {len(images)}")
        for t, img in enumerate(images):
            if not isinstance(img, Word):
                raise InvalidWordError(f"image of letter {t} is not a Word")
            if len(img) == 0:
                raise InvalidWordError(f"image of letter {t} is empty")
            if img.alphabet_size != self.alphabet_size:
                raise InvalidWordError(f"image of letter {t} is over a different alphabet")
        object.__setattr__(self, "images", images)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.alphabet_size == other.alphabet_size and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.alphabet_size, self.images))

    def image(self, letter: int) -> Word:
        return self.images[check_letter(letter, self.alphabet_size)]

    @cached_property
    def table(self) -> List[List[int]]:
        return [img.to_list() for img in self.images]

    @cached_property
    def uniform_length(self) -> Optional[int]:
        lengths = {len(img) for img in self.images}
        return lengths.pop() if len(lengths) == 1 else None

    def is_prolongable(self, seed: int) -> bool:
        img = self.image(seed)
        return len(img) >= 2 and img[0] == seed

    def is_permutation(self) -> bool:
        if self.uniform_length != 1:
            return False
        return sorted(img[0] for img in self.images) == list(range(self.alphabet_size))


def morphism_from_rows(rows: Sequence[Sequence[int]], alphabet_size: Optional[int] = None) -> Morphism:
    """Morphism whose image of letter t is rows[t] (0-based, no Latin checks)."""
    n = len(rows) if alphabet_size is None else alphabet_size
    return Morphism(n, tuple(Word(np.asarray(list(r), dtype=np.int64), n) for r in rows))


def identity_morphism(alphabet_size: int) -> Morphism:
    return morphism_from_rows([[t] for t in range(alphabet_size)], alphabet_size)


def apply_morphism(m: Morphism, w: Word) -> Word:
    if w.alphabet_size > m.alphabet_size:
        raise InvalidWordError(
            f"word over alphabet of size {w.alphabet_size} does not fit morphism over {m.alphabet_size}"
        )
    if len(w) == 0:
        return Word.empty(m.alphabet_size)
    if w.letters.max() >= m.alphabet_size:
        raise InvalidWordError("word contains a letter outside the morphism's alphabet")
    k = m.uniform_length
    if k is not None:
        table = np.stack([img.letters for img in m.images])
        return Word(table[w.letters].reshape(-1), m.alphabet_size)
    return Word(np.concatenate([m.images[t].letters for t in w.letters.tolist()]), m.alphabet_size)


def relabel(w: Word, sigma: Sequence[int]) -> Word:
    """Apply a letter permutation sigma (sigma[t] is the new name of t)."""
    perm = np.asarray(list(sigma), dtype=np.int64)
    if sorted(perm.tolist()) != list(range(len(perm))):
        raise InvalidWordError("sigma must be a permutation of the alphabet")
    if len(perm) < w.alphabet_size:
        raise InvalidWordError("sigma does not cover the word's alphabet")
    return Word(perm[w.letters], len(perm))


def predicted_length(m: Morphism, seed: int, k: int) -> int:
    """|m^k(seed)|, computed on Python ints; raises above 2**62."""
    check_letter(seed, m.alphabet_size)
    if k < 0:
        raise ValueError("iteration count must be >= 0")
    lengths = [1] * m.alphabet_size
    cap = MAX_PREDICTED_LENGTH + 1
    for _ in range(k):
        nxt = [min(cap, sum(lengths[a] for a in img)) for img in m.table]
        if nxt == lengths:
            break
        lengths = nxt
    if lengths[seed] > MAX_PREDICTED_LENGTH:
        raise LengthOverflowError(f"|m^{k}({seed})| exceeds 2**62")
    return lengths[seed]


def iterate_morphism(m: Morphism, seed: int, k: int) -> Word:
    predicted_length(m, seed, k)
    current = Word(np.array([seed], dtype=np.int64), m.alphabet_size)
    for _ in range(k):
        nxt = apply_morphism(m, current)
        if nxt == current:
            break
        current = nxt
    return current


class FixedPointStream:
    """Pull-based producer of the fixed point m^ω(seed).

    With m(seed) = seed·u the fixed point is seed·u·m(u)·m²(u)·…; each m^k(u)
    is expanded depth-first, so state is one iterator per level.
    Single consumer: take() and next() advance the stream.
    """

    def __init__(self, morphism: Morphism, seed: int) -> None:
        check_letter(seed, morphism.alphabet_size)
        img = morphism.image(seed)
        if len(img) < 2 or img[0] != seed:
            raise NotProlongableError(
                f"morphism is not prolongable on letter {seed}: image {format_word(img)!r} "
                "must start with the seed and have length >= 2"
            )
        self.morphism = morphism
        self.seed = int(seed)
        self.position = 0
        self.depth = 0
        self._letters = self._expand()

    def _expand(self) -> Iterator[int]:
        table = self.morphism.table
        yield self.seed
        tail = table[self.seed][1:]
        while True:
            stack = [(iter(tail), self.depth)]
            while stack:
                it, d = stack[-1]
                letter = next(it, None)
                if letter is None:
                    stack.pop()
                elif d == 0:
                    yield letter
                elif d == 1:
                    yield from table[letter]
                else:
                    stack.append((iter(table[letter]), d - 1))
            self.depth += 1

    def __iter__(self) -> "FixedPointStream":
        return self

    def __next__(self) -> int:
        letter = next(self._letters)
        self.position += 1
        return letter

    def take(self, length: int) -> Word:
        if length < 0:
            raise ValueError("length must be >= 0")
        arr = np.fromiter(islice(self._letters, length), dtype=np.int64, count=length)
        self.position += length
        return Word(arr, self.morphism.alphabet_size)


def fixed_point_stream(m: Morphism, seed: int) -> FixedPointStream:
    return FixedPointStream(m, seed)


def fixed_point_prefix(m: Morphism, seed: int, length: int) -> Word:
    return FixedPointStream(m, seed).take(length)


# --- Text formats ---

def format_word(w: Word, base: int = 0, sep: Optional[str] = None) -> str:
    """Digits when the alphabet has at most 9 letters and no separator is given."""
    values = (w.letters + base).tolist()
    if sep is None and w.alphabet_size <= 9:
        return "".join(str(v) for v in values)
    return (" " if sep is None else sep).join(str(v) for v in values)


def parse_word(text: str, base: int = 0, alphabet_size: Optional[int] = None) -> Word:
    text = text.strip()
    if not text:
        return Word.empty(alphabet_size or 1)
    if any(ch.isspace() or ch == "," for ch in text):
        tokens = text.replace(",", " ").split()
    else:
        tokens = list(text)
    try:
        values = [int(tok) - base for tok in tokens]
    except ValueError as e:
        raise InvalidWordError(f"word must consist of integers: {text[:40]!r}") from e
    if any(v < 0 for v in values):
        raise InvalidWordError(f"letters must be >= {base}")
    return word(values, alphabet_size)


def parse_morphism_text(text: str) -> Morphism:
    """n non-blank lines; line t holds the image of letter t as 1-based integers."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(tok) - 1 for tok in line.split()])
        except ValueError as e:
            raise InvalidWordError(f"line {lineno}: images must be whitespace-separated integers") from e
    if not rows:
        raise InvalidWordError("morphism file has no images")
    n = len(rows)
    for t, row in enumerate(rows):
        if any(not 0 <= v < n for v in row):
            raise InvalidWordError(f"image of letter {t + 1} uses a letter outside 1..{n}")
    return morphism_from_rows(rows)


def format_morphism_text(m: Morphism) -> str:
    return "".join(" ".join(str(v + 1) for v in row) + "\n" for row in m.table)


def load_morphism(path: Union[str, Path]) -> Morphism:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"morphism file not found: {path}")
    return parse_morphism_text(path.read_text(encoding="utf-8"))
