"""Latin squares: validation, constructors, enumeration, morphisms, formats.

Rows are stored 0-based as a read-only n x n numpy array; the text formats
and diagnostics are 1-based.
"""
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from engine.errors import (
    ColumnDuplicateError,
    LatinSquareError,
    LetterOutOfRangeError,
    NotNaturalError,
    RowDuplicateError,
    ShapeMismatchError,
    SquareFormatError,
)
from engine.words import Morphism, Word

# The 3x3 square with natural first column that is not Z/3Z's table (1-based).
SWAPPED_Z3_ROWS = (
    (1, 3, 2),
    (2, 1, 3),
    (3, 2, 1),
)

# 6x6 Latin square that is not the Cayley table of any group (1-based).
# Source: J. Dénes and A. D. Keedwell, Latin Squares and their Applications, p. 27.
NON_GROUP_ROWS = (
    (1, 2, 3, 4, 5, 6),
    (2, 1, 6, 3, 4, 5),
    (3, 4, 5, 2, 6, 1),
    (4, 5, 1, 6, 2, 3),
    (5, 6, 4, 1, 3, 2),
    (6, 3, 2, 5, 1, 4),
)


@dataclass(frozen=True, eq=False)
class LatinSquare:
    order: int
    rows: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatinSquare):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.rows, other.rows)

    def __hash__(self) -> int:
        return hash((self.order, self.rows.tobytes()))

    def row(self, t: int) -> Word:
        return Word(self.rows[t], self.order)

    def to_lists(self) -> List[List[int]]:
        return self.rows.tolist()

    def is_natural(self) -> bool:
        return bool(np.array_equal(self.rows[:, 0], np.arange(self.order)))


@dataclass(frozen=True, eq=False)
class NaturalLatinSquare(LatinSquare):
    """Latin square whose first column is (1, 2, ..., n): rows[t][0] == t."""

    def __post_init__(self) -> None:
        column = self.rows[:, 0]
        bad = np.flatnonzero(column != np.arange(self.order))
        if bad.size:
            t = int(bad[0])
            raise NotNaturalError(
                f"first column is not in natural order: row {t + 1} starts with {int(column[t]) + 1}",
                row=t + 1,
                column=1,
                letter=int(column[t]) + 1,
            )


def validate(rows: Sequence[Sequence[int]]) -> LatinSquare:
    """Validate an n x n table of 0-based letters.

    Checks run in order: shape, letter range, rows, columns; the first
    violation is raised with 1-based row/column/letter.
    """
    n = len(rows)
    if n == 0:
        raise ShapeMismatchError("square must have at least one row")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ShapeMismatchError(f"row {i + 1} has {len(r)} entries, expected {n}", row=i + 1)
    table = np.asarray([list(r) for r in rows], dtype=np.int64)
    out = np.argwhere((table < 0) | (table >= n))
    if out.size:
        i, j = (int(v) for v in out[0])
        raise LetterOutOfRangeError(
            f"row {i + 1}, column {j + 1}: letter {int(table[i, j]) + 1} outside 1..{n}",
            row=i + 1,
            column=j + 1,
            letter=int(table[i, j]) + 1,
        )
    for i in range(n):
        dup = _first_duplicate(table[i])
        if dup is not None:
            letter, j = dup
            raise RowDuplicateError(
                f"row {i + 1} repeats letter {letter + 1} at column {j + 1}", row=i + 1, column=j + 1, letter=letter + 1
            )
    for j in range(n):
        dup = _first_duplicate(table[:, j])
        if dup is not None:
            letter, i = dup
            raise ColumnDuplicateError(
                f"column {j + 1} repeats letter {letter + 1} at row {i + 1}", row=i + 1, column=j + 1, letter=letter + 1
            )
    table.flags.writeable = False
    return LatinSquare(n, table)


def _first_duplicate(line: np.ndarray) -> Optional[Tuple[int, int]]:
    # (letter, index of its second occurrence)
    seen = set()
    for k, v in enumerate(line.tolist()):
        if v in seen:
            return v, k
        seen.add(v)
    return None


def as_natural(square: LatinSquare) -> NaturalLatinSquare:
    if isinstance(square, NaturalLatinSquare):
        return square
    return NaturalLatinSquare(square.order, square.rows)


def normalize_rows(square: LatinSquare) -> NaturalLatinSquare:
    """Sort rows by their first letter; always yields a natural square."""
    rows = square.rows[np.argsort(square.rows[:, 0])]
    rows.flags.writeable = False
    return NaturalLatinSquare(square.order, rows)


def permute_columns(square: LatinSquare, perm: Sequence[int]) -> LatinSquare:
    """Column j of the result is column perm[j] of the input (0-based)."""
    return validate(square.rows[:, list(perm)].tolist())


def cayley_zn(n: int) -> NaturalLatinSquare:
    if n < 1:
        raise ValueError(f"invalid order {n}: must be >= 1")
    idx = np.arange(n)
    rows = np.add.outer(idx, idx) % n
    rows.flags.writeable = False
    return NaturalLatinSquare(n, rows)


def swapped_z3_square() -> NaturalLatinSquare:
    return as_natural(validate([[v - 1 for v in r] for r in SWAPPED_Z3_ROWS]))


def non_group_square() -> NaturalLatinSquare:
    return as_natural(validate([[v - 1 for v in r] for r in NON_GROUP_ROWS]))


def _backtrack(n: int, natural: bool) -> Iterator[np.ndarray]:
    # Row-major cell filling with row/column bitmasks, smallest letter first,
    # which gives lexicographic row-major output order.
    full = (1 << n) - 1
    grid = [[-1] * n for _ in range(n)]
    row_used = [0] * n
    col_used = [0] * n
    if natural:
        for t in range(n):
            grid[t][0] = t
            row_used[t] |= 1 << t
            col_used[0] |= 1 << t
    cells = [(i, j) for i in range(n) for j in range(n) if not (natural and j == 0)]

    def place(k: int) -> Iterator[np.ndarray]:
        if k == len(cells):
            yield np.array(grid, dtype=np.int64)
            return
        i, j = cells[k]
        free = full & ~(row_used[i] | col_used[j])
        while free:
            bit = free & -free
            free ^= bit
            grid[i][j] = bit.bit_length() - 1
            row_used[i] |= bit
            col_used[j] |= bit
            yield from place(k + 1)
            row_used[i] ^= bit
            col_used[j] ^= bit
        grid[i][j] = -1

    yield from place(0)


def enumerate_natural(n: int) -> Iterator[NaturalLatinSquare]:
    """Every Latin square of order n with first column (1..n), lexicographically."""
    if n < 1:
        raise ValueError(f"invalid order {n}: must be >= 1")
    for rows in _backtrack(n, natural=True):
        rows.flags.writeable = False
        yield NaturalLatinSquare(n, rows)


def enumerate_all(n: int) -> Iterator[LatinSquare]:
    """Every Latin square of order n, no constraint on the first column."""
    if n < 1:
        raise ValueError(f"invalid order {n}: must be >= 1")
    for rows in _backtrack(n, natural=False):
        rows.flags.writeable = False
        yield LatinSquare(n, rows)


def count_natural_by_brute_force(n: int) -> int:
    """Count of natural squares derived from the unconstrained enumeration."""
    total = sum(1 for _ in enumerate_all(n))
    return total // factorial(n)


def to_morphism(square: LatinSquare) -> Morphism:
    return Morphism(square.order, tuple(square.row(t) for t in range(square.order)))


def is_associative_quasigroup(square: LatinSquare) -> bool:
    """True iff x∘y = rows[x][y] is associative over all n^3 triples.

    Tests only this bordering; it does not decide isotopy to a group table.
    """
    a = square.rows
    n = square.order
    left = a[a]  # left[x, y, z] = (x∘y)∘z
    right = a[np.arange(n)[:, None, None], a[None, :, :]]  # x∘(y∘z)
    return bool(np.array_equal(left, right))


# --- Text and YAML formats ---

def parse_square_text(text: str) -> LatinSquare:
    """n lines of n whitespace-separated 1-based integers; '#' starts a comment."""
    rows: List[List[int]] = []
    lines: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        row = []
        for col, tok in enumerate(line.split(), start=1):
            try:
                row.append(int(tok) - 1)
            except ValueError:
                raise SquareFormatError(f"expected an integer, got {tok!r}", line=lineno, column=col) from None
        rows.append(row)
        lines.append(lineno)
        n_seen = len(rows[0])
        if len(row) != n_seen:
            raise SquareFormatError(f"row has {len(row)} entries, expected {n_seen}", line=lineno)
    if not rows:
        raise SquareFormatError("no rows found", line=1)
    try:
        return validate(rows)
    except LatinSquareError as e:
        line = lines[e.row - 1] if e.row and e.row <= len(lines) else lines[-1]
        raise SquareFormatError(str(e), line=line, column=e.column) from e


def format_square_text(square: LatinSquare) -> str:
    return "".join(" ".join(str(v + 1) for v in row) + "\n" for row in square.to_lists())


def _parse_square_yaml(text: str) -> LatinSquare:
    payload = yaml.safe_load(text)
    if not isinstance(payload, dict) or "rows" not in payload:
        raise KeyError("structured square must be a mapping with 'order' and 'rows'")
    try:
        rows = [[int(v) - 1 for v in r] for r in payload["rows"]]
    except TypeError as e:
        raise ValueError(f"rows must be a list of integer lists: {e}") from e
    square = validate(rows)
    order = payload.get("order")
    if order is not None and int(order) != square.order:
        raise ValueError(f"declared order {order} does not match {square.order} rows")
    return square


def load_square(path: Union[str, Path]) -> LatinSquare:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"square file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in {".yaml", ".yml"}:
        return _parse_square_yaml(text)
    return parse_square_text(text)


def save_square(square: LatinSquare, path: Union[str, Path]) -> None:
    path = Path(path)
    if path.suffix.lower() in {".yaml", ".yml"}:
        payload = {"order": square.order, "rows": [[v + 1 for v in r] for r in square.to_lists()]}
        text = yaml.safe_dump(payload, default_flow_style=None, sort_keys=True)
    else:
        text = format_square_text(square)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)
