from math import factorial

import numpy as np
import pytest

from engine.errors import (
    ColumnDuplicateError,
    LetterOutOfRangeError,
    NotNaturalError,
    RowDuplicateError,
    ShapeMismatchError,
    SquareFormatError,
)
from engine.latin import (
    as_natural,
    cayley_zn,
    count_natural_by_brute_force,
    enumerate_all,
    enumerate_natural,
    format_square_text,
    is_associative_quasigroup,
    load_square,
    normalize_rows,
    parse_square_text,
    permute_columns,
    save_square,
    to_morphism,
    validate,
)


@pytest.mark.parametrize("n", range(1, 13))
def test_cayley_zn_is_latin(n):
    square = cayley_zn(n)
    assert validate(square.to_lists()) == square
    assert square.is_natural()


def test_validate_reports_shape_first():
    with pytest.raises(ShapeMismatchError) as exc:
        validate([[0, 1], [1]])
    assert exc.value.row == 2


def test_validate_reports_letter_range():
    with pytest.raises(LetterOutOfRangeError) as exc:
        validate([[0, 2], [1, 0]])
    assert (exc.value.row, exc.value.column, exc.value.letter) == (1, 2, 3)


def test_validate_reports_row_duplicate():
    with pytest.raises(RowDuplicateError) as exc:
        validate([[0, 0], [1, 1]])
    assert (exc.value.row, exc.value.column, exc.value.letter) == (1, 2, 1)


def test_validate_reports_column_duplicate():
    with pytest.raises(ColumnDuplicateError) as exc:
        validate([[0, 1], [0, 1]])
    assert (exc.value.row, exc.value.column, exc.value.letter) == (2, 1, 1)


def test_as_natural_rejects_unordered_first_column():
    square = validate([[1, 0], [0, 1]])
    with pytest.raises(NotNaturalError) as exc:
        as_natural(square)
    assert exc.value.row == 1


def test_normalize_rows_yields_natural_square():
    square = validate([[2, 0, 1], [0, 1, 2], [1, 2, 0]])
    natural = normalize_rows(square)
    assert natural == cayley_zn(3)


def test_swapped_z3_square_is_cayley_with_columns_swapped(swapped3):
    assert permute_columns(cayley_zn(3), [0, 2, 1]) == swapped3
    assert swapped3 != cayley_zn(3)


def test_enumerate_order_three_gives_both_squares(swapped3):
    squares = list(enumerate_natural(3))
    assert squares == [cayley_zn(3), swapped3]


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (3, 2), (4, 24)])
def test_enumerate_natural_counts(n, expected):
    squares = list(enumerate_natural(n))
    assert len(squares) == expected
    assert len(set(squares)) == expected
    for square in squares:
        validate(square.to_lists())
        assert square.is_natural()


def test_enumerate_natural_is_lexicographic():
    keys = [tuple(s.rows.reshape(-1).tolist()) for s in enumerate_natural(4)]
    assert keys == sorted(keys)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_brute_force_oracle_matches_enumerator(n):
    assert count_natural_by_brute_force(n) == sum(1 for _ in enumerate_natural(n))


def test_enumerate_all_order_three():
    assert sum(1 for _ in enumerate_all(3)) == 2 * factorial(3)


@pytest.mark.slow
def test_order_five_count_against_brute_force():
    assert count_natural_by_brute_force(5) == 1344
    assert sum(1 for _ in enumerate_natural(5)) == 1344


def test_every_square_normalizes_to_natural():
    for square in enumerate_all(3):
        assert normalize_rows(square).is_natural()


def test_to_morphism_images_are_permutations(nongroup6):
    for image in to_morphism(nongroup6).images:
        assert sorted(image.to_list()) == list(range(6))


def test_associativity_of_reference_squares(swapped3, nongroup6):
    assert is_associative_quasigroup(cayley_zn(5))
    assert not is_associative_quasigroup(swapped3)
    assert not is_associative_quasigroup(nongroup6)


def test_swapped_z3_square_counterexample_triple(swapped3):
    rows = swapped3.rows
    assert rows[rows[0, 0], 1] != rows[0, rows[0, 1]]


def test_parse_square_text_roundtrip(nongroup6):
    text = format_square_text(nongroup6)
    assert parse_square_text("# reference\n" + text) == nongroup6


def test_parse_square_text_reports_line_numbers():
    with pytest.raises(SquareFormatError) as exc:
        parse_square_text("# header\n1 2\n\n1 2\n")
    assert exc.value.line == 4
    assert exc.value.column == 1
    assert str(exc.value).startswith("line 4, column 1:")


def test_parse_square_text_rejects_non_integer():
    with pytest.raises(SquareFormatError) as exc:
        parse_square_text("1 x\n2 1\n")
    assert (exc.value.line, exc.value.column) == (1, 2)


def test_parse_square_text_rejects_ragged_rows():
    with pytest.raises(SquareFormatError) as exc:
        parse_square_text("1 2\n2\n")
    assert exc.value.line == 2


@pytest.mark.parametrize("name", ["square.txt", "square.yaml"])
def test_save_and_load_square(tmp_path, nongroup6, name):
    path = tmp_path / name
    save_square(nongroup6, path)
    assert load_square(path) == nongroup6
    assert not path.with_suffix(path.suffix + ".tmp").exists()


def test_load_yaml_square_checks_declared_order(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("order: 3\nrows: [[1, 2], [2, 1]]\n")
    with pytest.raises(ValueError):
        load_square(path)


def test_load_yaml_square_rejects_non_list_rows(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("order: 2\nrows: [1, 2]\n")
    with pytest.raises(ValueError):
        load_square(path)


def test_load_square_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_square(tmp_path / "absent.txt")


def test_square_rows_are_read_only(swapped3):
    with pytest.raises(ValueError):
        swapped3.rows[0, 0] = 1
    assert isinstance(swapped3.rows, np.ndarray)
