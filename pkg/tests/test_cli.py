import io
import json

import pytest

from engine.cli import run
from tests.conftest import SWAPPED3_PREFIX_18, THUE_MORSE_32


def test_gen_swapped_z3_square(capsys):
    assert run(["gen", "--square", "swapped3", "--seed", "1", "--length", "18"]) == 0
    assert capsys.readouterr().out == SWAPPED3_PREFIX_18 + "\n"


def test_gen_cayley_thue_morse(capsys):
    assert run(["gen", "--cayley", "2", "--seed", "0", "--length", "32"]) == 0
    assert capsys.readouterr().out == THUE_MORSE_32 + "\n"


def test_gen_square_file_with_separator(tmp_path, capsys):
    path = tmp_path / "z3.txt"
    path.write_text("1 2 3\n2 3 1\n3 1 2\n")
    assert run(["gen", "--square", str(path), "--seed", "2", "--length", "6", "--sep", ","]) == 0
    assert capsys.readouterr().out == "2,3,1,3,1,2\n"


def test_gen_morphism_file(tmp_path, capsys):
    path = tmp_path / "tm.txt"
    path.write_text("1 2\n2 1\n")
    assert run(["gen", "--morphism", str(path), "--seed", "1", "--length", "8"]) == 0
    assert capsys.readouterr().out == "12212112\n"


def test_gen_rejects_seed_outside_alphabet(capsys):
    assert run(["gen", "--square", "swapped3", "--seed", "4", "--length", "5"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_gen_rejects_non_natural_square(tmp_path, capsys):
    path = tmp_path / "swapped.txt"
    path.write_text("2 1\n1 2\n")
    assert run(["gen", "--square", str(path), "--seed", "1", "--length", "5"]) == 2
    assert "first column" in capsys.readouterr().err


def test_gen_reports_bad_square_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n1 2\n")
    assert run(["gen", "--square", str(path), "--seed", "1", "--length", "5"]) == 2
    assert "line 2" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--seed", "1", "--length", "5"],
        ["gen", "--square", "swapped3", "--cayley", "3", "--seed", "1", "--length", "5"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_two(argv):
    assert run(argv) == 2


def test_check_word_with_overlap(capsys):
    assert run(["check", "--word", "111"]) == 1
    assert capsys.readouterr().out == "overlap start=1 period=1 c=1 x=\n"


def test_check_overlap_free_word(capsys):
    assert run(["check", "--word", "0110"]) == 0
    assert capsys.readouterr().out == "overlap-free length=4\n"


def test_check_json(capsys):
    assert run(["check", "--json", "--word", "0110110"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["overlap_free"] is False
    assert payload["witness"] == {"kind": "overlap", "start": 1, "period": 3, "c": 0, "x": "11"}


def test_check_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(SWAPPED3_PREFIX_18 + "\n"))
    assert run(["check", "--stdin"]) == 0
    assert capsys.readouterr().out == "overlap-free length=18\n"


def test_check_file(tmp_path, capsys):
    path = tmp_path / "w.txt"
    path.write_text("2 10 2 10 2\n")
    assert run(["check", "--file", str(path)]) == 1
    assert capsys.readouterr().out == "overlap start=1 period=2 c=2 x=10\n"


def test_check_missing_file(tmp_path, capsys):
    assert run(["check", "--file", str(tmp_path / "absent.txt")]) == 2


@pytest.mark.parametrize("order,count", [(1, 1), (2, 1), (3, 2), (4, 24)])
def test_enumerate_count_only(order, count, capsys):
    assert run(["enumerate", "--order", str(order), "--count-only"]) == 0
    assert capsys.readouterr().out == f"{count}\n"


def test_enumerate_prints_squares(capsys):
    assert run(["enumerate", "--order", "3"]) == 0
    assert capsys.readouterr().out == "1 2 3\n2 3 1\n3 1 2\n\n1 3 2\n2 1 3\n3 2 1\n"


def test_enumerate_emit(tmp_path, capsys):
    assert run(["enumerate", "--order", "3", "--emit", str(tmp_path / "sq")]) == 0
    assert capsys.readouterr().out == "2\n"
    assert sorted(p.name for p in (tmp_path / "sq").iterdir()) == ["n3-00001.txt", "n3-00002.txt"]
    assert (tmp_path / "sq" / "n3-00002.txt").read_text() == "1 3 2\n2 1 3\n3 2 1\n"


def test_tiles_swapped_z3_square(capsys):
    assert run(["tiles", "--square", "swapped3", "--seed", "1", "--count", "6"]) == 0
    assert capsys.readouterr().out == "|132|321|213|321|213|132|\n"


def test_tiles_cayley(capsys):
    assert run(["tiles", "--cayley", "2", "--seed", "0", "--count", "4"]) == 0
    assert capsys.readouterr().out == "|01|10|10|01|\n"


def test_decimate_with_identity_check(capsys):
    assert run(["decimate", "--square", "swapped3", "--seed", "1", "--offset", "2", "--length", "6", "--check-pi"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["321213", "decimation identity holds offset=2 length=6"]


def test_decimate_rejects_offset(capsys):
    assert run(["decimate", "--square", "swapped3", "--seed", "1", "--offset", "4", "--length", "6"]) == 2


def test_verify_order(capsys):
    assert run(["verify", "--order", "3", "--length", "1000"]) == 0
    assert capsys.readouterr().out == "ok order=3 squares=2 pairs=6 length=1000 failures=0\n"


def test_verify_square_json(capsys):
    code = run(["verify", "--square", "swapped3", "--length", "2000", "--oracle-length", "200", "--format", "json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["square"] == "swapped3"
    assert [r["seed"] for r in payload["reports"]] == [1, 2, 3]
    assert {r["verdict"] for r in payload["reports"]} == {"overlap-free"}


def test_verify_output_dir(tmp_path, capsys):
    out_dir = tmp_path / "run"
    assert run(["verify", "--order", "2", "--length", "500", "--output", str(out_dir)]) == 0
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["pairs"] == 2
    assert run(["verify", "--order", "2", "--length", "500", "--output", str(out_dir)]) == 2


def test_verify_suite_file(tmp_path, capsys):
    path = tmp_path / "suite.yaml"
    path.write_text(
        "sweep: {orders: [2, 3], length: 300}\n"
        "featured: {squares: [thue_morse], length: 500, oracle_length: 100}\n"
        "controls: {length: 80}\n"
    )
    assert run(["verify", "--suite", str(path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1] == "failures=0"
    assert sum(line.startswith("ok control-") for line in out) == 3


def test_verify_large_order_needs_opt_in(capsys):
    assert run(["verify", "--order", "6", "--length", "100"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--order", "3", "--length", "0"],
        ["verify", "--square", "swapped3", "--length", "0"],
        ["verify", "--explore", "--order", "3", "--length", "0"],
    ],
)
def test_verify_explicit_zero_length_is_rejected(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_verify_explore(capsys):
    assert run(["verify", "--explore", "--order", "3", "--length", "100"]) == 0
    assert capsys.readouterr().out


def test_controls(capsys):
    assert run(["controls"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert [line.split()[1] for line in out] == ["control-unary", "control-column-duplicate", "control-width3"]
    assert all(line.startswith("ok ") for line in out)
