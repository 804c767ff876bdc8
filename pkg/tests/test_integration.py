import os
import shutil
import subprocess
import sys
from pathlib import Path

from tests.conftest import SWAPPED3_PREFIX_18

PROJECT_ROOT = Path(__file__).parent.parent
SCRIPT = PROJECT_ROOT / "scripts" / "run.py"


def run_script(args, tmp_path, stdin=None):
    # Set PYTHONPATH to project root so 'engine' can be imported
    env = os.environ.copy()
    env["PYTHONPATH"] = str(PROJECT_ROOT) + os.pathsep + env.get("PYTHONPATH", "")
    env["LSM_PROJECT_ROOT"] = str(tmp_path)
    return subprocess.run(
        [sys.executable, str(SCRIPT), *args],
        cwd=tmp_path,
        input=stdin,
        capture_output=True,
        text=True,
        env=env,
    )


def install_squares(tmp_path):
    shutil.copytree(PROJECT_ROOT / "squares", tmp_path / "squares")


def test_gen_pipes_into_check(tmp_path):
    install_squares(tmp_path)
    gen = run_script(["gen", "--square", "nongroup6", "--seed", "4", "--length", "5000"], tmp_path)
    assert gen.returncode == 0, f"gen failed: {gen.stderr}"
    check = run_script(["check", "--stdin"], tmp_path, stdin=gen.stdout)
    assert check.returncode == 0, f"check failed: {check.stderr}"
    assert check.stdout == "overlap-free length=5000\n"


def test_gen_swapped_z3_square_end_to_end(tmp_path):
    install_squares(tmp_path)
    result = run_script(["gen", "--square", "swapped3", "--seed", "1", "--length", "18"], tmp_path)
    assert result.returncode == 0, result.stderr
    assert result.stdout == SWAPPED3_PREFIX_18 + "\n"


def test_project_root_override_hides_repo_squares(tmp_path):
    result = run_script(["gen", "--square", "swapped3", "--seed", "1", "--length", "18"], tmp_path)
    assert result.returncode == 2
    assert "error:" in result.stderr


def test_verify_persists_reports(tmp_path):
    install_squares(tmp_path)
    out_dir = tmp_path / "runs" / "swapped3"
    result = run_script(
        ["verify", "--square", "swapped3", "--length", "3000", "--oracle-length", "300", "--output", str(out_dir)],
        tmp_path,
    )
    assert result.returncode == 0, result.stderr
    assert (out_dir / "summary.json").exists()
    assert (out_dir / "reports.parquet").exists() or (out_dir / "reports.csv").exists()
    assert len(result.stdout.splitlines()) == 3


def test_check_exit_code_for_overlap(tmp_path):
    result = run_script(["check", "--word", "0110110"], tmp_path)
    assert result.returncode == 1
    assert result.stdout.startswith("overlap start=1 period=3")
