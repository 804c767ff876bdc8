import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, Union

import pandas as pd

from engine.verify import VerificationReport

REPORT_COLUMNS = [
    "square_id",
    "seed",
    "length",
    "verdict",
    "expected",
    "failed",
    "detector",
    "witness_start",
    "witness_period",
    "witness_c",
    "witness_x",
    "r1",
    "r2",
    "r3",
    "elapsed_seconds",
]
_NULLABLE_INT = ["witness_start", "witness_period", "witness_c", "r1", "r2", "r3"]


def reports_frame(reports: Iterable[VerificationReport]) -> pd.DataFrame:
    """One row per (square, seed) report, sorted by square id then seed."""
    rows = []
    for r in reports:
        w = r.witness
        residues = r.residues or (None, None, None)
        rows.append(
            {
                "square_id": r.square_id,
                "seed": r.seed + r.base,
                "length": r.length,
                "verdict": r.verdict,
                "expected": r.expected,
                "failed": r.failed,
                "detector": r.detector,
                "witness_start": w.start + 1 if w else None,
                "witness_period": w.period if w else None,
                "witness_c": r.witness_c,
                "witness_x": r.witness_x,
                "r1": residues[0],
                "r2": residues[1],
                "r3": residues[2],
                "elapsed_seconds": r.elapsed_seconds,
            }
        )
    df = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    df = df.astype({c: "Int64" for c in _NULLABLE_INT})
    return df.sort_values(["square_id", "seed"], kind="stable").reset_index(drop=True)


def _write_dataframe(df: pd.DataFrame, out_dir: Path) -> str:
    # Parquet if pyarrow is usable, else CSV; temp file then rename.
    try:
        tmp_fd, tmp_path = tempfile.mkstemp(suffix=".parquet", dir=out_dir)
        os.close(tmp_fd)
        try:
            df.to_parquet(tmp_path, index=False)
        except Exception:
            os.remove(tmp_path)
            raise
        os.replace(tmp_path, out_dir / "reports.parquet")
        return "reports.parquet"
    except Exception:
        tmp_fd, tmp_path = tempfile.mkstemp(suffix=".csv", dir=out_dir)
        os.close(tmp_fd)
        try:
            df.to_csv(tmp_path, index=False)
        except Exception:
            os.remove(tmp_path)
            raise
        os.replace(tmp_path, out_dir / "reports.csv")
        return "reports.csv"


def _atomic_write_json(path: Path, payload: Dict[str, Any]) -> None:
    tmp_path = path.with_suffix(".tmp")
    with open(tmp_path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp_path, path)


def write_reports(
    reports: Iterable[VerificationReport],
    summary: Dict[str, Any],
    out_dir: Union[str, Path],
) -> Path:
    """Persist a verification run: reports table plus summary.json.

    summary.json is written last and marks the directory as finalized; a
    finalized directory is never overwritten (RuntimeError).
    """
    out_dir = Path(out_dir)
    summary_path = out_dir / "summary.json"
    if summary_path.exists():
        raise RuntimeError(f"Run is already finalized: {summary_path}")
    out_dir.mkdir(parents=True, exist_ok=True)

    df = reports_frame(reports)
    data_file = _write_dataframe(df, out_dir)
    payload = dict(summary)
    payload["artifacts"] = {"reports": data_file, "summary": "summary.json"}
    payload["report_count"] = int(len(df))
    payload["finalized_at_utc"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    _atomic_write_json(summary_path, payload)
    return summary_path
