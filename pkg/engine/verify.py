"""Finite-depth certification that Latin-square fixed points are overlap-free.

Every report states "overlap-free up to L": a prefix check cannot decide the
infinite word. Order 1 is excluded because 111... is itself an overlap.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from time import perf_counter
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from engine.config import SuiteConfig, resolve_square_path
from engine.latin import LatinSquare, NaturalLatinSquare, as_natural, enumerate_all, enumerate_natural, load_square, to_morphism, validate
from engine.logging_utils import get_logger, log_stage
from engine.repetition import OverlapWitness, find_overlap_fast, find_overlap_naive, verify_witness
from engine.structure import overlap_residues, residue_identity_holds
from engine.words import Word, fixed_point_prefix, format_word, morphism_from_rows, relabel

OVERLAP_FREE = "overlap-free"
WITNESS_FOUND = "witness found"
DETECTOR = "lce-anchor"

# Defective row tables (0-based) whose fixed points must contain overlaps.
CONTROL_TABLES: Tuple[Tuple[str, Tuple[Tuple[int, ...], ...]], ...] = (
    ("control-unary", ((0, 0), (1, 1))),
    ("control-column-duplicate", ((0, 1), (1, 1))),
    ("control-width3", ((0, 1, 0), (1, 0, 1), (2, 0, 2))),
)

logger = get_logger()


@dataclass(frozen=True)
class VerificationReport:
    square_id: str
    seed: int
    length: int
    verdict: str
    witness: Optional[OverlapWitness]
    elapsed_seconds: float
    detector: str = DETECTOR
    expected: Optional[str] = OVERLAP_FREE
    witness_c: Optional[int] = None
    witness_x: Optional[str] = None
    residues: Optional[Tuple[int, int, int]] = None
    base: int = 1

    @property
    def failed(self) -> bool:
        return self.expected is not None and self.verdict != self.expected

    def to_dict(self, include_elapsed: bool = True) -> Dict[str, Any]:
        payload = {
            "square_id": self.square_id,
            "seed": self.seed + self.base,
            "length": self.length,
            "verdict": self.verdict,
            "expected": self.expected,
            "detector": self.detector,
            "witness": None,
        }
        if self.witness is not None:
            payload["witness"] = {
                "start": self.witness.start + 1,
                "period": self.witness.period,
                "c": self.witness_c,
                "x": self.witness_x,
                "residues": list(self.residues) if self.residues else None,
            }
        if include_elapsed:
            payload["elapsed_seconds"] = round(self.elapsed_seconds, 6)
        return payload

    def render(self) -> str:
        head = f"{self.square_id} seed={self.seed + self.base} length={self.length}"
        if self.witness is None:
            body = f"{OVERLAP_FREE} up to L={self.length}"
        else:
            body = (
                f"overlap start={self.witness.start + 1} period={self.witness.period} "
                f"c={self.witness_c} x={self.witness_x}"
            )
        status = "FAIL" if self.failed else "ok"
        return f"{status} {head} {body} detector={self.detector} elapsed={self.elapsed_seconds:.3f}s"


@dataclass(frozen=True)
class SweepSummary:
    order: int
    squares: int
    pairs: int
    length: int
    failures: Tuple[VerificationReport, ...]
    reports: Tuple[VerificationReport, ...] = field(default=(), repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "squares": self.squares,
            "pairs": self.pairs,
            "length": self.length,
            "failures": [r.to_dict(include_elapsed=False) for r in self.failures],
        }


@dataclass(frozen=True)
class SuiteResult:
    sweeps: Tuple[SweepSummary, ...]
    featured: Tuple[VerificationReport, ...]
    controls: Tuple[VerificationReport, ...]

    @property
    def failures(self) -> List[VerificationReport]:
        out = [r for s in self.sweeps for r in s.failures]
        out.extend(r for r in self.featured if r.failed)
        out.extend(r for r in self.controls if r.failed)
        return out

    def reports(self) -> List[VerificationReport]:
        out = [r for s in self.sweeps for r in s.reports]
        out.extend(self.featured)
        out.extend(self.controls)
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sweeps": [s.to_dict() for s in self.sweeps],
            "featured": [r.to_dict(include_elapsed=False) for r in self.featured],
            "controls": [r.to_dict(include_elapsed=False) for r in self.controls],
            "failure_count": len(self.failures),
        }


def _certify(
    prefix: Word,
    square_id: str,
    seed: int,
    expected: Optional[str],
    tile_length: int,
    oracle_length: int,
    started: float,
) -> VerificationReport:
    # Fast detector first; any witness is re-checked letter by letter, by the
    # naive oracle on its own neighbourhood, and against the residue identity.
    witness = find_overlap_fast(prefix)
    c = x = residues = None
    if witness is not None:
        if not verify_witness(prefix, witness):
            raise RuntimeError(f"{square_id}: detector returned an invalid witness {witness}")
        neighbourhood = prefix[witness.start : witness.start + witness.span]
        if find_overlap_naive(neighbourhood) is None:
            raise RuntimeError(f"{square_id}: naive oracle rejects witness {witness}")
        residues = overlap_residues(witness, tile_length)
        if not residue_identity_holds(residues, tile_length):
            raise RuntimeError(f"{square_id}: residues {residues} break r3 = 2 r2 - r1 (mod {tile_length})")
        c = witness.c(prefix) + 1
        x = format_word(witness.x(prefix), base=1)
    if oracle_length:
        head = prefix[:oracle_length]
        if (find_overlap_naive(head) is None) != (find_overlap_fast(head) is None):
            raise RuntimeError(f"{square_id}: fast and naive detectors disagree on the {len(head)}-prefix")
    return VerificationReport(
        square_id=square_id,
        seed=seed,
        length=len(prefix),
        verdict=OVERLAP_FREE if witness is None else WITNESS_FOUND,
        witness=witness,
        elapsed_seconds=perf_counter() - started,
        expected=expected,
        witness_c=c,
        witness_x=x,
        residues=residues,
    )


def verify_fixed_point(
    square: NaturalLatinSquare,
    seed: int,
    length: int,
    square_id: str = "custom",
    oracle_length: int = 0,
) -> VerificationReport:
    """Check the length-L prefix of the fixed point of `square` started at `seed`.

    Inputs:
      - square: natural Latin square of order n >= 2
      - seed: 0-based letter
      - length: prefix length L >= n
      - oracle_length: if > 0, also compare fast and naive detectors on that prefix
    Output:
      - VerificationReport; a witness on a Latin square is an unexpected overlap
        and is logged at ERROR, never dropped.
    """
    square = as_natural(square)
    n = square.order
    if n < 2:
        raise ValueError("order 1 is excluded: the fixed point 111... is an overlap")
    if length < n:
        raise ValueError(f"prefix length {length} must be >= order {n}")
    started = perf_counter()
    prefix = fixed_point_prefix(to_morphism(square), seed, length)
    report = _certify(prefix, square_id, seed, OVERLAP_FREE, n, oracle_length, started)
    if report.failed:
        logger.error(
            "unexpected_overlap",
            extra={"square": square_id, "seed": seed + 1, "length": length, "stage": "verify"},
        )
    else:
        logger.debug(
            "pair_verified",
            extra={"square": square_id, "seed": seed + 1, "length": length, "elapsed_seconds": report.elapsed_seconds},
        )
    return report


def _verify_task(task: Tuple[str, List[List[int]], int, int, int]) -> VerificationReport:
    square_id, rows, seed, length, oracle_length = task
    return verify_fixed_point(as_natural(validate(rows)), seed, length, square_id, oracle_length)


def _run_tasks(tasks: Sequence[Tuple], jobs: int) -> List[VerificationReport]:
    if jobs <= 1 or len(tasks) < 2:
        reports = [_verify_task(t) for t in tasks]
    else:
        chunksize = max(1, len(tasks) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_task, tasks, chunksize=chunksize))
    return sorted(reports, key=lambda r: (r.square_id, r.seed))


def square_ids(order: int, count: int) -> List[str]:
    return [f"n{order}-{i + 1:05d}" for i in range(count)]


def sweep_order(
    n: int,
    length: int,
    jobs: int = 1,
    sample: Optional[int] = None,
    allow_large: bool = False,
) -> SweepSummary:
    """Verify every natural square of order n at every seed.

    `sample` picks a deterministic subset of squares (seeded by n).
    Orders >= 6 are opt-in via allow_large.
    """
    if n < 2:
        raise ValueError("sweeps start at order 2")
    if n >= 6 and not allow_large:
        raise ValueError(f"order {n} sweeps are opt-in (allow_large=True)")
    if length < n:
        raise ValueError(f"prefix length {length} must be >= order {n}")
    squares = list(enumerate_natural(n))
    ids = square_ids(n, len(squares))
    chosen = range(len(squares))
    if sample is not None and sample < len(squares):
        rs = np.random.RandomState(n)
        chosen = sorted(rs.choice(len(squares), size=sample, replace=False).tolist())
    tasks = [(ids[i], squares[i].to_lists(), seed, length, 0) for i in chosen for seed in range(n)]

    with log_stage(logger, "sweep", order=n, length=length) as stage:
        reports = _run_tasks(tasks, jobs)
        summary = SweepSummary(
            order=n,
            squares=len(chosen),
            pairs=len(tasks),
            length=length,
            failures=tuple(r for r in reports if r.failed),
            reports=tuple(reports),
        )
        stage.update(pairs=summary.pairs, failures=len(summary.failures))
    return summary


def verify_featured(
    square: LatinSquare,
    square_id: str,
    length: int,
    oracle_length: int = 0,
    jobs: int = 1,
) -> List[VerificationReport]:
    square = as_natural(square)
    if length < square.order:
        raise ValueError(f"prefix length {length} must be >= order {square.order}")
    tasks = [(square_id, square.to_lists(), seed, length, oracle_length) for seed in range(square.order)]
    return _run_tasks(tasks, jobs)


def negative_controls(length: int = 200) -> List[VerificationReport]:
    """Defective row tables: the harness must find and certify an overlap in each."""
    reports = []
    for name, rows in CONTROL_TABLES:
        started = perf_counter()
        prefix = fixed_point_prefix(morphism_from_rows(rows), 0, length)
        report = _certify(prefix, name, 0, WITNESS_FOUND, len(rows[0]), length, started)
        if report.failed:
            logger.error("control_not_certified", extra={"square": name, "length": length, "stage": "controls"})
        else:
            logger.info("control_certified", extra={"square": name, "length": length, "stage": "controls"})
        reports.append(report)
    return reports


def check_permutation_invariance(w: Word, sigma: Sequence[int]) -> bool:
    """A letterwise relabelling has an overlap iff the original does."""
    return (find_overlap_fast(w) is None) == (find_overlap_fast(relabel(w, sigma)) is None)


def explore_order(n: int, length: int, allow_large: bool = False) -> List[VerificationReport]:
    """Exploratory: every prolongable seed of every non-natural Latin square of order n.

    No verdict is expected; reports are informational only.
    """
    if n < 2:
        raise ValueError("exploration starts at order 2")
    if n >= 5 and not allow_large:
        raise ValueError(f"order {n} exploration is opt-in (allow_large=True)")
    if length < n:
        raise ValueError(f"prefix length {length} must be >= order {n}")
    reports = []
    with log_stage(logger, "explore", order=n, length=length):
        for idx, square in enumerate(enumerate_all(n)):
            if square.is_natural():
                continue
            morphism = to_morphism(square)
            for seed in range(n):
                if not morphism.is_prolongable(seed):
                    continue
                started = perf_counter()
                prefix = fixed_point_prefix(morphism, seed, length)
                reports.append(_certify(prefix, f"all{n}-{idx + 1:06d}", seed, None, n, 0, started))
    return reports


def run_suite(config: SuiteConfig, jobs: Optional[int] = None) -> SuiteResult:
    """Config-driven certification: sweeps, featured squares, negative controls."""
    jobs = config.jobs if jobs is None else jobs
    with log_stage(logger, "suite", length=config.sweep_length) as stage:
        sweeps = tuple(sweep_order(n, config.sweep_length, jobs=jobs) for n in config.sweep_orders)
        featured: List[VerificationReport] = []
        for name in config.featured_squares:
            square = load_square(resolve_square_path(name))
            featured.extend(verify_featured(square, name, config.featured_length, config.oracle_length, jobs))
        controls = tuple(negative_controls(config.controls_length))
        result = SuiteResult(sweeps=sweeps, featured=tuple(featured), controls=controls)
        stage.update(failures=len(result.failures))
    return result
