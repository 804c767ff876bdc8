"""Command-line front end.

Exit codes: 0 success / property holds, 1 witness found where none is
expected (or a control certifying nothing), 2 invalid input.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple

from engine.artifacts import write_reports
from engine.config import load_suite_config, resolve_square_path
from engine.latin import LatinSquare, as_natural, cayley_zn, enumerate_natural, format_square_text, load_square, save_square, to_morphism
from engine.logging_utils import get_logger
from engine.repetition import find_overlap_fast, format_witness, witness_to_dict
from engine.structure import check_decimation_identity, decimate, tiles
from engine.verify import (
    SuiteResult,
    SweepSummary,
    VerificationReport,
    explore_order,
    negative_controls,
    run_suite,
    sweep_order,
    verify_featured,
)
from engine.words import FixedPointStream, Morphism, fixed_point_prefix, format_word, load_morphism, parse_word

DEFAULT_SWEEP_LENGTH = 10_000
DEFAULT_FEATURED_LENGTH = 100_000

logger = get_logger()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsm",
        description="Fixed points of Latin-square morphisms and overlap detection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Print a prefix of a fixed point")
    _add_source(gen, allow_morphism=True)
    gen.add_argument("--seed", type=int, required=True, help="Seed letter (1-based; 0-based with --cayley)")
    gen.add_argument("--length", type=int, required=True)
    gen.add_argument("--sep", default=None, help="Letter separator (default: digits when n <= 9)")

    check = sub.add_parser("check", help="Look for an overlap in a word")
    src = check.add_mutually_exclusive_group(required=True)
    src.add_argument("--word")
    src.add_argument("--stdin", action="store_true")
    src.add_argument("--file")
    check.add_argument("--json", action="store_true", help="Machine-readable output")

    enum = sub.add_parser("enumerate", help="Enumerate natural-first-column Latin squares")
    enum.add_argument("--order", type=int, required=True)
    mode = enum.add_mutually_exclusive_group()
    mode.add_argument("--count-only", action="store_true")
    mode.add_argument("--emit", metavar="DIR", help="Write each square to DIR/<id>.txt")

    til = sub.add_parser("tiles", help="Show the tiling of a fixed point in bar notation")
    _add_source(til, allow_morphism=False)
    til.add_argument("--seed", type=int, required=True)
    til.add_argument("--count", type=int, required=True)

    dec = sub.add_parser("decimate", help="Decimate a fixed point at a column offset")
    _add_source(dec, allow_morphism=False)
    dec.add_argument("--seed", type=int, required=True)
    dec.add_argument("--offset", type=int, required=True, help="Column offset i in 1..n")
    dec.add_argument("--length", type=int, required=True, help="Length of the decimated word")
    dec.add_argument("--check-pi", action="store_true", help="Check decimation against the column permutation")

    ver = sub.add_parser("verify", help="Certify fixed points overlap-free up to a prefix length")
    target = ver.add_mutually_exclusive_group()
    target.add_argument("--order", type=int)
    target.add_argument("--square")
    target.add_argument("--suite", help="Suite YAML (default: suites/default.yaml)")
    ver.add_argument("--length", type=int, default=None)
    ver.add_argument("--jobs", type=int, default=None)
    ver.add_argument("--oracle-length", type=int, default=0)
    ver.add_argument("--format", choices=["text", "json"], default="text")
    ver.add_argument("--output", metavar="DIR", help="Persist reports and summary.json to DIR")
    ver.add_argument("--explore", action="store_true", help="With --order: every prolongable non-natural square")
    ver.add_argument("--allow-large", action="store_true", help="Permit order >= 6 sweeps")

    ctl = sub.add_parser("controls", help="Run the negative controls")
    ctl.add_argument("--length", type=int, default=200)
    return parser


def _add_source(p: argparse.ArgumentParser, allow_morphism: bool) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--square", help="Square file or name under squares/")
    group.add_argument("--cayley", type=int, metavar="N", help="Addition table of Z/NZ (0-based letters)")
    if allow_morphism:
        group.add_argument("--morphism", help="Morphism file, one 1-based image per line")


def _load_square_arg(value: str) -> LatinSquare:
    path = Path(value)
    if path.is_file():
        return load_square(path)
    return load_square(resolve_square_path(value))


def _source(args: argparse.Namespace) -> Tuple[Morphism, int, Optional[LatinSquare]]:
    """(morphism, display base, square) for the chosen source."""
    if args.cayley is not None:
        square = cayley_zn(args.cayley)
        return to_morphism(square), 0, square
    if getattr(args, "morphism", None):
        return load_morphism(args.morphism), 1, None
    square = as_natural(_load_square_arg(args.square))
    return to_morphism(square), 1, square


def _seed(args: argparse.Namespace, base: int, n: int) -> int:
    seed = args.seed - base
    if not 0 <= seed < n:
        raise ValueError(f"seed {args.seed} outside {base}..{n - 1 + base}")
    return seed


def cmd_gen(args: argparse.Namespace, out: TextIO) -> int:
    morphism, base, _ = _source(args)
    if args.length < 0:
        raise ValueError("length must be >= 0")
    prefix = fixed_point_prefix(morphism, _seed(args, base, morphism.alphabet_size), args.length)
    out.write(format_word(prefix, base, args.sep) + "\n")
    return 0


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    if args.stdin:
        text = sys.stdin.read()
    elif args.file:
        text = Path(args.file).read_text(encoding="utf-8")
    else:
        text = args.word
    # Letters are checked exactly as written; relabelling cannot create or remove overlaps.
    w = parse_word(text, base=0)
    witness = find_overlap_fast(w)
    if args.json:
        payload = {"length": len(w), "overlap_free": witness is None}
        payload["witness"] = witness_to_dict(w, witness) if witness else None
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    elif witness is None:
        out.write(f"overlap-free length={len(w)}\n")
    else:
        out.write(format_witness(w, witness) + "\n")
    return 0 if witness is None else 1


def cmd_enumerate(args: argparse.Namespace, out: TextIO) -> int:
    if args.order < 1:
        raise ValueError(f"invalid order {args.order}: must be >= 1")
    if args.count_only:
        out.write(f"{sum(1 for _ in enumerate_natural(args.order))}\n")
        return 0
    emit_dir = Path(args.emit) if args.emit else None
    if emit_dir is not None:
        emit_dir.mkdir(parents=True, exist_ok=True)
    count = 0
    for count, square in enumerate(enumerate_natural(args.order), start=1):
        if emit_dir is not None:
            save_square(square, emit_dir / f"n{args.order}-{count:05d}.txt")
        else:
            if count > 1:
                out.write("\n")
            out.write(format_square_text(square))
    if emit_dir is not None:
        out.write(f"{count}\n")
    return 0


def cmd_tiles(args: argparse.Namespace, out: TextIO) -> int:
    morphism, base, _ = _source(args)
    stream = FixedPointStream(morphism, _seed(args, base, morphism.alphabet_size))
    out.write(tiles(stream, args.count).render(base) + "\n")
    return 0


def cmd_decimate(args: argparse.Namespace, out: TextIO) -> int:
    morphism, base, square = _source(args)
    n = morphism.alphabet_size
    seed = _seed(args, base, n)
    if args.length < 0:
        raise ValueError("length must be >= 0")
    prefix = fixed_point_prefix(morphism, seed, args.length * n)
    out.write(format_word(decimate(prefix, args.offset, n), base) + "\n")
    if args.check_pi:
        holds = check_decimation_identity(as_natural(square), seed, args.offset, args.length)
        out.write(f"decimation identity {'holds' if holds else 'FAILS'} offset={args.offset} length={args.length}\n")
        return 0 if holds else 1
    return 0


def _sweep_lines(summary: SweepSummary) -> List[str]:
    status = "FAIL" if summary.failures else "ok"
    head = (
        f"{status} order={summary.order} squares={summary.squares} pairs={summary.pairs} "
        f"length={summary.length} failures={len(summary.failures)}"
    )
    return [head] + [r.render() for r in summary.failures]


def _emit(
    args: argparse.Namespace,
    out: TextIO,
    payload: dict,
    reports: Sequence[VerificationReport],
    lines: List[str],
) -> None:
    if args.format == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.writelines(line + "\n" for line in lines)
    if args.output:
        write_reports(reports, payload, args.output)


def _length_or(args: argparse.Namespace, default: int) -> int:
    return default if args.length is None else args.length


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    jobs = args.jobs if args.jobs is not None else 1
    if jobs < 1:
        raise ValueError("--jobs must be >= 1")
    if args.output and (Path(args.output) / "summary.json").exists():
        raise ValueError(f"output directory is already finalized: {args.output}")
    if args.explore:
        if args.order is None:
            raise ValueError("--explore needs --order")
        reports = explore_order(args.order, _length_or(args, DEFAULT_SWEEP_LENGTH), allow_large=args.allow_large)
        payload = {"explore_order": args.order, "reports": [r.to_dict(include_elapsed=False) for r in reports]}
        _emit(args, out, payload, reports, [r.render() for r in reports])
        return 0

    if args.order is not None:
        summary = sweep_order(args.order, _length_or(args, DEFAULT_SWEEP_LENGTH), jobs=jobs, allow_large=args.allow_large)
        _emit(args, out, summary.to_dict(), summary.reports, _sweep_lines(summary))
        return 1 if summary.failures else 0

    if args.square is not None:
        square = _load_square_arg(args.square)
        name = Path(args.square).stem
        reports = verify_featured(square, name, _length_or(args, DEFAULT_FEATURED_LENGTH), args.oracle_length, jobs)
        payload = {"square": name, "reports": [r.to_dict(include_elapsed=False) for r in reports]}
        _emit(args, out, payload, reports, [r.render() for r in reports])
        return 1 if any(r.failed for r in reports) else 0

    result: SuiteResult = run_suite(load_suite_config(args.suite), jobs=args.jobs)
    lines = [line for s in result.sweeps for line in _sweep_lines(s)]
    lines.extend(r.render() for r in result.featured + result.controls)
    lines.append(f"failures={len(result.failures)}")
    _emit(args, out, result.to_dict(), result.reports(), lines)
    return 1 if result.failures else 0


def cmd_controls(args: argparse.Namespace, out: TextIO) -> int:
    reports = negative_controls(args.length)
    for report in reports:
        out.write(report.render() + "\n")
    return 1 if any(r.failed for r in reports) else 0


COMMANDS = {
    "gen": cmd_gen,
    "check": cmd_check,
    "enumerate": cmd_enumerate,
    "tiles": cmd_tiles,
    "decimate": cmd_decimate,
    "verify": cmd_verify,
    "controls": cmd_controls,
}


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (ValueError, KeyError, OSError) as e:
        logger.error("command_error", extra={"stage": args.command, "error": str(e)})
        sys.stderr.write(f"error: {e}\n")
        return 2
    except RuntimeError as e:
        logger.error("command_error", extra={"stage": args.command, "error": str(e)})
        sys.stderr.write(f"error: {e}\n")
        return 1


def main() -> None:
    sys.exit(run())
