"""Command-line entry point: ``typeqal strip|sim|check|score``.

Exit codes: 0 success, 1 partial failure (per-file errors, zero cases),
2 usage or configuration error, 3 checker executable missing, 4 checker
timeout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import attrdb, checker, curation, harvest, stripper

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_NO_CHECKER = 3
EXIT_TIMEOUT = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typeqal",
        description="Measure the quality of Python type annotations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_strip = sub.add_parser("strip", help="remove annotations from a repository")
    p_strip.add_argument("src", help="typed source repository")
    p_strip.add_argument("dst", help="output directory for the stripped copy")
    p_strip.add_argument("--report", metavar="PATH", help="write summary JSON here")
    p_strip.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                         help="parallel per-file workers (default: CPU count)")

    p_sim = sub.add_parser("sim", help="score predicted stubs against ground truth")
    p_sim.add_argument("truth_repo", help="repository with ground-truth annotations")
    p_sim.add_argument("stub_dir", help="directory of predicted .pyi files")
    p_sim.add_argument("--attr-db", metavar="PATH",
                       help="attribute database (default: bundled snapshot)")
    p_sim.add_argument("--rare-threshold", type=int, default=1,
                       help="max in-repo frequency for a type to count as rare")
    p_sim.add_argument("--strict-names", action="store_true",
                       help="require fully qualified name equality")
    p_sim.add_argument("--report", metavar="PATH", help="write report JSON here")
    p_sim.add_argument("--csv", metavar="PATH", help="write per-case CSV here")

    p_check = sub.add_parser("check", help="run the static checker over repo + stubs")
    p_check.add_argument("repo", help="repository to check")
    p_check.add_argument("stub_dir", help="directory of predicted .pyi files")
    p_check.add_argument("--checker-cmd", default=checker.DEFAULT_COMMAND,
                         help="checker command template with {tree} placeholder")
    p_check.add_argument("--whitelist", default=",".join(sorted(checker.DEFAULT_WHITELIST)),
                         help="comma-separated error codes that count")
    p_check.add_argument("--timeout", type=float, default=checker.DEFAULT_TIMEOUT,
                         help="checker timeout in seconds")
    p_check.add_argument("--out", metavar="DIR",
                         help="where to build the merged tree (default: temp dir)")
    p_check.add_argument("--report", metavar="PATH", help="write report JSON here")

    p_score = sub.add_parser("score", help="rank candidate repositories")
    p_score.add_argument("metadata", help="JSON array of repository metadata")
    p_score.add_argument("--out", metavar="PATH", help="CSV output (default: stdout)")
    p_score.add_argument("--weights", default=None, metavar="A,B,G",
                         help="coverage,popularity,complexity weights")
    p_score.add_argument("--max-tokens", type=int, default=1_500_000)
    p_score.add_argument("--min-files", type=int, default=30)
    p_score.add_argument("--min-typed-ratio", type=float, default=0.5)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "strip":
            return cmd_strip(args)
        if args.command == "sim":
            return cmd_sim(args)
        if args.command == "check":
            return cmd_check(args)
        return cmd_score(args)
    except BrokenPipeError:  # pragma: no cover
        return EXIT_PARTIAL


def entrypoint() -> None:  # pragma: no cover - console script shim
    sys.exit(main())


def _fail(message: str, code: int) -> int:
    print(f"typeqal: error: {message}", file=sys.stderr)
    return code


def cmd_strip(args) -> int:
    if not Path(args.src).is_dir():
        return _fail(f"source directory not found: {args.src}", EXIT_USAGE)
    if args.jobs < 1:
        return _fail("--jobs must be >= 1", EXIT_USAGE)
    summary = stripper.strip_repo(args.src, args.dst, workers=args.jobs)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(summary.to_json(), handle, indent=2, sort_keys=True)
            handle.write("\n")
    print(f"stripped files={summary.files} edits={summary.edits} "
          f"failures={len(summary.failures)}")
    for failure in summary.failures:
        print(f"  failed: {failure['path']}: {failure['error']}", file=sys.stderr)
    return EXIT_OK if not summary.failures else EXIT_PARTIAL


def _load_db(args):
    path = args.attr_db or attrdb.default_db_path()
    if not Path(path).is_file():
        raise FileNotFoundError(f"attribute database not found: {path}")
    return attrdb.load_attrdb(path, strict_names=getattr(args, "strict_names", False))


def cmd_sim(args) -> int:
    if not Path(args.truth_repo).is_dir():
        return _fail(f"truth repository not found: {args.truth_repo}", EXIT_USAGE)
    if not Path(args.stub_dir).is_dir():
        return _fail(f"stub directory not found: {args.stub_dir}", EXIT_USAGE)
    if args.rare_threshold < 0:
        return _fail("--rare-threshold must be >= 0", EXIT_USAGE)
    try:
        db = _load_db(args)
    except (OSError, attrdb.SchemaError) as exc:
        return _fail(str(exc), EXIT_USAGE)

    truth = harvest.harvest_truth(args.truth_repo)
    if not truth.cases:
        return _fail("no annotated cases harvested from the truth repository",
                     EXIT_PARTIAL)
    predictions, warnings = harvest.parse_stub_dir(args.stub_dir)
    records, metrics = harvest.evaluate(
        truth.cases, predictions, db,
        rare_threshold=args.rare_threshold,
        function_count=truth.function_count,
    )
    if args.report:
        doc = harvest.report_json(args.truth_repo, metrics, records,
                                  warnings=truth.warnings + warnings)
        harvest.write_report(args.report, doc)
    if args.csv:
        harvest.write_cases_csv(args.csv, records)
    print(f"typesim={metrics.typesim_overall:.3f} "
          f"wo_missing={metrics.typesim_wo_missing:.3f} "
          f"missing={metrics.missing_rate:.3f}")
    return EXIT_OK


def cmd_check(args) -> int:
    if not Path(args.repo).is_dir():
        return _fail(f"repository not found: {args.repo}", EXIT_USAGE)
    if not Path(args.stub_dir).is_dir():
        return _fail(f"stub directory not found: {args.stub_dir}", EXIT_USAGE)
    whitelist = frozenset(code.strip() for code in args.whitelist.split(",")
                          if code.strip())
    with tempfile.TemporaryDirectory(prefix="typeqal-check-") as scratch:
        out = Path(args.out) if args.out else Path(scratch) / "merged"
        apply_result = checker.apply_stubs(args.repo, args.stub_dir, out)
        for warning in apply_result.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        try:
            report = checker.run_typecheck(out, command=args.checker_cmd,
                                           whitelist=whitelist,
                                           timeout=args.timeout)
        except checker.CheckerNotFound as exc:
            return _fail(str(exc), EXIT_NO_CHECKER)
        except checker.CheckerCrashed as exc:
            print(exc.output, file=sys.stderr)
            return _fail(str(exc), EXIT_PARTIAL)
    if args.report:
        checker.write_report(args.report, report)
    if report.status == "timeout":
        print("typecheck=N/A")
        return EXIT_TIMEOUT
    print(f"typecheck={report.counted}")
    return EXIT_OK


def cmd_score(args) -> int:
    if args.weights is None:
        weights = curation.CurationWeights()
    else:
        try:
            alpha, beta, gamma = (float(x) for x in args.weights.split(","))
            weights = curation.CurationWeights(alpha, beta, gamma)
        except ValueError as exc:
            return _fail(f"bad --weights: {exc}", EXIT_USAGE)
    limits = curation.FilterLimits(max_tokens=args.max_tokens,
                                   min_files=args.min_files,
                                   min_typed_ratio=args.min_typed_ratio)
    try:
        metas = curation.load_metadata(args.metadata)
    except (OSError, curation.MetadataError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    ranked = curation.rank_candidates(metas, weights, limits)
    if args.out:
        curation.write_ranked_csv(args.out, ranked)
    else:
        curation.write_ranked_csv("/dev/stdout", ranked)
    return EXIT_OK
