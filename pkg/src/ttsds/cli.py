"""Command-line interface.

Subcommands mirror the benchmark workflow: `extract` and `gen-noise` build
dataset directories, `score` runs a benchmark manifest, `validate`
correlates reports with subjective ratings, and `compare` runs pairwise
significance tests between reports.

Exit codes: 0 success, 1 usage error, 2 data or validation error,
3 numerical error. Given a seed, every output file is byte-deterministic,
whatever --jobs is.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import DataError, EngineError, NumericalError
from .extractors import NoiseKind, PitchConfig
from .pipeline import extract_dataset, generate_noise_dataset
from .scoring import (
    ScoreReport,
    load_benchmark_manifest,
    render_score_table,
    run_benchmark,
)
from .stats import RankedSeries, pairwise_p_values, spearman

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures remapped from exit code 2 to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _named_path(value: str) -> tuple[str, str]:
    name, sep, path = value.partition("=")
    if not sep or not name or not path:
        raise argparse.ArgumentTypeError(f"expected NAME=PATH, got '{value}'")
    return name, path


def _noise_kinds(value: str) -> list[NoiseKind]:
    kinds = []
    for part in value.split(","):
        try:
            kinds.append(NoiseKind(part.strip()))
        except ValueError:
            choices = ", ".join(k.value for k in NoiseKind)
            raise argparse.ArgumentTypeError(
                f"unknown noise kind '{part.strip()}' (choices: {choices})"
            ) from None
    return kinds


def _paths_list(value: str) -> list[str]:
    parts = [p for p in (s.strip() for s in value.split(",")) if p]
    if not parts:
        raise argparse.ArgumentTypeError("expected a comma-separated path list")
    return parts


def build_parser() -> _Parser:
    parser = _Parser(prog="ttsds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ttsds {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    extract = sub.add_parser(
        "extract",
        help="run native extractors over a WAV directory, emit a dataset",
    )
    extract.add_argument("--wavs", required=True, help="directory of .wav files")
    extract.add_argument("--out", required=True, help="dataset output directory")
    extract.add_argument("--dataset-id", required=True)
    extract.add_argument(
        "--role",
        default="candidate",
        choices=("candidate", "reference", "distractor"),
    )
    extract.add_argument("--transcripts", help="id<TAB>text reference transcript TSV")
    extract.add_argument(
        "--hypotheses",
        action="append",
        default=[],
        type=_named_path,
        metavar="NAME=PATH",
        help="recognizer hypothesis TSV, repeatable",
    )
    extract.add_argument(
        "--tokens",
        action="append",
        default=[],
        type=_named_path,
        metavar="NAME=PATH",
        help="tokenizer token file, repeatable",
    )
    extract.add_argument("--frame-ms", type=float, default=PitchConfig.frame_ms)
    extract.add_argument("--hop-ms", type=float, default=PitchConfig.hop_ms)
    extract.add_argument("--f0-min", type=float, default=PitchConfig.f0_min)
    extract.add_argument("--f0-max", type=float, default=PitchConfig.f0_max)
    extract.add_argument("--yin-threshold", type=float, default=PitchConfig.threshold)
    extract.add_argument("--jobs", type=int, default=1)

    gen_noise = sub.add_parser(
        "gen-noise", help="synthesize distractor noise datasets"
    )
    gen_noise.add_argument("--out", required=True, help="parent output directory")
    gen_noise.add_argument(
        "--kinds",
        type=_noise_kinds,
        default=list(NoiseKind),
        help="comma-separated subset of uniform,normal,zeros,ones",
    )
    gen_noise.add_argument("--count", type=int, default=100)
    gen_noise.add_argument("--duration-s", type=float, default=3.0)
    gen_noise.add_argument("--sample-rate", type=int, default=16000)
    gen_noise.add_argument("--seed", type=int, default=0)
    gen_noise.add_argument(
        "--skip-features",
        action="store_true",
        help="write WAV files only, no feature tables",
    )
    gen_noise.add_argument("--jobs", type=int, default=1)

    score = sub.add_parser("score", help="run a benchmark manifest")
    score.add_argument("--manifest", required=True, help="benchmark manifest JSON")
    score.add_argument("--out", required=True, help="report JSON output path")
    score.add_argument("--table", action="store_true", help="print an aligned table")
    score.add_argument("--jobs", type=int, default=1)
    score.add_argument("--seed", type=int, help="override the manifest seed")
    score.add_argument("--max-obs", type=int, help="override the manifest max_obs")

    validate = sub.add_parser(
        "validate", help="Spearman correlation of reports vs subjective ratings"
    )
    validate.add_argument(
        "--reports", required=True, type=_paths_list, help="comma-separated reports"
    )
    validate.add_argument(
        "--subjective", required=True, help="CSV with header system_id,value"
    )
    validate.add_argument("--out", help="write the result as JSON")

    compare = sub.add_parser(
        "compare", help="pairwise Wilcoxon tests between report feature scores"
    )
    compare.add_argument(
        "--reports", required=True, type=_paths_list, help="comma-separated reports"
    )
    compare.add_argument("--alpha", type=float, default=0.05)
    compare.add_argument("--out", help="write the matrices as JSON")
    return parser


def _print_warnings(warnings) -> None:
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)


def _cmd_extract(args) -> int:
    _, warnings = extract_dataset(
        args.wavs,
        args.out,
        args.dataset_id,
        args.role,
        transcripts=args.transcripts,
        hypotheses={name: Path(path) for name, path in args.hypotheses},
        tokens={name: Path(path) for name, path in args.tokens},
        pitch_config=PitchConfig(
            frame_ms=args.frame_ms,
            hop_ms=args.hop_ms,
            f0_min=args.f0_min,
            f0_max=args.f0_max,
            threshold=args.yin_threshold,
        ),
        jobs=args.jobs,
    )
    _print_warnings(warnings)
    print(f"wrote dataset '{args.dataset_id}' to {args.out}")
    return EXIT_OK


def _cmd_gen_noise(args) -> int:
    out = Path(args.out)
    for kind in args.kinds:
        manifest, warnings = generate_noise_dataset(
            out / f"noise_{kind.value}",
            kind,
            count=args.count,
            duration_s=args.duration_s,
            sample_rate=args.sample_rate,
            seed=args.seed,
            write_features=not args.skip_features,
            jobs=args.jobs,
        )
        _print_warnings(warnings)
        print(f"wrote dataset '{manifest.dataset_id}' to {out / ('noise_' + kind.value)}")
    return EXIT_OK


def _cmd_score(args) -> int:
    manifest = load_benchmark_manifest(args.manifest)
    if args.seed is not None:
        manifest = replace(manifest, seed=args.seed)
    if args.max_obs is not None:
        manifest = replace(manifest, max_obs=args.max_obs)
    report = run_benchmark(manifest, jobs=args.jobs)
    Path(args.out).write_text(report.to_json(), "utf-8")
    _print_warnings(report.warnings)
    if args.table:
        print(render_score_table([report]), end="")
    else:
        print(f"ttsds {report.ttsds:.4f} -> {args.out}")
    return EXIT_OK


def _load_reports(paths) -> list[ScoreReport]:
    reports = []
    for path in paths:
        try:
            doc = json.loads(Path(path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"{path}: cannot read report: {exc}") from exc
        reports.append(ScoreReport.from_dict(doc))
    ids = [r.candidate_id for r in reports]
    if len(set(ids)) != len(ids):
        duplicate = next(d for d in ids if ids.count(d) > 1)
        raise DataError(f"duplicate candidate id '{duplicate}' across reports")
    return reports


def _load_subjective(path) -> dict[str, float]:
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or not {
                "system_id",
                "value",
            } <= set(reader.fieldnames):
                raise DataError(
                    f"{path}: need a CSV header with columns system_id,value"
                )
            out: dict[str, float] = {}
            for row in reader:
                system_id = row["system_id"]
                if system_id in out:
                    raise DataError(f"{path}: duplicate system_id '{system_id}'")
                try:
                    out[system_id] = float(row["value"])
                except (TypeError, ValueError):
                    raise DataError(
                        f"{path}: bad value for system '{system_id}'"
                    ) from None
            return out
    except OSError as exc:
        raise DataError(f"{path}: cannot read subjective scores: {exc}") from exc


def _cmd_validate(args) -> int:
    reports = _load_reports(args.reports)
    if len(reports) < 2:
        raise DataError("validate needs at least 2 reports")
    subjective = _load_subjective(args.subjective)
    missing = [r.candidate_id for r in reports if r.candidate_id not in subjective]
    if missing:
        raise DataError(f"no subjective value for system '{missing[0]}'")
    labels = tuple(r.candidate_id for r in reports)
    rho = spearman(
        RankedSeries(labels, tuple(r.ttsds for r in reports)),
        RankedSeries(labels, tuple(subjective[label] for label in labels)),
    )
    print(f"spearman_rho {rho:.6f}")
    if args.out:
        doc = {"n": len(labels), "spearman_rho": rho, "systems": list(labels)}
        Path(args.out).write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", "utf-8"
        )
    return EXIT_OK


def _cmd_compare(args) -> int:
    reports = _load_reports(args.reports)
    if len(reports) < 2:
        raise DataError("compare needs at least 2 reports")
    if not 0.0 < args.alpha < 1.0:
        raise DataError(f"alpha must be in (0, 1), got {args.alpha}")
    maps = [r.feature_score_map() for r in reports]
    feature_sets = {frozenset(m) for m in maps}
    if len(feature_sets) != 1:
        raise DataError("reports cover different feature sets, cannot pair scores")
    features = sorted(maps[0])
    vectors = [[m[f] for f in features] for m in maps]
    p_values = pairwise_p_values(vectors, args.alpha)
    significant = p_values < args.alpha
    np.fill_diagonal(significant, False)

    labels = [r.candidate_id for r in reports]
    width = max(len(label) for label in labels)
    header = " " * (width + 2) + "  ".join(label.rjust(width) for label in labels)
    lines = [header]
    for i, label in enumerate(labels):
        cells = []
        for j in range(len(labels)):
            if i == j:
                cells.append(".".rjust(width))
            else:
                cells.append(("x" if significant[i][j] else "-").rjust(width))
        lines.append(label.ljust(width + 2) + "  ".join(cells))
    print("\n".join(lines))
    if args.out:
        doc = {
            "alpha": args.alpha,
            "features": features,
            "p_values": [[float(p) for p in row] for row in p_values],
            "significant": [[bool(s) for s in row] for row in significant],
            "systems": labels,
        }
        Path(args.out).write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", "utf-8"
        )
    return EXIT_OK


_COMMANDS = {
    "extract": _cmd_extract,
    "gen-noise": _cmd_gen_noise,
    "score": _cmd_score,
    "validate": _cmd_validate,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse handles --help and usage errors
        return int(exit_.code or 0)
    try:
        return _COMMANDS[args.subcommand](args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
