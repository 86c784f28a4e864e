"""Command-line interface.

`run` turns a WAV directory into a scoring-ready dataset directory,
`fit-tokenizer` clusters SSL frames into a centroid file, and
`init-models` fabricates the small random-weight checkpoints that let the
whole pipeline run offline.

Exit codes: 0 success, 1 usage error, 2 configuration, model or data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .config import load_adapter_config
from .errors import AdapterError
from .extract import run_adapter

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures remapped from exit code 2 to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _cmd_run(args) -> int:
    cfg = load_adapter_config(args.config)
    manifest_path, warnings = run_adapter(
        args.wavs,
        args.out,
        cfg,
        dataset_id=args.dataset_id,
        role=args.role,
        transcripts=args.transcripts,
    )
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(manifest_path)
    return EXIT_OK


def _cmd_fit_tokenizer(args) -> int:
    from .audio import load_wav
    from .models import FrameEncoder, KmeansTokenizer

    wavs = sorted(Path(args.wavs).glob("*.wav"))
    if not wavs:
        raise AdapterError(f"no .wav files in {args.wavs}")
    encoder = FrameEncoder.load(args.model, args.device)
    stacks = []
    for path in wavs:
        try:
            samples = load_wav(path, encoder.sample_rate)
        except AdapterError as exc:
            print(f"warning: skipped {path.name}: {exc}", file=sys.stderr)
            continue
        if len(samples) < encoder.min_samples:
            continue
        stacks.extend(encoder.encode([samples], args.layer_index, args.batch_size))
    if not stacks:
        raise AdapterError("no usable audio to fit on")
    frames = np.concatenate(stacks, axis=0)
    tokenizer = KmeansTokenizer.fit(frames, args.clusters, args.seed)
    tokenizer.save(args.out)
    print(f"{args.out}: {tokenizer.n_clusters} clusters over {frames.shape[0]} frames")
    return EXIT_OK


def _cmd_init_models(args) -> int:
    from .models import build_tiny_model_set

    paths = build_tiny_model_set(args.out, args.seed, args.hidden, args.layers)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="ttsds-adapter", description=__doc__.split("\n\n")[0])
    parser.add_argument(
        "--version", action="version", version=f"ttsds-adapter {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="extract all configured features from a WAV directory")
    run.add_argument("--wavs", required=True, help="input directory of .wav files")
    run.add_argument("--out", required=True, help="output dataset directory")
    run.add_argument("--config", required=True, help="adapter config JSON")
    run.add_argument("--dataset-id", default=None, help="defaults to the output directory name")
    run.add_argument(
        "--role",
        default="candidate",
        choices=("candidate", "reference", "distractor"),
        help="role recorded in the manifest",
    )
    run.add_argument("--transcripts", default=None, help="reference transcripts TSV to copy in")
    run.set_defaults(func=_cmd_run)

    fit = sub.add_parser("fit-tokenizer", help="cluster SSL frames into a centroid file")
    fit.add_argument("--wavs", required=True, help="directory of .wav files to fit on")
    fit.add_argument("--model", required=True, help="frame encoder checkpoint directory")
    fit.add_argument("--out", required=True, help="output .npz centroid file")
    fit.add_argument("--clusters", type=int, default=100)
    fit.add_argument("--layer-index", type=int, default=None)
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--device", default="cpu")
    fit.add_argument("--batch-size", type=int, default=8)
    fit.set_defaults(func=_cmd_fit_tokenizer)

    init = sub.add_parser("init-models", help="write small random-weight checkpoints")
    init.add_argument("--out", required=True, help="directory for the model set")
    init.add_argument("--seed", type=int, default=0)
    init.add_argument("--hidden", type=int, default=32)
    init.add_argument("--layers", type=int, default=4)
    init.set_defaults(func=_cmd_init_models)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AdapterError as exc:
        print(f"ttsds-adapter: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entrypoint() -> None:
    sys.exit(main())
