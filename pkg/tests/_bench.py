"""Helpers shared across test modules: CLI invocation, manifest writing.

Kept outside conftest.py so they can be imported by name; conftest holds
only fixtures and hooks.
"""

from __future__ import annotations

import json
from pathlib import Path

from ttsds import cli

FEATURES = ["wada_snr", "pitch", "wer_greedy", "units_token_len"]
EXCLUDED = ["general", "speaker"]


def run_cli(*argv: str) -> int:
    """Invoke the command line in-process; returns the exit code."""
    return cli.main([str(a) for a in argv])


def write_benchmark_manifest(
    path: Path,
    candidate: Path,
    references: list[Path],
    distractors: list[Path],
    seed: int = 0,
    features=None,
    exclude_factors=None,
    **extra,
) -> Path:
    base = path.parent

    def rel(p: Path) -> str:
        return str(Path(p).resolve().relative_to(base.resolve()))

    doc = {
        "candidate": rel(candidate),
        "references": [rel(p) for p in references],
        "distractors": [rel(p) for p in distractors],
        "features": FEATURES if features is None else features,
        "exclude_factors": EXCLUDED if exclude_factors is None else exclude_factors,
        "seed": seed,
    }
    doc.update(extra)
    path.write_text(json.dumps(doc, indent=2) + "\n", "utf-8")
    return path
