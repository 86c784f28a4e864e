"""Shared fixtures: a small benchmark workspace built once per session.

The acceptance suite also prints one PASS/FAIL line per criterion; lines
are collected here and echoed in the terminal summary so they stay visible
when pytest captures test output.
"""

from __future__ import annotations

import pytest

from ttsds.errors import EngineError

from _bench import run_cli, write_benchmark_manifest
from _corpus import attach_noise_sidecars, build_speech_corpus, split_corpus


def pytest_configure(config):
    if not hasattr(config, "_acceptance_lines"):
        config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # The adapter suite registers the same hook; popping the lines keeps
    # the section printed exactly once however many conftests loaded.
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
        config._acceptance_lines = []


@pytest.fixture(scope="session")
def workspace(tmp_path_factory) -> dict:
    """Small but complete benchmark setup: two real halves, two noise sets.

    40 utterances per half keeps the session affordable; the resulting
    low-utterance-count warnings are expected and deterministic.
    """
    root = tmp_path_factory.mktemp("workspace")
    pool = build_speech_corpus(root / "pool", count=80, seed=2024)
    half_a, half_b = split_corpus(pool, root / "half_a", root / "half_b")

    for half, dataset_id, role in (
        (half_a, "half_a", "candidate"),
        (half_b, "half_b", "reference"),
    ):
        code = run_cli(
            "extract",
            "--wavs", half.wav_dir,
            "--out", half.root / "dataset",
            "--dataset-id", dataset_id,
            "--role", role,
            "--transcripts", half.transcripts,
            "--hypotheses", f"greedy={half.hypotheses}",
            "--tokens", f"units={half.tokens}",
        )
        if code != 0:
            raise EngineError(f"extract failed for {dataset_id} (exit {code})")

    code = run_cli(
        "gen-noise",
        "--out", root / "noise",
        "--kinds", "uniform,normal",
        "--count", "40",
        "--duration-s", "1.5",
        "--seed", "11",
    )
    if code != 0:
        raise EngineError(f"gen-noise failed (exit {code})")
    for kind in ("uniform", "normal"):
        attach_noise_sidecars(root / "noise" / f"noise_{kind}", 40, kind, seed=500)

    manifest = write_benchmark_manifest(
        root / "bench.json",
        candidate=root / "half_a" / "dataset" / "manifest.json",
        references=[root / "half_b" / "dataset" / "manifest.json"],
        distractors=[
            root / "noise" / "noise_uniform" / "manifest.json",
            root / "noise" / "noise_normal" / "manifest.json",
        ],
        seed=7,
    )
    return {
        "root": root,
        "bench_manifest": manifest,
        "candidate": root / "half_a" / "dataset" / "manifest.json",
        "reference": root / "half_b" / "dataset" / "manifest.json",
        "distractors": [
            root / "noise" / "noise_uniform" / "manifest.json",
            root / "noise" / "noise_normal" / "manifest.json",
        ],
    }
