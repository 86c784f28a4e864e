"""End-to-end interchange acceptance against the installed scoring engine.

Everything here crosses the package boundary the way a user would: the
adapter writes files, the `ttsds` executable reads them. Three gates are
checked on one shared benchmark run: the engine accepts every emitted
file without a single warning, frame counts match 20 ms stride
arithmetic, and a real-vs-real benchmark over adapter features lands
above 50 on every factor those features serve.
"""

from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from _toyaudio import build_noise_dir, build_speech_dir
from _adapterkit import parse_feature_blob, run_cli

FEATURES = ["hubert", "mpm", "dvector", "hubert_token_len"]
EXCLUDED = ["environment", "intelligibility"]
SERVED_FACTORS = ("general", "prosody", "speaker")
STRIDE = 320  # 20 ms at 16 kHz


def gate(request, name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    line = f"[{status}] {name}" + (f" ({detail})" if detail else "")
    request.config._acceptance_lines.append(line)
    assert passed, line


@pytest.fixture(scope="module")
def benchmark_run(tmp_path_factory, model_dir, centroids_path, config_path):
    """80-utterance real halves plus a noise distractor, adapter-extracted,
    scored once by the engine CLI."""
    engine = shutil.which("ttsds")
    if engine is None:
        pytest.skip("scoring engine CLI not installed")

    root = tmp_path_factory.mktemp("secondary")
    corpora = {
        "half_a": build_speech_dir(root / "wav_a", 80, seed=41),
        "half_b": build_speech_dir(root / "wav_b", 80, seed=42_000),
        "noise": build_noise_dir(root / "wav_n", 80, seed=43_000),
    }
    for name, wav_dir, role in (
        ("half_a", "wav_a", "candidate"),
        ("half_b", "wav_b", "reference"),
        ("noise", "wav_n", "distractor"),
    ):
        code = run_cli(
            "run",
            "--wavs", root / wav_dir,
            "--out", root / name,
            "--config", config_path,
            "--dataset-id", name,
            "--role", role,
        )
        assert code == 0, f"adapter run failed for {name}"

    bench = root / "bench.json"
    bench.write_text(
        json.dumps(
            {
                "candidate": "half_a/manifest.json",
                "references": ["half_b/manifest.json"],
                "distractors": ["noise/manifest.json"],
                "features": FEATURES,
                "exclude_factors": EXCLUDED,
                "seed": 11,
            },
            indent=2,
        )
        + "\n",
        "utf-8",
    )
    report_path = root / "report.json"
    proc = subprocess.run(
        [engine, "score", "--manifest", bench, "--out", report_path, "--jobs", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, f"ttsds score failed:\n{proc.stderr}"
    return {
        "root": root,
        "corpora": corpora,
        "stderr": proc.stderr,
        "report": json.loads(report_path.read_text("utf-8")),
    }


def test_engine_accepts_every_file_without_warnings(request, benchmark_run):
    stderr_warnings = [
        line for line in benchmark_run["stderr"].splitlines() if "warning:" in line
    ]
    report_warnings = benchmark_run["report"]["warnings"]
    scored = {
        feature["feature"]
        for factor in benchmark_run["report"]["factors"]
        for feature in factor["features"]
    }
    gate(
        request,
        "adapter-files-parse-clean",
        not stderr_warnings and not report_warnings and scored == set(FEATURES),
        f"3 datasets, {len(FEATURES)} features scored, "
        f"{len(stderr_warnings) + len(report_warnings)} warnings",
    )


def test_frame_counts_match_stride_arithmetic(request, benchmark_run):
    # Nominal count for a 20 ms-stride encoder is samples // 320; the conv
    # receptive field may shave one frame off the end, never more.
    worst = 0
    checked = 0
    for name in ("half_a", "half_b", "noise"):
        lengths = benchmark_run["corpora"][name]
        for feature_id in ("hubert", "mpm"):
            ids, arrays, _ = parse_feature_blob(
                benchmark_run["root"] / name / f"{feature_id}.feat"
            )
            assert ids == sorted(lengths)
            for utterance_id, frames in zip(ids, arrays):
                off = abs(frames.shape[0] - lengths[utterance_id] // STRIDE)
                worst = max(worst, off)
                checked += 1
    gate(
        request,
        "adapter-frame-stride-arithmetic",
        worst <= 1,
        f"{checked} utterance tables, worst |frames - samples//320| = {worst}",
    )


def test_real_vs_real_scores_above_50_on_served_factors(request, benchmark_run):
    factor_scores = {
        factor["factor"]: factor["score"] for factor in benchmark_run["report"]["factors"]
    }
    assert sorted(factor_scores) == sorted(SERVED_FACTORS)
    detail = ", ".join(f"{name} {factor_scores[name]:.1f}" for name in SERVED_FACTORS)
    gate(
        request,
        "adapter-real-vs-real-above-50",
        all(factor_scores[name] > 50.0 for name in SERVED_FACTORS),
        detail,
    )
