"""Neural-feature walkthrough: adapter-extracted datasets scored end to end.

Fabricates the offline model set, synthesizes two speech-like corpora plus
a noise corpus, runs the adapter CLI over each, and scores the resulting
manifests with the benchmark CLI. All cross-package traffic is files and
argv; neither package imports the other.

    python3 demos/adapter_pipeline.py [workdir]
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

import numpy as np

UTTERANCES = 16
RATE = 16000


def write_wav(path: Path, samples: np.ndarray) -> None:
    import wave

    data = (np.clip(samples, -1.0, 1.0) * 32767).astype("<i2").tobytes()
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(2)
        handle.setframerate(RATE)
        handle.writeframes(data)


def speech_like(seed: int, n_samples: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    f0 = rng.uniform(110.0, 260.0)
    t = np.arange(n_samples) / RATE
    signal = np.zeros(n_samples)
    for k in range(1, 6):
        if k * f0 < 4000:
            signal += rng.uniform(0.2, 1.0) / k * np.sin(
                2 * np.pi * k * f0 * t + rng.uniform(0, 2 * np.pi)
            )
    envelope = np.clip(
        np.sin(2 * np.pi * rng.uniform(2.5, 5.0) * t + rng.uniform(0, 2 * np.pi)), 0, None
    ) ** 1.5
    signal = signal * envelope + 0.003 * rng.standard_normal(n_samples)
    return 0.6 * signal / np.max(np.abs(signal))


def build_corpora(root: Path) -> None:
    for name, base, noisy in (("wav_a", 300, False), ("wav_b", 700, False), ("wav_n", 1100, True)):
        directory = root / name
        directory.mkdir(parents=True, exist_ok=True)
        for index in range(UTTERANCES):
            rng = np.random.default_rng(base + index)
            n_samples = int(rng.uniform(0.7, 1.3) * RATE)
            if noisy:
                samples = 0.6 * rng.uniform(-1.0, 1.0, n_samples)
            else:
                samples = speech_like(base + index, n_samples)
            write_wav(directory / f"utt{index:03d}.wav", samples)


def main() -> int:
    from ttsds import cli as engine_cli
    from ttsds_adapter import cli as adapter_cli

    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="adapter_demo_"))
    root.mkdir(parents=True, exist_ok=True)
    print(f"working in {root}")

    build_corpora(root)
    assert adapter_cli.main(["init-models", "--out", str(root / "models"), "--seed", "7"]) == 0
    assert (
        adapter_cli.main(
            [
                "fit-tokenizer",
                "--wavs", str(root / "wav_b"),
                "--model", str(root / "models" / "ssl_hubert"),
                "--out", str(root / "models" / "centroids.npz"),
                "--clusters", "100",
                "--seed", "3",
            ]
        )
        == 0
    )
    (root / "adapter.json").write_text(
        json.dumps(
            {
                "device": "cpu",
                "batch_size": 8,
                "ssl": {"hubert": "models/ssl_hubert", "mpm": "models/ssl_mpm"},
                "speaker": {"dvector": "models/spk_dvector"},
                "asr": {"tiny": "models/asr_tiny"},
                "tokenizer": {
                    "hubert": {"model": "models/ssl_hubert", "centroids": "models/centroids.npz"}
                },
            },
            indent=2,
        )
        + "\n",
        "utf-8",
    )

    for name, wav_dir, role in (
        ("real_half_a", "wav_a", "candidate"),
        ("real_half_b", "wav_b", "reference"),
        ("noise", "wav_n", "distractor"),
    ):
        code = adapter_cli.main(
            [
                "run",
                "--wavs", str(root / wav_dir),
                "--out", str(root / name),
                "--config", str(root / "adapter.json"),
                "--dataset-id", name,
                "--role", role,
            ]
        )
        assert code == 0, name

    (root / "bench.json").write_text(
        json.dumps(
            {
                "candidate": "real_half_a/manifest.json",
                "references": ["real_half_b/manifest.json"],
                "distractors": ["noise/manifest.json"],
                "features": ["hubert", "mpm", "dvector", "hubert_token_len"],
                "exclude_factors": ["environment", "intelligibility"],
                "seed": 11,
            },
            indent=2,
        )
        + "\n",
        "utf-8",
    )
    print("\nscoring adapter-extracted features:")
    code = engine_cli.main(
        [
            "score",
            "--manifest", str(root / "bench.json"),
            "--out", str(root / "report.json"),
            "--table",
        ]
    )
    assert code == 0

    report = json.loads((root / "report.json").read_text("utf-8"))
    print("\nper-feature detail:")
    for factor in report["factors"]:
        for feature in factor["features"]:
            print(
                f"  {feature['feature']:>16s}  {factor['factor']:<8s} "
                f"score {feature['score']:5.1f}  "
                f"(w_real {feature['w_real']:.3f}, w_noise {feature['w_noise']:.3f})"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
