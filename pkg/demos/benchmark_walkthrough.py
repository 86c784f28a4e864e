"""Walk through a full benchmark run on synthesized audio, no network needed.

Builds two disjoint halves of a toy harmonic corpus (stand-ins for a real
corpus and a synthetic candidate), generates noise distractors, scores the
candidate half, then recasts the noise as a candidate to show the score
collapse. Everything runs from WAV files through the same pipeline a real
dataset would use, with the natively extractable features (pitch, SNR);
hypothesis/token sidecars and precomputed .feat files unlock the rest of
the registry.

usage: python demos/benchmark_walkthrough.py [workdir]
"""

import json
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from ttsds.pipeline import extract_dataset, generate_noise_dataset
from ttsds.scoring import load_benchmark_manifest, render_score_table, run_benchmark
from ttsds.store import load_manifest, write_manifest
from ttsds.wav_io import Waveform, write_wav

SAMPLE_RATE = 16000


def toy_utterance(rng):
    """A vowel-ish harmonic complex with syllable-rate amplitude modulation."""
    duration = rng.uniform(1.2, 2.0)
    t = np.arange(int(duration * SAMPLE_RATE)) / SAMPLE_RATE
    f0 = rng.uniform(120.0, 220.0)
    x = np.zeros_like(t)
    for k in range(1, 6):
        if k * f0 < 4000.0:
            x += np.sin(2 * np.pi * k * f0 * t + rng.uniform(0, 2 * np.pi)) / k
    syllables = np.clip(np.sin(2 * np.pi * rng.uniform(2.5, 4.0) * t), 0.0, None)
    x *= syllables**1.5
    x += rng.normal(scale=0.003, size=t.size)
    return Waveform(0.6 * x / np.max(np.abs(x)), SAMPLE_RATE)


def build_wavs(wav_dir, count, seed):
    wav_dir.mkdir(parents=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        write_wav(toy_utterance(rng), wav_dir / f"utt_{i:03d}.wav")


def main():
    if len(sys.argv) > 1:
        root = Path(sys.argv[1])
        root.mkdir(parents=True, exist_ok=True)
    else:
        root = Path(tempfile.mkdtemp(prefix="ttsds_demo_"))
    print(f"working under {root}\n")

    print("-- synthesizing two disjoint 40-utterance halves")
    build_wavs(root / "wav_real", count=40, seed=1)
    build_wavs(root / "wav_candidate", count=40, seed=2)

    print("-- extracting native features (pitch, wada_snr)")
    for name, role in (("real", "reference"), ("candidate", "candidate")):
        _, warnings = extract_dataset(
            root / f"wav_{name}",
            root / name,
            dataset_id=name,
            role=role,
        )
        for w in warnings:
            print(f"   warning: {w}")

    print("-- generating uniform and normal noise distractors")
    for kind in ("uniform", "normal"):
        generate_noise_dataset(
            root / f"noise_{kind}", kind, count=40, duration_s=1.5, seed=11
        )

    # the benchmark manifest is plain JSON with paths relative to itself;
    # `ttsds score --manifest bench.json --out report.json` runs the same thing
    bench = root / "bench.json"
    bench.write_text(
        json.dumps(
            {
                "candidate": "candidate/manifest.json",
                "references": ["real/manifest.json"],
                "distractors": [
                    "noise_uniform/manifest.json",
                    "noise_normal/manifest.json",
                ],
                "features": ["pitch", "wada_snr"],
                "exclude_factors": ["general", "intelligibility", "speaker"],
                "seed": 7,
            },
            indent=2,
        )
    )
    report = run_benchmark(load_benchmark_manifest(bench))
    print("\n-- candidate half scored against the real half")
    for factor in report.factor_scores:
        for fs in factor.features:
            print(
                f"   {fs.feature_id:>10}: {fs.score:5.1f}  "
                f"(w_real {fs.w_real:.3f} to '{fs.nearest_real}', "
                f"w_noise {fs.w_noise:.3f} to '{fs.nearest_noise}')"
            )
    print(f"   TTSDS {report.ttsds:.1f} -- above 50 means closer to real than noise")

    print("\n-- same benchmark with the uniform noise recast as the candidate")
    noise = load_manifest(root / "noise_uniform" / "manifest.json")
    recast = replace(noise, dataset_id="noise_as_candidate", role="candidate")
    write_manifest(recast, root / "noise_uniform" / "candidate_manifest.json")
    noise_bench = root / "noise_bench.json"
    noise_bench.write_text(
        json.dumps(
            {
                "candidate": "noise_uniform/candidate_manifest.json",
                "references": ["real/manifest.json"],
                "distractors": ["noise_normal/manifest.json"],
                "features": ["pitch", "wada_snr"],
                "exclude_factors": ["general", "intelligibility", "speaker"],
                "seed": 7,
            },
            indent=2,
        )
    )
    noise_report = run_benchmark(load_benchmark_manifest(noise_bench))

    print()
    print(render_score_table([report, noise_report]), end="")
    print(f"\nreport JSON fields: {', '.join(sorted(report.to_dict())) }")


if __name__ == "__main__":
    main()
