"""Tour of the report tooling: rank-correlate against subjective ratings,
then test which system pairs differ significantly.

Fabricates score reports for six systems of staggered quality plus a noisy
"listener panel" rating for each, writes everything to disk, and drives the
`validate` and `compare` subcommands in-process.

usage: python demos/report_tooling.py [workdir]
"""

import json
import sys
import tempfile
from pathlib import Path

import numpy as np

from ttsds.cli import main as ttsds
from ttsds.scoring import DEFAULT_REGISTRY, FeatureScore, aggregate

SYSTEMS = {
    # system id -> underlying quality on the 0-100 scale
    "crystal": 88.0,
    "breeze": 84.0,
    "marble": 80.0,
    "gravel": 72.0,
    "static": 60.0,
    "fog": 58.0,
}


def fake_report(path, system, quality, rng):
    """Per-feature scores scattered around the system's quality level."""
    scores = []
    for spec in DEFAULT_REGISTRY:
        value = float(np.clip(quality + rng.normal(scale=4.0), 1.0, 99.0))
        scores.append(
            FeatureScore(
                feature_id=spec.feature_id,
                score=value,
                w_real=100.0 - value,
                w_noise=value,
                nearest_real="corpus",
                nearest_noise="noise_uniform",
                method=spec.method,
            )
        )
    path.write_text(aggregate(scores, candidate_id=system).to_json())


def main():
    if len(sys.argv) > 1:
        root = Path(sys.argv[1])
        root.mkdir(parents=True, exist_ok=True)
    else:
        root = Path(tempfile.mkdtemp(prefix="ttsds_reports_"))
    print(f"working under {root}\n")

    rng = np.random.default_rng(5)
    reports = []
    for system, quality in SYSTEMS.items():
        path = root / f"{system}.json"
        fake_report(path, system, quality, rng)
        reports.append(str(path))

    # listener panel: correlated with quality but far from a clean copy
    ratings = root / "panel.csv"
    lines = ["system_id,value"]
    for system, quality in SYSTEMS.items():
        lines.append(f"{system},{quality + rng.normal(scale=5.0):.1f}")
    ratings.write_text("\n".join(lines) + "\n")

    print("-- validate: Spearman correlation of overall scores vs the panel")
    code = ttsds(
        [
            "validate",
            "--reports", ",".join(reports),
            "--subjective", str(ratings),
            "--out", str(root / "correlation.json"),
        ]
    )
    assert code == 0
    print(json.dumps(json.loads((root / "correlation.json").read_text()), indent=2))

    print("\n-- compare: pairwise Wilcoxon over the 11 per-feature scores")
    print("   (x significant at alpha, - not, . self)")
    code = ttsds(
        [
            "compare",
            "--reports", ",".join(reports),
            "--alpha", "0.05",
            "--out", str(root / "matrix.json"),
        ]
    )
    assert code == 0
    matrix = json.loads((root / "matrix.json").read_text())
    near, far = matrix["p_values"][0][1], matrix["p_values"][0][-1]
    print(f"\ncrystal vs breeze p={near:.3f}, crystal vs fog p={far:.4f}")


if __name__ == "__main__":
    main()
