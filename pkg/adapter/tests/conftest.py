"""Shared adapter fixtures: one tiny model set and toy corpora per session.

The whole directory is skipped when the model stack is not installed, so
the scoring engine's own suite stays runnable without the adapter's
dependencies.
"""

from __future__ import annotations

from pathlib import Path

import pytest

pytest.importorskip("torch")
pytest.importorskip("transformers")
pytest.importorskip("sklearn")
pytest.importorskip("ttsds_adapter")

from _adapterkit import run_cli, write_adapter_config
from _toyaudio import build_noise_dir, build_speech_dir


def pytest_configure(config):
    if not hasattr(config, "_acceptance_lines"):
        config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # Mirrors the engine suite's hook; popping keeps the section printed
    # exactly once when both conftests are loaded.
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
        config._acceptance_lines = []


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("models")
    assert run_cli("init-models", "--out", root, "--seed", "7") == 0
    return root


@pytest.fixture(scope="session")
def toy_corpus(tmp_path_factory) -> dict:
    root = tmp_path_factory.mktemp("toy_corpus")
    return {
        "root": root,
        "speech_a": root / "speech_a",
        "speech_b": root / "speech_b",
        "noise": root / "noise",
        "lengths_a": build_speech_dir(root / "speech_a", 12, seed=100),
        "lengths_b": build_speech_dir(root / "speech_b", 12, seed=2200),
        "lengths_noise": build_noise_dir(root / "noise", 12, seed=9000),
    }


@pytest.fixture(scope="session")
def centroids_path(tmp_path_factory, model_dir, toy_corpus) -> Path:
    out = tmp_path_factory.mktemp("tok") / "centroids.npz"
    code = run_cli(
        "fit-tokenizer",
        "--wavs", toy_corpus["speech_b"],
        "--model", model_dir / "ssl_hubert",
        "--out", out,
        "--clusters", "100",
        "--seed", "3",
    )
    assert code == 0
    return out


@pytest.fixture(scope="session")
def config_path(tmp_path_factory, model_dir, centroids_path) -> Path:
    return write_adapter_config(
        tmp_path_factory.mktemp("cfg") / "adapter.json", model_dir, centroids_path
    )


@pytest.fixture(scope="session")
def adapter_config(config_path):
    from ttsds_adapter.config import load_adapter_config

    return load_adapter_config(config_path)
