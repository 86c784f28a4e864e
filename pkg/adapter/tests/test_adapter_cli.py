"""Command-line behavior: exit codes, config validation, file outputs."""

from __future__ import annotations

import json

import numpy as np
import pytest

from _adapterkit import run_cli, write_adapter_config
from ttsds_adapter.config import load_adapter_config
from ttsds_adapter.errors import ConfigError


def test_version_and_help(capsys):
    with pytest.raises(SystemExit) as excinfo:
        run_cli("--version")
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.startswith("ttsds-adapter ")
    with pytest.raises(SystemExit) as excinfo:
        run_cli("--help")
    assert excinfo.value.code == 0


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("frobnicate",),
        ("run", "--wavs", "x", "--out", "y"),  # missing --config
        ("fit-tokenizer", "--wavs", "x"),
    ],
)
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as excinfo:
        run_cli(*argv)
    assert excinfo.value.code == 1


def test_missing_config_file_exits_2(tmp_path, capsys):
    code = run_cli(
        "run", "--wavs", tmp_path, "--out", tmp_path / "o", "--config", tmp_path / "no.json"
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_empty_wav_dir_exits_2(tmp_path, config_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    code = run_cli("run", "--wavs", empty, "--out", tmp_path / "o", "--config", config_path)
    assert code == 2
    assert "no .wav files" in capsys.readouterr().err


def test_out_of_range_layer_index_exits_2(toy_corpus, model_dir, centroids_path, tmp_path, capsys):
    cfg = write_adapter_config(tmp_path / "cfg.json", model_dir, centroids_path)
    doc = json.loads(cfg.read_text("utf-8"))
    doc["layer_index"] = 9
    cfg.write_text(json.dumps(doc), "utf-8")
    code = run_cli(
        "run", "--wavs", toy_corpus["speech_a"], "--out", tmp_path / "o", "--config", cfg
    )
    assert code == 2
    assert "out of range" in capsys.readouterr().err


def test_run_writes_dataset_and_prints_manifest(toy_corpus, config_path, tmp_path, capsys):
    out = tmp_path / "ds"
    code = run_cli(
        "run",
        "--wavs", toy_corpus["speech_a"],
        "--out", out,
        "--config", config_path,
        "--dataset-id", "cli_ds",
        "--role", "candidate",
    )
    captured = capsys.readouterr()
    assert code == 0
    assert captured.err == ""
    assert captured.out.strip().endswith("manifest.json")
    doc = json.loads((out / "manifest.json").read_text("utf-8"))
    assert doc["dataset_id"] == "cli_ds"


def test_fit_tokenizer_writes_centroids(toy_corpus, model_dir, tmp_path):
    out = tmp_path / "c.npz"
    code = run_cli(
        "fit-tokenizer",
        "--wavs", toy_corpus["speech_b"],
        "--model", model_dir / "ssl_hubert",
        "--out", out,
        "--clusters", "16",
        "--seed", "2",
    )
    assert code == 0
    with np.load(out) as archive:
        assert archive["centroids"].shape == (16, 32)


# config validation details (library level, exercised through the loader)


def test_config_defaults_and_relative_paths(tmp_path):
    (tmp_path / "m").mkdir()
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"ssl": {"hubert": "m"}}), "utf-8")
    loaded = load_adapter_config(cfg)
    assert loaded.device == "cpu"
    assert loaded.batch_size == 8
    assert loaded.layer_index is None
    assert loaded.ssl["hubert"] == (tmp_path / "m").resolve()


@pytest.mark.parametrize(
    "doc,message",
    [
        ({}, "no features enabled"),
        ({"ssl": {"hubert": "m"}, "extra": 1}, "unknown field"),
        ({"ssl": {"hubert": ""}}, "non-empty string"),
        ({"ssl": {"hubert": "m"}, "batch_size": 0}, "batch_size"),
        ({"ssl": {"hubert": "m"}, "batch_size": "four"}, "batch_size"),
        ({"ssl": {"hubert": "m"}, "layer_index": -2}, "layer_index"),
        ({"ssl": "m"}, "must be an object"),
        ({"tokenizer": {"hubert": {"model": "m"}}}, "'model' and 'centroids'"),
    ],
)
def test_config_rejections(tmp_path, doc, message):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(doc), "utf-8")
    with pytest.raises(ConfigError, match=message):
        load_adapter_config(cfg)


def test_config_rejects_non_json(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{nope", "utf-8")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_adapter_config(cfg)
    cfg.write_text("[1, 2]", "utf-8")
    with pytest.raises(ConfigError, match="JSON object"):
        load_adapter_config(cfg)
