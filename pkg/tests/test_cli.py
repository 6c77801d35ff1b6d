import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from cuecoach.cli import main

FULL_STATE = {
    "balls": {
        "cue": {"x": 0.5, "y": 0.6},
        "blue": {"x": 0.35, "y": 1.3},
        "red": {"x": 0.72, "y": 1.62},
        "green": {"x": 0.2, "y": 0.35},
        "yellow": {"x": 0.0, "y": 0.0, "on_table": False},
        "black": {"x": 0.0, "y": 0.0, "on_table": False},
        "pink": {"x": 0.0, "y": 0.0, "on_table": False},
    }
}


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "state.json").write_text(json.dumps(FULL_STATE))
    (tmp_path / "shot.json").write_text(json.dumps(
        {"v": 1.2, "alpha": 80.0, "beta": 0.0, "a": 0.0, "b": 0.0}))
    return tmp_path


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for cmd in ("simulate", "play", "tournament", "gen-dataset", "train",
                "assist", "eval-rules", "serve"):
        assert cmd in result.output


def test_simulate(runner, workdir):
    out = workdir / "sim.json"
    result = runner.invoke(main, [
        "simulate", "--state", str(workdir / "state.json"),
        "--shot", str(workdir / "shot.json"), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "events:" in result.output and "sim_time:" in result.output
    payload = json.loads(out.read_text())
    assert "post_state" in payload and "trace" in payload


def test_simulate_malformed_shot_file(runner, workdir):
    bad = workdir / "bad_shot.json"
    bad.write_text(json.dumps({"v": 1.0}))  # missing fields
    result = runner.invoke(main, [
        "simulate", "--state", str(workdir / "state.json"),
        "--shot", str(bad)])
    assert result.exit_code == 1
    assert "invalid_shot" in result.output


def test_simulate_out_of_bounds_shot(runner, workdir):
    bad = workdir / "oob_shot.json"
    bad.write_text(json.dumps(
        {"v": -3.0, "alpha": 0.0, "beta": 0.0, "a": 0.0, "b": 0.0}))
    result = runner.invoke(main, [
        "simulate", "--state", str(workdir / "state.json"),
        "--shot", str(bad)])
    assert result.exit_code == 1
    assert "out of bounds" in result.output


def test_play(runner, workdir):
    result = runner.invoke(main, [
        "play", "--agent1", "greedy", "--agent2", "greedy", "--games", "1",
        "--seed", "3"])
    assert result.exit_code == 0, result.output
    assert "game 0: winner=" in result.output
    assert "won" in result.output


def test_tournament(runner, workdir):
    out = workdir / "table.json"
    result = runner.invoke(main, [
        "tournament", "--agents", "greedy,poolmaster", "--games", "2",
        "--seed", "1", "--out", str(out)])
    assert result.exit_code == 0, result.output
    table = json.loads(out.read_text())
    assert set(table["names"]) == {"greedy", "poolmaster"}
    assert "greedy" in result.output


def test_tournament_unknown_agent(runner):
    result = runner.invoke(main, ["tournament", "--agents", "greedy,zippy"])
    assert result.exit_code == 2


def test_dataset_train_assist_pipeline(runner, workdir):
    ds = workdir / "ds.jsonl"
    result = runner.invoke(main, [
        "gen-dataset", "--agent", "greedy", "--count", "4", "--M", "2",
        "--N", "1", "--seed", "2", "--out", str(ds)])
    assert result.exit_code == 0, result.output
    assert len(ds.read_text().splitlines()) == 4

    model = workdir / "model.json"
    result = runner.invoke(main, [
        "train", "--data", str(ds), "--out", str(model), "--epochs", "3",
        "--batch", "2", "--dropout", "0.0", "--seed", "1"])
    assert result.exit_code == 0, result.output
    assert "trained on 4 samples" in result.output
    assert model.is_file()

    out = workdir / "assist.json"
    result = runner.invoke(main, [
        "assist", "--state", str(workdir / "state.json"),
        "--model", str(model), "--steps", "15", "--candidates", "1",
        "--seed", "4", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "[degraded]" in result.output  # no LM configured in tests
    payload = json.loads(out.read_text())
    assert payload["degraded"] is True
    assert len(payload["rule_report"]) == 29
    assert set(payload["shot"]) == {"v", "alpha", "beta", "a", "b"}


def test_eval_rules_oracle(runner, workdir, small_dataset):
    from cuecoach.assistant.lm import FixtureLM
    from cuecoach.assistant.prompts import RELEVANCE_WITH_R_SYSTEM
    from cuecoach.harness import build_relevance_user, kmeans_diverse_sample
    from cuecoach.rules import LIKERT_KEYS, quantize_likert
    from cuecoach.surrogate.sampling import save_dataset

    ds_path = workdir / "eval_ds.jsonl"
    save_dataset(small_dataset, ds_path)

    fixtures = workdir / "fixtures"
    fixtures.mkdir()
    lm = FixtureLM(fixtures)
    diverse = kmeans_diverse_sample(small_dataset, K=3, per_cluster=1, seed=7)
    for sample in diverse.samples:
        truth = [quantize_likert(float(v))[0] for v in sample.r]
        response = "\n".join(
            f"{i + 1}: {LIKERT_KEYS[b]}" for i, b in enumerate(truth))
        lm.store(RELEVANCE_WITH_R_SYSTEM,
                 build_relevance_user(sample, with_r=True), response)

    result = runner.invoke(main, [
        "eval-rules", "--data", str(ds_path), "--model-dir", str(fixtures),
        "--k", "3", "--per-cluster", "1", "--seed", "7"])
    assert result.exit_code == 0, result.output
    assert "overall |bin distance|: 0.000" in result.output


def test_eval_rules_requires_fixture_dir(runner, workdir, small_dataset):
    from cuecoach.surrogate.sampling import save_dataset
    ds_path = workdir / "eval_ds.jsonl"
    save_dataset(small_dataset, ds_path)
    result = runner.invoke(main, ["eval-rules", "--data", str(ds_path)])
    assert result.exit_code == 2


def test_serve_help(runner):
    result = runner.invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
    assert "--port" in result.output
