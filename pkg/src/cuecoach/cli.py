"""Command-line entry point: one verb per pipeline workflow.

Exit codes: 0 success, 1 domain error (simulation, data, LM), 2 usage error.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from .agents import AGENT_NAMES, create_agent
from .errors import CueCoachError

DEFAULT_SEED = 0


def _echo_err(exc: CueCoachError) -> None:
    click.echo(f"error [{exc.code}/{exc.stage}]: {exc.message}", err=True)


def domain_errors(fn):
    """Map CueCoachError to exit code 1 with a tagged message."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CueCoachError as exc:
            _echo_err(exc)
            sys.exit(1)
    return wrapper


def _load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _dump_json(path: str, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _state_from_file(path: str):
    from .physics.types import TableState
    return TableState.from_dict(_load_json(path))


def _shot_from_file(path: str):
    from .errors import InvalidShot
    from .physics.types import ShotParams
    try:
        return ShotParams.from_dict(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidShot(f"bad shot file {path}: {exc!r}") from exc


def _seed_of(ctx: click.Context, seed) -> int:
    if seed is not None:
        return seed
    return (ctx.obj or {}).get("seed", DEFAULT_SEED)


def _make_agent(name: str, model_path: str | None):
    model = None
    if model_path:
        from .surrogate.mlp import load_model
        model = load_model(model_path)
    return create_agent(name, model=model)


@click.group()
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True,
              help="Default seed for subcommands that do not set their own.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="Service config JSON (serve command).")
@click.pass_context
def main(ctx: click.Context, seed: int, config_path: str | None):
    """3Pool simulator, agents, and the shot assistant."""
    ctx.obj = {"seed": seed, "config": config_path}


@main.command()
@click.option("--state", "state_path", required=True, type=click.Path(exists=True))
@click.option("--shot", "shot_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
@click.option("--frames/--no-frames", default=False, show_default=True)
@domain_errors
def simulate(state_path: str, shot_path: str, out_path: str | None, frames: bool):
    """Trace one shot from a state file."""
    from .errors import InvalidShot
    from .physics.engine import strike_and_trace
    shot = _shot_from_file(shot_path)
    if shot.clamped:
        # direct user input: surface the violation instead of silently clamping
        raise InvalidShot(f"shot parameters out of bounds "
                          f"(clamped to {shot.to_dict()})")
    sim = strike_and_trace(_state_from_file(state_path), shot,
                           want_frames=frames)
    payload = sim.to_dict(include_frames=frames)
    if out_path:
        _dump_json(out_path, payload)
    click.echo(f"events: {len(sim.trace)}  sim_time: {sim.sim_time:.3f}s")
    for ev in sim.trace:
        click.echo(f"  {ev.text} at ({ev.pos[0]:.4f}, {ev.pos[1]:.4f})")
    if out_path:
        click.echo(f"wrote {out_path}")


@main.command()
@click.option("--agent1", default="greedy", show_default=True)
@click.option("--agent2", default="greedy", show_default=True)
@click.option("--model", "model_path", default=None, type=click.Path(exists=True),
              help="Surrogate model JSON for neural agents.")
@click.option("--games", default=1, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_context
@domain_errors
def play(ctx, agent1: str, agent2: str, model_path: str | None,
         games: int, seed: int | None, out_path: str | None):
    """Play full games between two agents."""
    from .game import play_game, random_table_state
    seed = _seed_of(ctx, seed)
    a1 = _make_agent(agent1, model_path)
    a2 = _make_agent(agent2, model_path)
    results = []
    wins = 0
    for g in range(games):
        ss = np.random.SeedSequence((seed, g))
        start = random_table_state(np.random.default_rng(ss))
        result = play_game(a1, a2, start,
                           seed=int(ss.generate_state(1)[0]))
        results.append(result.to_dict(include_records=False))
        wins += result.winner == 1
        click.echo(f"game {g}: winner={result.winner} turns={result.turns}"
                   f"{' (capped)' if result.capped else ''}")
    click.echo(f"{agent1} won {wins}/{games} as player 1")
    if out_path:
        _dump_json(out_path, {"agent1": agent1, "agent2": agent2,
                              "seed": seed, "results": results})
        click.echo(f"wrote {out_path}")


@main.command()
@click.option("--agents", "agents_csv", default="greedy,poolmaster",
              show_default=True, help="Comma-separated agent names.")
@click.option("--model", "model_path", default=None, type=click.Path(exists=True))
@click.option("--games", default=100, show_default=True,
              help="Games per pair (half on each seat).")
@click.option("--seed", type=int, default=None)
@click.option("--jobs", default=1, show_default=True,
              help="Worker cap (desk scale runs sequentially).")
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_context
@domain_errors
def tournament(ctx, agents_csv: str, model_path: str | None, games: int,
               seed: int | None, jobs: int, out_path: str | None):
    """Round-robin win-rate table."""
    from .harness import run_tournament
    seed = _seed_of(ctx, seed)
    names = [a.strip() for a in agents_csv.split(",") if a.strip()]
    for name in names:
        if name not in AGENT_NAMES:
            raise click.UsageError(
                f"unknown agent {name!r} (known: {', '.join(AGENT_NAMES)})")
    agents = [_make_agent(name, model_path) for name in names]
    table = run_tournament(agents, games_per_pair=games, seed=seed)
    click.echo(table.format_text())
    if out_path:
        _dump_json(out_path, table.to_dict())
        click.echo(f"wrote {out_path}")


@main.command("gen-dataset")
@click.option("--agent", "agent_name", default="greedy", show_default=True)
@click.option("--model", "model_path", default=None, type=click.Path(exists=True))
@click.option("--count", default=100, show_default=True)
@click.option("--M", "m_rollouts", default=20, show_default=True,
              help="Perturbation rollouts per sample.")
@click.option("--N", "n_games", default=5, show_default=True,
              help="Self-play games per rollout.")
@click.option("--bins", default=10, show_default=True)
@click.option("--burn", default=0, show_default=True,
              help="Advance each rack by up to this many noisy shots first.")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
@domain_errors
def gen_dataset_cmd(ctx, agent_name: str, model_path: str | None, count: int,
                    m_rollouts: int, n_games: int, bins: int, burn: int,
                    seed: int | None, out_path: str):
    """Generate (r, p) training samples by Monte-Carlo rollout."""
    from .surrogate.sampling import gen_dataset, save_dataset
    seed = _seed_of(ctx, seed)
    agent = _make_agent(agent_name, model_path)

    def progress(i, total):
        if i % 50 == 0 or i == total:
            click.echo(f"  {i}/{total} samples")

    samples = gen_dataset(agent, count, M=m_rollouts, N=n_games, n=bins,
                          seed=seed, burn=burn, progress=progress)
    save_dataset(samples, out_path)
    click.echo(f"wrote {len(samples)} samples to {out_path}")


@main.command("train")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--epochs", default=25, show_default=True)
@click.option("--lr", default=0.005, show_default=True)
@click.option("--batch", default=128, show_default=True)
@click.option("--dropout", default=0.25, show_default=True)
@click.option("--anchor-mode", type=click.Choice(["quantile", "absolute"]),
              default="quantile", show_default=True)
@click.option("--seed", type=int, default=None)
@click.pass_context
@domain_errors
def train_cmd(ctx, data_path: str, out_path: str, epochs: int, lr: float,
              batch: int, dropout: float, anchor_mode: str, seed: int | None):
    """Train the value surrogate on a JSONL dataset."""
    from .surrogate.mlp import save_model, train
    from .surrogate.sampling import load_dataset
    seed = _seed_of(ctx, seed)
    dataset = load_dataset(data_path)
    model = train(dataset,
                  hyper={"batch": batch, "lr": lr, "dropout": dropout,
                         "epochs": epochs},
                  seed=seed, anchor_mode=anchor_mode)
    save_model(model, out_path)
    curve = model.train_loss_curve
    click.echo(f"trained on {len(dataset)} samples: "
               f"CE {curve[0]:.4f} -> {curve[-1]:.4f}")
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--state", "state_path", required=True, type=click.Path(exists=True))
@click.option("--query", default="Find the best shot for me in this position",
              show_default=True)
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--mock", "mock_dir", default=None, type=click.Path(exists=True),
              help="Fixture directory for a scripted LM (else env LM_* or degraded).")
@click.option("--candidates", default=5, show_default=True)
@click.option("--steps", default=300, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_context
@domain_errors
def assist(ctx, state_path: str, query: str, model_path: str,
           mock_dir: str | None, candidates: int, steps: int,
           seed: int | None, out_path: str | None):
    """Recommend, tune, and explain a shot for a state file."""
    from .assistant.core import AssistConfig, assist as run_assist
    from .assistant.lm import FixtureLM, lm_from_env
    from .surrogate.mlp import load_model
    seed = _seed_of(ctx, seed)
    lm = FixtureLM(mock_dir) if mock_dir else lm_from_env()
    model = load_model(model_path)
    state = _state_from_file(state_path)
    result = run_assist(state, query, lm, model,
                        AssistConfig(n_candidates=candidates, steps=steps,
                                     seed=seed))
    tuned = result.shot
    click.echo(f"shot: {tuned.shot.to_dict()}")
    click.echo(f"strategy: {tuned.strategy}  difficulty: {tuned.difficulty}  "
               f"expected value: {tuned.expected_value:.3f}"
               f"{'  [degraded]' if result.degraded else ''}")
    click.echo(result.explanation)
    if out_path:
        _dump_json(out_path, {
            "shot": tuned.shot.to_dict(),
            "explanation": result.explanation,
            "degraded": result.degraded,
            "strategy": tuned.strategy,
            "difficulty": tuned.difficulty,
            "expected_value": tuned.expected_value,
            "rule_report": result.rule_report,
            "trace": [ev.to_dict() for ev in tuned.trace],
        })
        click.echo(f"wrote {out_path}")


@main.command("eval-rules")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True),
              help="JSONL dataset to sample from.")
@click.option("--model-dir", "fixture_dir", default=None, type=click.Path(exists=True),
              help="Mock LM fixture directory (with --mock).")
@click.option("--lm/--mock", "use_lm", default=False,
              help="Query the env-configured LM instead of fixtures.")
@click.option("--with-r/--no-r", "with_r", default=True, show_default=True)
@click.option("--k", default=25, show_default=True, help="K-means clusters.")
@click.option("--per-cluster", default=1, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", default=None, type=click.Path())
@click.pass_context
@domain_errors
def eval_rules(ctx, data_path: str, fixture_dir: str | None, use_lm: bool,
               with_r: bool, k: int, per_cluster: int, seed: int | None,
               out_path: str | None):
    """Likert agreement between LM rule estimates and ground truth."""
    from .assistant.lm import FixtureLM, lm_from_env
    from .errors import LMUnavailable
    from .harness import kmeans_diverse_sample, likert_agreement_eval
    from .surrogate.sampling import load_dataset
    seed = _seed_of(ctx, seed)
    if use_lm:
        lm = lm_from_env()
        if lm is None:
            raise LMUnavailable("--lm requires LM_BASE_URL to be set")
    else:
        if not fixture_dir:
            raise click.UsageError("--mock needs --model-dir FIXTURE_DIR")
        lm = FixtureLM(fixture_dir)
    dataset = load_dataset(data_path)
    diverse = kmeans_diverse_sample(dataset, K=k, per_cluster=per_cluster,
                                    seed=seed)
    result = likert_agreement_eval(lm, diverse.samples, with_r=with_r)
    click.echo(f"samples: {result.n_included} included, "
               f"{result.n_excluded} excluded "
               f"(exclusion rate {result.exclusion_rate:.2f})")
    click.echo(f"overall |bin distance|: {result.overall_mean:.3f} "
               f"+/- {result.overall_stderr:.3f}")
    if out_path:
        _dump_json(out_path, result.to_dict())
        click.echo(f"wrote {out_path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=None, type=int,
              help="Defaults to env PORT or 8000.")
@click.option("--model", "model_path", default=None, type=click.Path(exists=True))
@click.pass_context
@domain_errors
def serve(ctx, host: str, port: int | None, model_path: str | None):
    """Run the HTTP service."""
    import os

    import uvicorn

    from .service.app import ServiceConfig, create_app
    cfg = ServiceConfig.load((ctx.obj or {}).get("config"))
    if model_path:
        cfg.model_path = model_path
    if port is None:
        port = int(os.environ.get("PORT", "8000"))
    uvicorn.run(create_app(config=cfg), host=host, port=port)


if __name__ == "__main__":
    main()
