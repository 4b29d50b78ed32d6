import dataclasses as dc
import functools
import pathlib as pl
import typing as t

import constants as ct
import demos
import env
import errors as er
import helpers as hp
import logger as lg
import options.experiment_options as eo
import options.job_options as jo
import pro.checkpoints as pc
import reward as rw


def build_config(opts: jo.JobOptions) -> eo.ExperimentOptions:
    return hp.load_config(opts.config, opts.preset, opts.opts, opts.seed, opts.out)


def gen_demos(opts: jo.GenDemosOptions) -> t.Dict[str, float]:
    config = build_config(opts)
    run_dir = hp.run_dir(config)
    log = lg.ExperimentLogger(config, run_dir)
    log.persist_config()

    spec = demos.build_env_spec(config.env)
    dataset = demos.generate_demos(spec, config.demos.n_trajectories, config.seed)
    path = demos.write_dataset(dataset, hp.demos_path(config))
    summary = demos.summarise_dataset(spec, dataset)
    log.persist_metrics(summary, ct.DEMOS_SUMMARY)
    log.log_metrics(summary)
    log.log(f'Wrote {len(dataset)} trajectories to {path}.')

    return summary


def train_ranking(opts: jo.TrainRankingOptions) -> t.Dict[str, t.Any]:
    import pro.runners.runner_ranking as rrk
    return rrk.RankingRunner(build_config(opts)).run()


def train(opts: jo.TrainOptions) -> t.Dict[str, t.Any]:
    import pro.runners.runner_policy as rpo
    return rpo.PolicyRunner(build_config(opts)).run()


def evaluate(opts: jo.EvalOptions) -> t.Dict[str, float]:
    import postpro.evaluators.evaluator_policy as epo
    return epo.PolicyEvaluator(build_config(opts), opts.episodes, opts.policy).start()


def reward_grid(opts: jo.RewardGridOptions) -> pl.Path:
    if opts.resolution < 2:
        raise er.ArgumentError(f'resolution must be >= 2. Received: {opts.resolution}.')
    config = build_config(opts)
    run_dir = hp.run_dir(config)
    spec = demos.build_env_spec(config.env)
    model = pc.load_reward_model(config, run_dir, spec.state_dim, opts.snapshot)
    goal = spec.goal_set[0] if spec.goal_conditioned else None
    grid = rw.reward_grid(model, opts.resolution, goal)
    path = rw.write_grid(grid, run_dir / (ct.GRID_PRE_FILE if opts.snapshot == 'pre' else ct.GRID_POST_FILE))
    env.LOGGER.info(f'Wrote {len(grid)} grid rows to {path}.')

    return path


JOBS: t.Dict[str, t.Callable[[t.Any], t.Any]] = {
    'gen-demos': gen_demos,
    'train-ranking': train_ranking,
    'train': train,
    'eval': evaluate,
    'reward-grid': reward_grid,
}


def _run_seed(job: str, opts: jo.JobOptions, seed: int) -> t.Any:
    base = pl.Path(opts.out) if opts.out is not None else ct.WORK_ROOT / ct.RUNS_ROOT
    return JOBS[job](dc.replace(opts, seed=seed, seeds=None, out=str(base / f'seed_{seed}')))


def run(job: str, opts: jo.JobOptions) -> t.Any:
    """Dispatch `job`; with a seed list, run one independent process per seed."""
    if job not in JOBS:
        raise er.ArgumentError(f'Unknown job: {job}.')
    if opts.seeds:
        return hp.parallel.execute(functools.partial(_run_seed, job, opts), list(opts.seeds))
    return JOBS[job](opts)
