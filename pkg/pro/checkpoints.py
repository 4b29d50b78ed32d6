import pathlib as pl
import typing as t

import numpy as np

import constants as ct
import discrim
import errors as er
import options.experiment_options as eo
import ranking
import reward as rw

SNAPSHOTS = ('pre', 'post')


def _require(path: pl.Path, producer: str) -> pl.Path:
    if not path.exists():
        raise er.ConfigError(f'Missing {path.name} in {path.parent}. Run `{producer}` first.')
    return path


def init_policy_discriminator(config: eo.ExperimentOptions, input_dim: int) -> discrim.DiscriminatorTrainState:
    """The discriminator a training run starts from. Rebuilt identically for `pre` snapshots."""
    rng = np.random.default_rng([config.seed, ct.DISC_INIT_STREAM])
    return discrim.init_discriminator_state(input_dim, config.discriminator, rng)


def load_ranking_model(config: eo.ExperimentOptions, run_dir: pl.Path) -> t.Optional[ranking.RankingModel]:
    if not config.reward.needs_ranking:
        return None
    return ranking.load_ranking(_require(run_dir / ct.RANKING_CKPT, 'train-ranking'))


def load_discriminator(config: eo.ExperimentOptions, run_dir: pl.Path, input_dim: int,
                       snapshot: str = 'post') -> t.Optional[discrim.Discriminator]:
    if snapshot not in SNAPSHOTS:
        raise er.ArgumentError(f'snapshot must be one of {SNAPSHOTS}. Received: {snapshot}.')
    if not config.reward.needs_discriminator:
        return None
    if config.discriminator.mode == discrim.COUNTERFACTUAL:
        return discrim.load_discriminator(_require(run_dir / ct.DISC_CKPT, 'train-ranking'))
    if snapshot == 'pre':
        return init_policy_discriminator(config, input_dim).disc
    return discrim.load_discriminator(_require(run_dir / ct.DISC_CKPT, 'train'))


def build_reward_model(config: eo.ExperimentOptions, ranking_model: t.Optional[ranking.RankingModel],
                       disc: t.Optional[discrim.Discriminator]) -> rw.RewardModel:
    return rw.RewardModel(kind=config.reward.kind, ranking=ranking_model, disc=disc, alpha=config.reward.alpha,
                          clamp_epsilon=config.reward.clamp_epsilon, gail_transform=config.reward.gail_transform)


def load_reward_model(config: eo.ExperimentOptions, run_dir: pl.Path, input_dim: int,
                      snapshot: str = 'post') -> rw.RewardModel:
    return build_reward_model(config, load_ranking_model(config, run_dir),
                              load_discriminator(config, run_dir, input_dim, snapshot))
