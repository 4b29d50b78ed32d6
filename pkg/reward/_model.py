import dataclasses as dc
import typing as t

import numpy as np

import constants as ct
import discrim
import errors as er
import numkit as nk
import ranking as rk

RANK2REWARD = 'rank2reward'
GAIL = 'gail'
AIRL = 'airl'
VICE = 'vice'
RANKING_ONLY = 'ranking_only'
KINDS = (RANK2REWARD, GAIL, AIRL, VICE, RANKING_ONLY)


@dc.dataclass
class RewardModel:
    kind: str
    ranking: t.Optional[rk.RankingModel] = None
    disc: t.Optional[discrim.Discriminator] = None
    alpha: float = 1.0
    clamp_epsilon: float = ct.CLAMP_EPSILON
    gail_transform: str = 'log'
    goal: t.Optional[t.Tuple[float, float]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise er.ConfigError(f'Unknown reward kind: {self.kind}.')
        if self.kind in (RANK2REWARD, RANKING_ONLY) and self.ranking is None:
            raise er.ConfigError(f'Reward kind {self.kind} needs a ranking model.')
        if self.kind in (RANK2REWARD, GAIL, AIRL, VICE) and self.disc is None:
            raise er.ConfigError(f'Reward kind {self.kind} needs a discriminator.')
        if self.kind == VICE and self.disc.mode != discrim.GOAL_STATES:
            raise er.ConfigError(f'VICE needs a goal-state discriminator, got mode {self.disc.mode}.')
        if self.alpha < 0:
            raise er.ConfigError(f'alpha must be >= 0. Received: {self.alpha}.')
        if self.gail_transform not in ('log', 'raw'):
            raise er.ConfigError(f'Unknown GAIL transform: {self.gail_transform}.')

    @property
    def goal_conditioned(self) -> bool:
        return bool((self.ranking is not None and self.ranking.goal_conditioned)
                    or (self.disc is not None and self.disc.goal_conditioned))


def _log_progress(model: RewardModel, states: np.ndarray) -> np.ndarray:
    return nk.clamped_log_probability(rk.utility(model.ranking, states), model.clamp_epsilon)


def _log_odds(model: RewardModel, states: np.ndarray) -> np.ndarray:
    return nk.clamped_logit(discrim.logits(model.disc, states), model.clamp_epsilon)


def combined_reward(model: RewardModel, states: np.ndarray) -> np.ndarray:
    """log p_RF(s) + α (log D(s) - log(1 - D(s))) with both probabilities clamped."""
    if model.ranking is None or model.disc is None:
        raise er.ConfigError('The combined reward needs both a ranking model and a discriminator.')
    return _log_progress(model, states) + model.alpha * _log_odds(model, states)


def product_form_reward(model: RewardModel, states: np.ndarray) -> np.ndarray:
    """log(p_RF · (D / (1 - D))^α) evaluated literally, without clamping."""
    if model.ranking is None or model.disc is None:
        raise er.ConfigError('The product form needs both a ranking model and a discriminator.')
    p = nk.sigmoid(rk.utility(model.ranking, states))
    d = nk.sigmoid(discrim.logits(model.disc, states))
    if np.any(d <= 0.0) or np.any(d >= 1.0) or np.any(p <= 0.0):
        raise er.NumericError('Product form is undefined for probabilities at 0 or 1.')

    return np.log(p * (d / (1.0 - d)) ** model.alpha)


def baseline_reward(model: RewardModel, states: np.ndarray) -> np.ndarray:
    if model.kind == GAIL:
        if model.gail_transform == 'raw':
            return discrim.classify(model.disc, states, model.clamp_epsilon)
        return nk.clamped_log_probability(discrim.logits(model.disc, states), model.clamp_epsilon)
    if model.kind == AIRL:
        return _log_odds(model, states)
    if model.kind == VICE:
        if model.disc is None or model.disc.mode != discrim.GOAL_STATES:
            raise er.ConfigError('VICE needs a discriminator trained on expert goal states.')
        return nk.clamped_log_probability(discrim.logits(model.disc, states), model.clamp_epsilon)
    if model.kind == RANKING_ONLY:
        return _log_progress(model, states)
    raise er.ConfigError(f'{model.kind} is not a baseline reward.')


def reward(model: RewardModel, states: np.ndarray) -> np.ndarray:
    if model.kind == RANK2REWARD:
        return combined_reward(model, states)
    return baseline_reward(model, states)


def reward_components(model: RewardModel, states: np.ndarray) -> t.Dict[str, np.ndarray]:
    """Per-state utility, p_RF, D, ratio and reward; NaN where the submodel is absent."""
    n = nk.as_matrix(states).shape[0]
    missing = np.full(n, np.nan)
    components = {'utility': missing, 'p_rf': missing, 'd': missing, 'ratio': missing}
    if model.ranking is not None:
        components['utility'] = rk.utility(model.ranking, states)
        components['p_rf'] = nk.sigmoid(components['utility'])
    if model.disc is not None:
        components['d'] = discrim.classify(model.disc, states, model.clamp_epsilon)
        components['ratio'] = components['d'] / (1.0 - components['d'])
    components['reward'] = reward(model, states)

    return components


def reward_bounds(alpha: float, eps: float = ct.CLAMP_EPSILON) -> t.Tuple[float, float]:
    log_odds = np.log1p(-eps) - np.log(eps)
    return float(np.log(eps) - alpha * log_odds), float(np.log1p(-eps) + alpha * log_odds)
