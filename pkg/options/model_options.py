import dataclasses as dc
import typing as t

import errors as er

REWARD_KINDS = ('rank2reward', 'gail', 'airl', 'vice', 'ranking_only')
DISCRIMINATOR_MODES = ('expert', 'goal_states', 'counterfactual')
GAIL_TRANSFORMS = ('log', 'raw')


@dc.dataclass
class NetworkOptions:
    hidden: t.List[int] = dc.field(default_factory=lambda: [64, 64])
    spectral_norm: bool = True
    power_iterations: int = 1

    def __post_init__(self):
        if not self.hidden or any(size < 1 for size in self.hidden):
            raise er.ConfigError(f'net.hidden must list positive sizes. Received: {self.hidden}.')
        if self.power_iterations < 1:
            raise er.ConfigError(f'net.power_iterations must be >= 1. Received: {self.power_iterations}.')


@dc.dataclass
class RankingOptions:
    net: NetworkOptions = dc.field(default_factory=NetworkOptions)
    steps: int = 5000
    batch_size: int = 32
    lr: float = 1e-4
    mixup: bool = True
    mixup_alpha: float = 1.0
    goal_conditioned: bool = False
    keep_every: int = 1

    def __post_init__(self):
        if self.steps < 0:
            raise er.ConfigError(f'ranking.steps must be >= 0. Received: {self.steps}.')
        if self.batch_size < 1:
            raise er.ConfigError(f'ranking.batch_size must be >= 1. Received: {self.batch_size}.')
        if self.lr <= 0:
            raise er.ConfigError(f'ranking.lr must be positive. Received: {self.lr}.')
        if self.mixup_alpha <= 0:
            raise er.ConfigError(f'ranking.mixup_alpha must be positive. Received: {self.mixup_alpha}.')
        if self.keep_every < 1:
            raise er.ConfigError(f'ranking.keep_every must be >= 1. Received: {self.keep_every}.')


@dc.dataclass
class DiscriminatorOptions:
    net: NetworkOptions = dc.field(default_factory=NetworkOptions)
    mode: str = 'expert'
    batch_size: int = 256
    lr: float = 1e-4
    update_frequency: int = 1
    updates_per_round: int = 1
    mixup: bool = True
    mixup_alpha: float = 1.0
    goal_states_per_trajectory: int = 1
    offline_steps: int = 2000

    def __post_init__(self):
        if self.mode not in DISCRIMINATOR_MODES:
            raise er.ConfigError(f'discriminator.mode must be one of {DISCRIMINATOR_MODES}. Received: {self.mode}.')
        if self.batch_size < 2 or self.batch_size % 2:
            raise er.ConfigError(f'discriminator.batch_size must be even and >= 2. Received: {self.batch_size}.')
        if self.lr <= 0:
            raise er.ConfigError(f'discriminator.lr must be positive. Received: {self.lr}.')
        if self.update_frequency < 1:
            raise er.ConfigError(f'discriminator.update_frequency must be >= 1. Received: {self.update_frequency}.')
        if self.updates_per_round < 1:
            raise er.ConfigError(f'discriminator.updates_per_round must be >= 1. Received: {self.updates_per_round}.')
        if self.mixup_alpha <= 0:
            raise er.ConfigError(f'discriminator.mixup_alpha must be positive. Received: {self.mixup_alpha}.')
        if self.goal_states_per_trajectory < 1:
            raise er.ConfigError('discriminator.goal_states_per_trajectory must be >= 1. '
                                 f'Received: {self.goal_states_per_trajectory}.')
        if self.offline_steps < 0:
            raise er.ConfigError(f'discriminator.offline_steps must be >= 0. Received: {self.offline_steps}.')


@dc.dataclass
class RewardOptions:
    kind: str = 'rank2reward'
    alpha: float = 1.0
    clamp_epsilon: float = 1e-7
    gail_transform: str = 'log'

    def __post_init__(self):
        if self.kind not in REWARD_KINDS:
            raise er.ConfigError(f'reward.kind must be one of {REWARD_KINDS}. Received: {self.kind}.')
        if self.alpha < 0:
            raise er.ConfigError(f'reward.alpha must be >= 0. Received: {self.alpha}.')
        if not 0 < self.clamp_epsilon < 0.5:
            raise er.ConfigError(f'reward.clamp_epsilon must lie in (0, 0.5). Received: {self.clamp_epsilon}.')
        if self.gail_transform not in GAIL_TRANSFORMS:
            raise er.ConfigError(f'reward.gail_transform must be one of {GAIL_TRANSFORMS}. '
                                 f'Received: {self.gail_transform}.')

    @property
    def needs_ranking(self) -> bool:
        return self.kind in ('rank2reward', 'ranking_only')

    @property
    def needs_discriminator(self) -> bool:
        return self.kind in ('rank2reward', 'gail', 'airl', 'vice')


@dc.dataclass
class AgentOptions:
    hidden: t.List[int] = dc.field(default_factory=lambda: [64, 64])
    discount: float = 0.99
    tau: float = 0.005
    num_critics: int = 2
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    temperature_lr: float = 3e-4
    init_temperature: float = 0.1
    utd_ratio: int = 20
    batch_size: int = 256
    buffer_capacity: int = 1_000_000
    explore_steps: int = 1000
    terminal_on_goal: bool = False

    def __post_init__(self):
        if not 0 < self.discount < 1:
            raise er.ConfigError(f'agent.discount must lie in (0, 1). Received: {self.discount}.')
        if not 0 < self.tau <= 1:
            raise er.ConfigError(f'agent.tau must lie in (0, 1]. Received: {self.tau}.')
        if self.num_critics != 2:
            raise er.ConfigError(f'agent.num_critics must be 2. Received: {self.num_critics}.')
        if self.utd_ratio < 1:
            raise er.ConfigError(f'agent.utd_ratio must be >= 1. Received: {self.utd_ratio}.')
        if self.batch_size < 1:
            raise er.ConfigError(f'agent.batch_size must be >= 1. Received: {self.batch_size}.')
        if self.buffer_capacity < 1:
            raise er.ConfigError(f'agent.buffer_capacity must be >= 1. Received: {self.buffer_capacity}.')
        if self.explore_steps < 0:
            raise er.ConfigError(f'agent.explore_steps must be >= 0. Received: {self.explore_steps}.')
        if self.init_temperature <= 0:
            raise er.ConfigError(f'agent.init_temperature must be positive. Received: {self.init_temperature}.')
        for name in ('actor_lr', 'critic_lr', 'temperature_lr'):
            if getattr(self, name) <= 0:
                raise er.ConfigError(f'agent.{name} must be positive. Received: {getattr(self, name)}.')
