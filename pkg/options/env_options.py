import dataclasses as dc
import typing as t

import errors as er

ENV_KINDS = ('two_wall_maze', 'point_reach', 'multi_goal_reach')


@dc.dataclass
class EnvOptions:
    kind: str = 'two_wall_maze'
    max_step_norm: float = 0.05
    horizon: int = 200
    goal_radius: float = 0.05
    expert_noise_std: float = 0.005

    def __post_init__(self):
        if self.kind not in ENV_KINDS:
            raise er.ConfigError(f'env.kind must be one of {ENV_KINDS}. Received: {self.kind}.')
        if self.max_step_norm <= 0:
            raise er.ConfigError(f'env.max_step_norm must be positive. Received: {self.max_step_norm}.')
        if self.horizon < 1:
            raise er.ConfigError(f'env.horizon must be >= 1. Received: {self.horizon}.')
        if self.goal_radius <= 0:
            raise er.ConfigError(f'env.goal_radius must be positive. Received: {self.goal_radius}.')
        if self.expert_noise_std < 0:
            raise er.ConfigError(f'env.expert_noise_std must be >= 0. Received: {self.expert_noise_std}.')


@dc.dataclass
class DemoOptions:
    n_trajectories: int = 20
    path: t.Optional[str] = None

    def __post_init__(self):
        if self.n_trajectories < 1:
            raise er.ArgumentError(f'demos.n_trajectories must be >= 1. Received: {self.n_trajectories}.')
