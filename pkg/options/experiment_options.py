import dataclasses as dc
import typing as t

import errors as er
from options import env_options as eno, model_options as mo


@dc.dataclass
class ExperimentOptions:
    env: eno.EnvOptions = dc.field(default_factory=eno.EnvOptions)
    demos: eno.DemoOptions = dc.field(default_factory=eno.DemoOptions)
    ranking: mo.RankingOptions = dc.field(default_factory=mo.RankingOptions)
    discriminator: mo.DiscriminatorOptions = dc.field(default_factory=mo.DiscriminatorOptions)
    reward: mo.RewardOptions = dc.field(default_factory=mo.RewardOptions)
    agent: mo.AgentOptions = dc.field(default_factory=mo.AgentOptions)
    total_steps: int = 150_000
    eval_every: int = 2000
    eval_episodes: int = 10
    seed: int = 0
    out: t.Optional[str] = None
    record_wall_clock: bool = False
    show_progress: bool = True

    def __post_init__(self):
        if self.total_steps < self.agent.explore_steps:
            raise er.ConfigError(f'total_steps ({self.total_steps}) must be >= agent.explore_steps '
                                 f'({self.agent.explore_steps}).')
        if self.eval_every < 1:
            raise er.ConfigError(f'eval_every must be >= 1. Received: {self.eval_every}.')
        if self.eval_episodes < 1:
            raise er.ConfigError(f'eval_episodes must be >= 1. Received: {self.eval_episodes}.')
        if self.reward.kind == 'vice' and self.discriminator.mode != 'goal_states':
            raise er.ConfigError('reward.kind vice requires discriminator.mode goal_states.')
        if self.ranking.goal_conditioned and self.env.kind != 'multi_goal_reach':
            raise er.ConfigError('ranking.goal_conditioned needs a goal-conditioned env.kind (multi_goal_reach).')
        if self.discriminator.mode == 'counterfactual' and not self.ranking.goal_conditioned:
            raise er.ConfigError('discriminator.mode counterfactual requires ranking.goal_conditioned.')
