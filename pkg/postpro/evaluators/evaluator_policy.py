import typing as t

import ignite.engine as ie
import numpy as np

import agent as ag
import constants as ct
import errors as er
import options.experiment_options as eo
import postpro.evaluators._evaluator_base as _base
import pro.checkpoints as pc
import pro.engine as pe
import reward as rw
import specs.maps as sm

POLICIES = ('agent', 'expert')


def episode_rngs(seed: int, episodes: int, env_step: int = 0) -> t.List[np.random.Generator]:
    return [np.random.default_rng([seed, ct.EVAL_STREAM, env_step, i]) for i in range(episodes)]


class PolicyEvaluator(_base.BaseEvaluator):
    """Deterministic episodes of the trained agent, or of the scripted expert as a reference."""

    def __init__(self, opts: eo.ExperimentOptions, episodes: t.Optional[int] = None, policy: str = 'agent'):
        self.episodes = opts.eval_episodes if episodes is None else episodes
        if self.episodes < 1:
            raise er.ArgumentError(f'episodes must be >= 1. Received: {self.episodes}.')
        if policy not in POLICIES:
            raise er.ArgumentError(f'policy must be one of {POLICIES}. Received: {policy}.')
        self.policy = policy
        super(PolicyEvaluator, self).__init__(opts)

    def _init_reward_model(self) -> t.Optional[rw.RewardModel]:
        try:
            return pc.load_reward_model(self.opts, self.run_dir, self.spec.state_dim)
        except er.ConfigError as e:
            if self.policy == 'agent':
                raise
            self.logger.log(f'No learned reward available, reporting NaN for it: {e}')
            return None

    def _init_policy(self) -> pe.PolicyFn:
        if self.policy == 'expert':
            return pe.expert_policy(self.spec)
        path = self.run_dir / ct.AGENT_CKPT
        if not path.exists():
            raise er.ConfigError(f'Missing {ct.AGENT_CKPT} in {self.run_dir}. Run `train` first.')

        return pe.agent_policy(ag.load_agent(path))

    def _init_evaluator(self) -> ie.Engine:
        return pe.create_policy_evaluator(self.spec, self._init_policy(), self._init_reward_model(),
                                          sm.eval_policy_metrics())

    def evaluate(self) -> t.Dict[str, float]:
        self.evaluator.run(episode_rngs(self.opts.seed, self.episodes), max_epochs=1)
        metrics = {k: float(v) for k, v in self.evaluator.state.metrics.items()}
        metrics['episodes'] = self.episodes
        self.logger.persist_metrics({'policy': self.policy, **metrics}, ct.EVAL_METRICS)

        return metrics
