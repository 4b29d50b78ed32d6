import time
import typing as typ

import ignite.engine as ie
import numpy as np

import agent as ag
import constants as ct
import demos
import discrim
import options.experiment_options as eo
import postpro.evaluators.evaluator_policy as epo
import pro.checkpoints as pc
import pro.engine as pe
import pro.runners._runner_base as _base
import ranking
import reward as rw
import specs.maps as sm


def expected_disc_updates(opts: eo.ExperimentOptions) -> int:
    if not opts.reward.needs_discriminator or opts.discriminator.mode == discrim.COUNTERFACTUAL:
        return 0
    post_explore = opts.total_steps - opts.agent.explore_steps
    return (post_explore // opts.discriminator.update_frequency) * opts.discriminator.updates_per_round


class PolicyRunner(_base.BaseRunner):
    """Joint loop: collect with the policy, refit the discriminator on cadence, update SAC on the learned reward."""

    def __init__(self, opts: eo.ExperimentOptions):
        super(PolicyRunner, self).__init__(opts)
        self.state = self._init_state()
        self.ranking_tau = self._init_ranking_tau()
        self.rows: typ.List[typ.Dict[str, float]] = []
        self.spurious: typ.Dict[str, typ.Any] = {}
        self.interval_rewards: typ.List[float] = []
        self.interval_losses: typ.List[float] = []
        self.started = time.perf_counter()

        self.trainer, self.evaluator = self._init_engines()
        self._init_events()

    def _init_state(self) -> pe.PolicyTrainState:
        state_dim = self.spec.state_dim
        ranking_model = pc.load_ranking_model(self.opts, self.run_dir)
        disc_state, sampler = None, None
        if self.opts.reward.needs_discriminator:
            if self.opts.discriminator.mode == discrim.COUNTERFACTUAL:
                disc = pc.load_discriminator(self.opts, self.run_dir, state_dim)
                disc_state = discrim.DiscriminatorTrainState(disc, None)
            else:
                disc_state = pc.init_policy_discriminator(self.opts, state_dim)
                sampler = discrim.ExpertSampler(self.dataset, self.opts.discriminator.mode,
                                                self.opts.discriminator.goal_states_per_trajectory)
        reward_model = pc.build_reward_model(self.opts, ranking_model,
                                             disc_state.disc if disc_state is not None else None)

        agent = ag.init_agent(state_dim, self.spec.action_dim, self.spec.max_step_norm, self.opts.agent, self.rng)
        buffer = ag.ReplayBuffer(min(self.opts.agent.buffer_capacity, max(self.opts.total_steps, 1)), state_dim,
                                 self.spec.action_dim)

        return pe.PolicyTrainState(agent=agent, buffer=buffer, reward_model=reward_model,
                                   env_state=demos.env_reset(self.spec, self.rng), disc_state=disc_state,
                                   sampler=sampler)

    def _init_ranking_tau(self) -> float:
        if self.state.reward_model.ranking is None:
            return float('nan')
        return ranking.mean_kendall_tau(self.state.reward_model.ranking, self.eval_set)

    def _init_engines(self) -> typ.Tuple[ie.Engine, ie.Engine]:
        trainer = pe.create_policy_trainer(self.state, self.spec, self.opts, self.rng, sm.train_policy_metrics())
        policy = lambda _state, obs, rng: ag.act(self.state.agent, obs, True, rng)
        evaluator = pe.create_policy_evaluator(self.spec, policy, None, sm.eval_policy_metrics())

        return trainer, evaluator

    def _init_events(self) -> None:
        self.trainer.add_event_handler(ie.Events.STARTED, self._persist_grid, ct.GRID_PRE_FILE)
        self.trainer.add_event_handler(ie.Events.ITERATION_COMPLETED, self._collect)
        self.logger.attach_pbar(self.trainer, ['learned_reward'])
        self.trainer.add_event_handler(ie.Events.ITERATION_COMPLETED(every=self.opts.eval_every), self._evaluate)
        self.trainer.add_event_handler(ie.Events.COMPLETED, self._complete)
        self.trainer.add_event_handler(ie.Events.EXCEPTION_RAISED, self._graceful_shutdown)

        self.evaluator.add_event_handler(ie.Events.EXCEPTION_RAISED, self._graceful_shutdown)

    def _collect(self, _engine: ie.Engine) -> None:
        output = _engine.state.output
        self.interval_rewards.append(output['learned_reward'])
        if 'discriminator_loss' in output:
            self.interval_losses.append(output['discriminator_loss'])

    def _evaluate(self, _engine: ie.Engine) -> None:
        step = _engine.state.iteration
        self.evaluator.run(epo.episode_rngs(self.opts.seed, self.opts.eval_episodes, step), max_epochs=1)
        metrics = self.evaluator.state.metrics
        row = {
            'env_step': step,
            'eval_success_rate': float(metrics['success_rate']),
            'eval_mean_true_return': float(metrics['mean_true_return']),
            'mean_learned_reward': float(np.mean(self.interval_rewards)) if self.interval_rewards else float('nan'),
            'discriminator_loss': float(np.mean(self.interval_losses)) if self.interval_losses else float('nan'),
            'ranking_kendall_tau': self.ranking_tau,
            'wall_clock_s': time.perf_counter() - self.started if self.opts.record_wall_clock else 0.0,
        }
        self.rows.append(row)
        self.interval_rewards, self.interval_losses = [], []
        self.logger.log_metrics({k: v for k, v in row.items() if k != 'wall_clock_s'})

    def _persist_grid(self, _engine: ie.Engine, file_name: str) -> None:
        goal = self.spec.goal_set[0] if self.spec.goal_conditioned else None
        grid = rw.reward_grid(self.state.reward_model, ct.GRID_RESOLUTION, goal)
        self.logger.persist_grid(grid, file_name)
        if file_name == ct.GRID_POST_FILE and self.state.reward_model.ranking is not None \
                and not self.spec.goal_conditioned:
            self.spurious = rw.spurious_ranking_report(self.state.reward_model, grid, self.dataset.all_states())

    def _persist_checkpoints(self) -> None:
        ag.save_agent(self.state.agent, self.run_dir / ct.AGENT_CKPT)
        if self.state.disc_state is not None:
            discrim.save_discriminator(self.state.disc_state.disc, self.run_dir / ct.DISC_CKPT)

    def _complete(self, _engine: ie.Engine) -> None:
        if not self.rows or self.rows[-1]['env_step'] != _engine.state.iteration:
            self._evaluate(_engine)
        self._persist_checkpoints()
        self._persist_grid(_engine, ct.GRID_POST_FILE)
        self._end_run(_engine)

    def _end_run(self, _: typ.Optional[ie.Engine] = None):
        self.logger.persist_curve(self.rows)
        super(PolicyRunner, self)._end_run(_)

    def _counters(self) -> typ.Dict[str, typ.Any]:
        return {
            'total_steps': self.opts.total_steps,
            'discriminator_updates': self.state.disc_updates,
            'expected_discriminator_updates': expected_disc_updates(self.opts),
            'agent_updates': self.state.agent_updates,
            'deferred_agent_updates': self.state.deferred_updates,
            'episodes': self.state.episodes,
            'final_eval_success_rate': self.rows[-1]['eval_success_rate'] if self.rows else float('nan'),
            'final_eval_mean_true_return': self.rows[-1]['eval_mean_true_return'] if self.rows else float('nan'),
            **self.spurious,
        }

    def run(self) -> typ.Dict[str, typ.Any]:
        if self.opts.total_steps > 0:
            self.trainer.run(range(self.opts.total_steps), max_epochs=1)
        else:
            self._persist_grid(self.trainer, ct.GRID_PRE_FILE)
            self._persist_checkpoints()
            self._persist_grid(self.trainer, ct.GRID_POST_FILE)
            self._end_run()
        counters = self._counters()
        self.logger.persist_metrics(counters, ct.TRAIN_METRICS)

        return counters
