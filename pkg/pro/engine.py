import dataclasses as dc
import typing as t

import ignite.engine as ie
import ignite.metrics as im
import numpy as np

import agent as ag
import demos
import discrim
import errors as er
import options.experiment_options as eo
import reward as rw

PolicyFn = t.Callable[[demos.EnvState, np.ndarray, np.random.Generator], np.ndarray]


@dc.dataclass
class PolicyTrainState:
    """Everything the joint reward/policy loop mutates between environment steps."""
    agent: ag.SacAgent
    buffer: ag.ReplayBuffer
    reward_model: rw.RewardModel
    env_state: demos.EnvState
    disc_state: t.Optional[discrim.DiscriminatorTrainState] = None
    sampler: t.Optional[discrim.ExpertSampler] = None
    disc_updates: int = 0
    agent_updates: int = 0
    deferred_updates: int = 0
    episodes: int = 0
    last_metrics: t.Dict[str, float] = dc.field(default_factory=dict)


def random_action(spec: demos.EnvSpec, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=2) * spec.max_step_norm


def agent_policy(agent: ag.SacAgent) -> PolicyFn:
    return lambda _state, obs, rng: ag.act(agent, obs, True, rng)


def expert_policy(spec: demos.EnvSpec) -> PolicyFn:
    return lambda state, _obs, rng: demos.scripted_expert_action(spec, state, rng)


def _check_finite(metrics: t.Dict[str, float], step: int) -> None:
    bad = [key for key, value in metrics.items() if not np.isfinite(value)]
    if bad:
        raise er.TrainingError(f'non-finite values in {bad}', step, metrics)


def create_policy_trainer(state: PolicyTrainState, spec: demos.EnvSpec, opts: eo.ExperimentOptions,
                          rng: np.random.Generator, metrics: t.Optional[t.Dict[str, im.Metric]] = None) -> ie.Engine:
    """One iteration is one environment step followed, after exploration, by the reward and policy updates."""
    explore_steps = opts.agent.explore_steps
    update_disc = state.disc_state is not None and opts.discriminator.mode != discrim.COUNTERFACTUAL

    def _update(_engine, _batch):
        step = _engine.state.iteration
        obs = demos.observe(spec, state.env_state)
        if step <= explore_steps:
            action = random_action(spec, rng)
        else:
            action = ag.act(state.agent, obs, False, rng)
        next_env, _, done = demos.env_step(spec, state.env_state, action)
        next_obs = demos.observe(spec, next_env)
        terminal = opts.agent.terminal_on_goal and demos.goal_reached(spec, next_env)
        state.buffer.push(ag.Transition(obs, np.asarray(action, dtype=np.float64), next_obs, terminal))
        if done:
            state.episodes += 1
            state.env_state = demos.env_reset(spec, rng)
        else:
            state.env_state = next_env

        output = {'env_step': float(step)}
        try:
            if step > explore_steps:
                if update_disc and (step - explore_steps) % opts.discriminator.update_frequency == 0:
                    disc, adam, loss = discrim.update_discriminator(state.disc_state.disc, state.disc_state.adam,
                                                                    state.sampler, state.buffer,
                                                                    opts.discriminator, rng)
                    state.disc_state = discrim.DiscriminatorTrainState(disc, adam)
                    state.reward_model = dc.replace(state.reward_model, disc=disc)
                    state.disc_updates += opts.discriminator.updates_per_round
                    output['discriminator_loss'] = loss
                reward_fn = lambda states: rw.reward(state.reward_model, states)
                try:
                    state.agent, agent_metrics = ag.agent_step(state.agent, state.buffer, reward_fn, opts.agent, rng)
                    state.agent_updates += 1
                    output.update(agent_metrics)
                except er.BufferTooSmallError:
                    state.deferred_updates += 1
            output['learned_reward'] = float(rw.reward(state.reward_model, next_obs[None, :])[0])
        except er.NumericError as e:
            raise er.TrainingError(f'numeric failure ({e})', step, state.last_metrics) from e

        _check_finite(output, step)
        state.last_metrics = output
        return output

    _engine = ie.Engine(_update)
    if metrics is not None:
        for name, metric in metrics.items():
            metric.attach(_engine, name)

    return _engine


def run_episode(spec: demos.EnvSpec, policy: PolicyFn, reward_model: t.Optional[rw.RewardModel],
                rng: np.random.Generator) -> t.Dict[str, float]:
    env_state = demos.env_reset(spec, rng)
    true_return, learned, done = 0.0, [], False
    while not done:
        obs = demos.observe(spec, env_state)
        env_state, true_reward, done = demos.env_step(spec, env_state, policy(env_state, obs, rng))
        true_return += true_reward
        if reward_model is not None:
            learned.append(float(rw.reward(reward_model, demos.observe(spec, env_state)[None, :])[0]))

    return {
        'success': float(demos.goal_reached(spec, env_state)),
        'true_return': true_return,
        'length': float(env_state.steps_elapsed),
        'learned_reward': float(np.mean(learned)) if learned else float('nan'),
    }


def create_policy_evaluator(spec: demos.EnvSpec, policy: PolicyFn, reward_model: t.Optional[rw.RewardModel],
                            metrics: t.Optional[t.Dict[str, im.Metric]] = None) -> ie.Engine:
    """One iteration is one full episode; each batch is the generator that seeds it."""

    def _inference(_engine, rng: np.random.Generator):
        return run_episode(spec, policy, reward_model, rng)

    _engine = ie.Engine(_inference)
    if metrics is not None:
        for name, metric in metrics.items():
            metric.attach(_engine, name)

    return _engine
