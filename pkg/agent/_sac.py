import dataclasses as dc
import typing as t

import numpy as np

import agent._buffer as ab
import errors as er
import numkit as nk
import options.model_options as mo

LOG_STD_MIN = -10.0
LOG_STD_MAX = 2.0
TANH_EPS = 1e-6
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)

RewardFn = t.Callable[[np.ndarray], np.ndarray]


@dc.dataclass
class SacAgent:
    """Squashed-Gaussian actor, twin critics over (state, normalised action) and a log-parameterised temperature.

    Actions are produced in [-1, 1] and scaled by `action_scale` before reaching the environment.
    """
    actor: nk.MlpParams
    critics: t.List[nk.MlpParams]
    target_critics: t.List[nk.MlpParams]
    log_temperature: float
    actor_adam: nk.AdamState
    critic_adams: t.List[nk.AdamState]
    temperature_adam: nk.AdamState
    action_scale: float
    action_dim: int = 2

    @property
    def state_dim(self) -> int:
        return self.actor.input_dim

    @property
    def temperature(self) -> float:
        return float(np.exp(self.log_temperature))

    @property
    def target_entropy(self) -> float:
        return -float(self.action_dim)


def init_agent(state_dim: int, action_dim: int, action_scale: float, opts: mo.AgentOptions,
               rng: np.random.Generator) -> SacAgent:
    actor = nk.init_mlp([state_dim, *opts.hidden, 2 * action_dim], rng, final_scale=0.01)
    critics = [nk.init_mlp([state_dim + action_dim, *opts.hidden, 1], rng) for _ in range(opts.num_critics)]
    log_temperature = float(np.log(opts.init_temperature))

    return SacAgent(actor=actor,
                    critics=critics,
                    target_critics=[critic.copy() for critic in critics],
                    log_temperature=log_temperature,
                    actor_adam=nk.init_adam(actor.parameters(), opts.actor_lr),
                    critic_adams=[nk.init_adam(critic.parameters(), opts.critic_lr) for critic in critics],
                    temperature_adam=nk.init_adam([np.zeros(1)], opts.temperature_lr),
                    action_scale=action_scale,
                    action_dim=action_dim)


########################################################################################################################
# POLICY
########################################################################################################################
@dc.dataclass
class PolicySample:
    squashed: np.ndarray
    log_prob: np.ndarray
    pre_tanh: np.ndarray
    noise: np.ndarray
    std: np.ndarray
    log_std_active: np.ndarray
    cache: nk.MlpCache


def _actor_heads(agent: SacAgent, states: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray, nk.MlpCache]:
    outputs, cache = nk.mlp_forward(agent.actor, states)
    mean, raw_log_std = outputs[:, :agent.action_dim], outputs[:, agent.action_dim:]
    log_std = np.clip(raw_log_std, LOG_STD_MIN, LOG_STD_MAX)
    active = (raw_log_std > LOG_STD_MIN) & (raw_log_std < LOG_STD_MAX)

    return mean, log_std, active, cache


def sample_policy(agent: SacAgent, states: np.ndarray, rng: t.Optional[np.random.Generator] = None,
                  noise: t.Optional[np.ndarray] = None) -> PolicySample:
    """Reparameterised tanh-Gaussian sample and its log-density in the normalised action space."""
    mean, log_std, active, cache = _actor_heads(agent, states)
    if noise is None:
        noise = rng.standard_normal(mean.shape)
    std = np.exp(log_std)
    pre_tanh = mean + std * noise
    squashed = np.tanh(pre_tanh)
    log_prob = np.sum(-0.5 * noise ** 2 - log_std - _HALF_LOG_2PI - np.log(1.0 - squashed ** 2 + TANH_EPS), axis=1)

    return PolicySample(squashed, log_prob, pre_tanh, noise, std, active, cache)


def act(agent: SacAgent, state: np.ndarray, deterministic: bool, rng: np.random.Generator) -> np.ndarray:
    states = nk.as_matrix(state, agent.state_dim, 'state')
    if deterministic:
        mean, _, _, _ = _actor_heads(agent, states)
        squashed = np.tanh(mean)
    else:
        squashed = sample_policy(agent, states, rng).squashed
    actions = squashed * agent.action_scale

    return actions[0] if np.ndim(state) == 1 else actions


########################################################################################################################
# CRITICS
########################################################################################################################
def critic_inputs(agent: SacAgent, states: np.ndarray, squashed: np.ndarray) -> np.ndarray:
    return np.hstack([states, squashed])


def q_values(critic: nk.MlpParams, inputs: np.ndarray) -> np.ndarray:
    outputs, _ = nk.mlp_forward(critic, inputs)
    return outputs[:, 0]


def polyak(target: nk.MlpParams, online: nk.MlpParams, tau: float) -> nk.MlpParams:
    return target.with_parameters([(1.0 - tau) * tp + tau * op
                                   for tp, op in zip(target.parameters(), online.parameters())])


def critic_targets(agent: SacAgent, batch: ab.TransitionBatch, rewards: np.ndarray, discount: float,
                   rng: np.random.Generator) -> np.ndarray:
    """r + γ (1 - done) (min_i Q_target_i(s', a') - temperature · log π(a'|s'))."""
    sample = sample_policy(agent, batch.next_states, rng)
    inputs = critic_inputs(agent, batch.next_states, sample.squashed)
    next_q = np.min(np.stack([q_values(target, inputs) for target in agent.target_critics]), axis=0)
    bootstrap = next_q - agent.temperature * sample.log_prob
    targets = rewards + discount * (1.0 - batch.dones) * bootstrap
    if not np.all(np.isfinite(targets)):
        raise er.NumericError('Non-finite critic target.')

    return targets


def critic_update(agent: SacAgent, batch: ab.TransitionBatch, reward_fn: RewardFn, opts: mo.AgentOptions,
                  rng: np.random.Generator) -> t.Tuple[SacAgent, t.Dict[str, float]]:
    """Relabel rewards on s' with the current reward model, regress both critics, then Polyak the targets."""
    rewards = np.asarray(reward_fn(batch.next_states), dtype=np.float64).reshape(-1)
    targets = critic_targets(agent, batch, rewards, opts.discount, rng)
    inputs = critic_inputs(agent, batch.states, batch.actions / agent.action_scale)
    critics, adams, metrics = [], [], {}
    for i, (critic, adam) in enumerate(zip(agent.critics, agent.critic_adams)):
        outputs, cache = nk.mlp_forward(critic, inputs)
        residual = outputs[:, 0] - targets
        grads = nk.mlp_backward(critic, cache, (2.0 * residual / len(residual)).reshape(-1, 1))
        params, adam = nk.adam_step(critic.parameters(), grads.parameters(), adam)
        critics.append(critic.with_parameters(params))
        adams.append(adam)
        metrics[f'critic_loss_{i}'] = float(np.mean(residual ** 2))
    targets_nets = [polyak(target, online, opts.tau) for target, online in zip(agent.target_critics, critics)]
    metrics['mean_batch_reward'] = float(np.mean(rewards))

    return dc.replace(agent, critics=critics, critic_adams=adams, target_critics=targets_nets), metrics


########################################################################################################################
# ACTOR AND TEMPERATURE
########################################################################################################################
def actor_loss(agent: SacAgent, states: np.ndarray,
               noise: np.ndarray) -> t.Tuple[float, nk.MlpGrads, PolicySample]:
    """mean(temperature · log π(a|s) - min_i Q_i(s, a)) with a reparameterised by `noise`; critics held fixed."""
    batch_size = states.shape[0]
    sample = sample_policy(agent, states, noise=noise)
    inputs = critic_inputs(agent, states, sample.squashed)
    qs, input_grads = [], []
    for critic in agent.critics:
        outputs, cache = nk.mlp_forward(critic, inputs)
        qs.append(outputs[:, 0])
        input_grads.append(nk.mlp_backward(critic, cache, np.ones_like(outputs)).inputs[:, agent.state_dim:])
    qs = np.stack(qs)
    lowest = np.argmin(qs, axis=0)
    min_q = qs[lowest, np.arange(batch_size)]
    dq_da = np.stack(input_grads)[lowest, np.arange(batch_size)]

    temp = agent.temperature
    loss = float(np.mean(temp * sample.log_prob - min_q))
    one_minus_sq = 1.0 - sample.squashed ** 2
    d_pre = (temp * 2.0 * sample.squashed * one_minus_sq / (one_minus_sq + TANH_EPS) - dq_da * one_minus_sq)
    d_pre = d_pre / batch_size
    d_mean = d_pre
    d_log_std = (d_pre * sample.std * sample.noise - temp / batch_size) * sample.log_std_active
    grads = nk.mlp_backward(agent.actor, sample.cache, np.hstack([d_mean, d_log_std]))

    return loss, grads, sample


def actor_and_temperature_update(agent: SacAgent, batch: ab.TransitionBatch, opts: mo.AgentOptions,
                                 rng: np.random.Generator) -> t.Tuple[SacAgent, t.Dict[str, float]]:
    noise = rng.standard_normal((len(batch), agent.action_dim))
    loss, grads, sample = actor_loss(agent, batch.states, noise)
    params, actor_adam = nk.adam_step(agent.actor.parameters(), grads.parameters(), agent.actor_adam)

    entropy_gap = float(np.mean(sample.log_prob) + agent.target_entropy)
    temperature_loss = -agent.log_temperature * entropy_gap
    (log_temperature,), temperature_adam = nk.adam_step([np.array([agent.log_temperature])],
                                                        [np.array([-entropy_gap])], agent.temperature_adam)
    updated = dc.replace(agent, actor=agent.actor.with_parameters(params), actor_adam=actor_adam,
                         log_temperature=float(log_temperature[0]), temperature_adam=temperature_adam)

    return updated, {
        'actor_loss': loss,
        'temperature_loss': float(temperature_loss),
        'temperature': updated.temperature,
        'entropy': float(-np.mean(sample.log_prob)),
    }


def temperature_gradient(agent: SacAgent, log_probs: np.ndarray) -> float:
    """d/d log_temperature of -log_temperature · mean(log π + target entropy)."""
    return -float(np.mean(log_probs) + agent.target_entropy)


def agent_step(agent: SacAgent, buffer: ab.ReplayBuffer, reward_fn: RewardFn, opts: mo.AgentOptions,
               rng: np.random.Generator) -> t.Tuple[SacAgent, t.Dict[str, float]]:
    """`utd_ratio` critic updates on fresh batches, then one actor and temperature update."""
    critic_metrics = []
    for _ in range(opts.utd_ratio):
        agent, metrics = critic_update(agent, buffer.sample(opts.batch_size, rng), reward_fn, opts, rng)
        critic_metrics.append(metrics)
    agent, actor_metrics = actor_and_temperature_update(agent, buffer.sample(opts.batch_size, rng), opts, rng)

    metrics = {key: float(np.mean([m[key] for m in critic_metrics])) for key in critic_metrics[0]}
    metrics.update(actor_metrics)
    metrics['critic_batches'] = float(len(critic_metrics))

    return agent, metrics


########################################################################################################################
# CHECKPOINTS
########################################################################################################################
def agent_to_record(agent: SacAgent) -> t.Dict[str, t.Any]:
    return {
        'action_scale': float(agent.action_scale),
        'action_dim': int(agent.action_dim),
        'log_temperature': float(agent.log_temperature),
        'actor': nk.mlp_to_record(agent.actor),
        'critics': [nk.mlp_to_record(c) for c in agent.critics],
        'target_critics': [nk.mlp_to_record(c) for c in agent.target_critics],
        'actor_adam': nk.adam_to_record(agent.actor_adam),
        'critic_adams': [nk.adam_to_record(a) for a in agent.critic_adams],
        'temperature_adam': nk.adam_to_record(agent.temperature_adam),
    }


def agent_from_record(record: t.Dict[str, t.Any]) -> SacAgent:
    return SacAgent(actor=nk.mlp_from_record(record['actor']),
                    critics=[nk.mlp_from_record(c) for c in record['critics']],
                    target_critics=[nk.mlp_from_record(c) for c in record['target_critics']],
                    log_temperature=float(record['log_temperature']),
                    actor_adam=nk.adam_from_record(record['actor_adam']),
                    critic_adams=[nk.adam_from_record(a) for a in record['critic_adams']],
                    temperature_adam=nk.adam_from_record(record['temperature_adam']),
                    action_scale=float(record['action_scale']),
                    action_dim=int(record['action_dim']))


def save_agent(agent: SacAgent, path) -> None:
    nk.write_checkpoint(path, 'agent', agent_to_record(agent))


def load_agent(path) -> SacAgent:
    return agent_from_record(nk.read_checkpoint(path, 'agent'))
