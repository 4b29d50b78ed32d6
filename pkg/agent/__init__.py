from agent._buffer import Transition, TransitionBatch, ReplayBuffer, buffer_push, buffer_sample
from agent._sac import (LOG_STD_MIN, LOG_STD_MAX, SacAgent, PolicySample, init_agent, sample_policy, act,
                        critic_inputs, q_values, polyak, critic_targets, critic_update, actor_loss,
                        actor_and_temperature_update, temperature_gradient, agent_step, agent_to_record,
                        agent_from_record, save_agent, load_agent)
