import numpy as np

import demos._env as en


def scripted_expert_action(spec: en.EnvSpec, state: en.EnvState, rng: np.random.Generator) -> np.ndarray:
    """Head for the next unreached waypoint (the last one once all are reached), plus Gaussian noise."""
    waypoints = en.waypoints_for(spec, state)
    target = waypoints[min(state.waypoint_index, len(waypoints) - 1)]
    action = en.clip_norm(target - state.position, spec.max_step_norm)
    action = action + rng.normal(0.0, spec.expert_noise_std, size=2)

    return en.clip_norm(action, spec.max_step_norm)


def expert_finished(spec: en.EnvSpec, state: en.EnvState) -> bool:
    return state.waypoint_index >= len(en.waypoints_for(spec, state))
