import dataclasses as dc
import typing as t

import numpy as np

import errors as er


@dc.dataclass
class AdamState:
    first_moment: t.List[np.ndarray]
    second_moment: t.List[np.ndarray]
    step_count: int = 0
    learning_rate: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.step_count < 0:
            raise er.ArgumentError(f'step_count must be >= 0. Received: {self.step_count}.')
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise er.ArgumentError(f'Adam betas must lie in (0, 1). Received: ({self.beta1}, {self.beta2}).')
        if len(self.first_moment) != len(self.second_moment):
            raise er.ShapeError('Adam moment lists differ in length.')


def init_adam(params: t.Sequence[np.ndarray], learning_rate: float = 1e-4,
              beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8) -> AdamState:
    return AdamState(first_moment=[np.zeros_like(p, dtype=np.float64) for p in params],
                     second_moment=[np.zeros_like(p, dtype=np.float64) for p in params],
                     step_count=0, learning_rate=learning_rate, beta1=beta1, beta2=beta2, epsilon=epsilon)


def adam_step(params: t.Sequence[np.ndarray], grads: t.Sequence[np.ndarray],
              state: AdamState) -> t.Tuple[t.List[np.ndarray], AdamState]:
    """One bias-corrected Adam update. Inputs are left untouched."""
    if not (len(params) == len(grads) == len(state.first_moment)):
        raise er.ShapeError(f'Got {len(params)} params, {len(grads)} grads, {len(state.first_moment)} moments.')
    for i, (param, grad) in enumerate(zip(params, grads)):
        if np.shape(param) != np.shape(grad) or np.shape(param) != state.first_moment[i].shape:
            raise er.ShapeError(f'Parameter {i}: shape {np.shape(param)} vs gradient {np.shape(grad)}.')
        if not np.all(np.isfinite(grad)):
            raise er.NumericError(f'Non-finite gradient for parameter {i} at Adam step {state.step_count + 1}.')

    step = state.step_count + 1
    b1, b2 = state.beta1, state.beta2
    first = [b1 * m + (1.0 - b1) * g for m, g in zip(state.first_moment, grads)]
    second = [b2 * v + (1.0 - b2) * np.square(g) for v, g in zip(state.second_moment, grads)]
    correction1 = 1.0 - b1 ** step
    correction2 = 1.0 - b2 ** step
    updated = []
    for param, m, v in zip(params, first, second):
        m_hat = m / correction1
        v_hat = v / correction2
        updated.append(np.asarray(param, dtype=np.float64) - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon))

    return updated, dc.replace(state, first_moment=first, second_moment=second, step_count=step)
