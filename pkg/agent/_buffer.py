import dataclasses as dc
import typing as t

import numpy as np

import errors as er


@dc.dataclass(frozen=True)
class Transition:
    state: np.ndarray
    action: np.ndarray
    next_state: np.ndarray
    done: bool = False


@dc.dataclass
class TransitionBatch:
    states: np.ndarray
    actions: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray

    def __len__(self) -> int:
        return self.states.shape[0]


class ReplayBuffer:
    """Fixed-capacity FIFO ring of transitions. Rewards are never stored."""

    def __init__(self, capacity: int, state_dim: int, action_dim: int):
        if capacity < 1:
            raise er.ArgumentError(f'Replay capacity must be >= 1. Received: {capacity}.')
        self.capacity = capacity
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros((capacity, action_dim))
        self.next_states = np.zeros((capacity, state_dim))
        self.dones = np.zeros(capacity)
        self.cursor = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def push(self, transition: Transition) -> None:
        i = self.cursor
        self.states[i] = transition.state
        self.actions[i] = transition.action
        self.next_states[i] = transition.next_state
        self.dones[i] = float(transition.done)
        self.cursor = (self.cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def _indices(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        if self.size < batch_size or self.size == 0:
            raise er.BufferTooSmallError(f'Replay holds {self.size} transitions, batch needs {batch_size}.')
        return rng.integers(0, self.size, size=batch_size)

    def sample(self, batch_size: int, rng: np.random.Generator) -> TransitionBatch:
        idx = self._indices(batch_size, rng)
        return TransitionBatch(self.states[idx], self.actions[idx], self.next_states[idx], self.dones[idx])

    def sample_states(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform draw of visited next-states, the policy side of a classifier batch."""
        if self.size == 0:
            raise er.BufferTooSmallError('Replay is empty.')
        return self.next_states[rng.integers(0, self.size, size=batch_size)]

    def oldest(self) -> Transition:
        if self.size == 0:
            raise er.BufferTooSmallError('Replay is empty.')
        i = self.cursor if self.size == self.capacity else 0
        return Transition(self.states[i].copy(), self.actions[i].copy(), self.next_states[i].copy(),
                          bool(self.dones[i]))


def buffer_push(buffer: ReplayBuffer, transition: Transition) -> None:
    buffer.push(transition)


def buffer_sample(buffer: ReplayBuffer, batch_size: int, rng: np.random.Generator) -> TransitionBatch:
    return buffer.sample(batch_size, rng)
