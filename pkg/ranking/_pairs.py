import dataclasses as dc
import typing as t

import numpy as np

import demos
import errors as er
import ranking._model as rm


@dc.dataclass
class PairBatch:
    first_states: np.ndarray
    second_states: np.ndarray
    labels: np.ndarray
    trajectory_ids: np.ndarray
    first_indices: np.ndarray
    second_indices: np.ndarray

    def __len__(self) -> int:
        return self.labels.shape[0]

    def swapped(self) -> 'PairBatch':
        return PairBatch(self.second_states, self.first_states, 1.0 - self.labels, self.trajectory_ids,
                         self.second_indices, self.first_indices)


def _sample(inputs: t.Sequence[np.ndarray], batch_size: int, rng: np.random.Generator) -> PairBatch:
    lengths = np.array([len(x) for x in inputs])
    if np.any(lengths < 2):
        raise er.ArgumentError('Every trajectory needs at least 2 states to form a pair.')
    traj_ids = rng.integers(0, len(inputs), size=batch_size)
    traj_lengths = lengths[traj_ids]
    first = rng.integers(0, traj_lengths)
    second = rng.integers(0, traj_lengths - 1)
    second = second + (second >= first)
    first_states = np.stack([inputs[k][i] for k, i in zip(traj_ids, first)])
    second_states = np.stack([inputs[k][j] for k, j in zip(traj_ids, second)])

    return PairBatch(first_states, second_states, (first > second).astype(np.float64), traj_ids, first, second)


def sample_pair_batch(dataset: demos.ExpertDataset, batch_size: int, rng: np.random.Generator,
                      goal_conditioned: bool = False) -> PairBatch:
    """Trajectory uniformly, then two distinct frame indices uniformly; label 1 when the first frame is later."""
    if not len(dataset):
        raise er.ArgumentError('Cannot sample pairs from an empty dataset.')
    if batch_size < 1:
        raise er.ArgumentError(f'batch_size must be >= 1. Received: {batch_size}.')

    return _sample([rm.ranking_inputs(traj, goal_conditioned) for traj in dataset.trajectories], batch_size, rng)


class PairBatchLoader:
    """Endless stream of pair batches; trajectory inputs are built once."""

    def __init__(self, dataset: demos.ExpertDataset, batch_size: int, rng: np.random.Generator,
                 goal_conditioned: bool = False):
        if not len(dataset):
            raise er.ArgumentError('Cannot sample pairs from an empty dataset.')
        self.inputs = [rm.ranking_inputs(traj, goal_conditioned) for traj in dataset.trajectories]
        self.batch_size = batch_size
        self.rng = rng

    def __iter__(self) -> t.Iterator[PairBatch]:
        while True:
            yield _sample(self.inputs, self.batch_size, self.rng)
