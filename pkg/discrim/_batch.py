import dataclasses as dc
import typing as t

import numpy as np

import agent._buffer as ab
import demos
import errors as er
import numkit as nk

EXPERT = 'expert'
GOAL_STATES = 'goal_states'
COUNTERFACTUAL = 'counterfactual'
MODES = (EXPERT, GOAL_STATES, COUNTERFACTUAL)


@dc.dataclass
class ClassifierBatch:
    states: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.states.shape[0] != self.labels.shape[0]:
            raise er.ShapeError(f'{self.states.shape[0]} rows for {self.labels.shape[0]} labels.')

    def __len__(self) -> int:
        return self.labels.shape[0]


def goal_states(dataset: demos.ExpertDataset, kappa: int = 1) -> np.ndarray:
    """The last `kappa` states of every trajectory."""
    return np.concatenate([traj.states[-kappa:] for traj in dataset.trajectories])


class ExpertSampler:
    """Caches the expert side of classifier batches for one dataset and mode."""

    def __init__(self, dataset: demos.ExpertDataset, mode: str = EXPERT, kappa: int = 1):
        if mode not in MODES:
            raise er.ConfigError(f'Unknown discriminator mode: {mode}.')
        if not len(dataset):
            raise er.ArgumentError('The expert dataset is empty.')
        self.mode = mode
        if mode == EXPERT:
            self.positives = dataset.all_states()
        elif mode == GOAL_STATES:
            self.positives = goal_states(dataset, kappa)
        else:
            if len(dataset) < 2:
                raise er.ArgumentError('Counterfactual goals need at least 2 trajectories.')
            self.frames = [traj.positions for traj in dataset.trajectories]
            self.goals = np.stack([traj.positions[-1] for traj in dataset.trajectories])

    def sample_positive(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.positives[rng.integers(0, len(self.positives), size=n)]

    def sample_counterfactual(self, n: int, rng: np.random.Generator) -> t.Tuple[np.ndarray, np.ndarray]:
        """Frames paired with their own final frame (positive) and with another trajectory's (negative)."""
        num = len(self.frames)
        own = rng.integers(0, num, size=2 * n)
        other = rng.integers(0, num - 1, size=n)
        other = other + (other >= own[n:])
        frames = np.stack([self.frames[k][rng.integers(0, len(self.frames[k]))] for k in own])
        positives = np.hstack([frames[:n], self.goals[own[:n]]])
        negatives = np.hstack([frames[n:], self.goals[other]])

        return positives, negatives


def sample_classifier_batch(sampler: ExpertSampler, replay: t.Optional[ab.ReplayBuffer], batch_size: int,
                            rng: np.random.Generator, mixup: bool = False,
                            mixup_alpha: float = 1.0) -> ClassifierBatch:
    if batch_size < 2 or batch_size % 2:
        raise er.ArgumentError(f'batch_size must be even and >= 2. Received: {batch_size}.')
    half = batch_size // 2
    if sampler.mode == COUNTERFACTUAL:
        positives, negatives = sampler.sample_counterfactual(half, rng)
    else:
        if replay is None or len(replay) == 0:
            raise er.BufferTooSmallError('No policy states yet; defer discriminator updates until the first rollout.')
        positives, negatives = sampler.sample_positive(half, rng), replay.sample_states(half, rng)
    states = np.vstack([positives, negatives])
    labels = np.concatenate([np.ones(half), np.zeros(half)])
    if mixup:
        (states,), labels, _ = nk.mixup_batch([states], labels, rng, mixup_alpha)

    return ClassifierBatch(states, labels)


def build_classifier_batch(expert: demos.ExpertDataset, replay: t.Optional[ab.ReplayBuffer], batch_size: int,
                           mode: str, rng: np.random.Generator, mixup: bool = False, mixup_alpha: float = 1.0,
                           kappa: int = 1) -> ClassifierBatch:
    """Balanced batch: expert rows labelled 1 first, policy or counterfactual rows labelled 0 second."""
    return sample_classifier_batch(ExpertSampler(expert, mode, kappa), replay, batch_size, rng, mixup, mixup_alpha)
