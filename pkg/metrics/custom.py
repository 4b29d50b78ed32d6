import typing as t

import ignite.exceptions as ie
import ignite.metrics as im
import numpy as np

import constants as ct
import errors as er


def kendall_tau(values: t.Sequence[float]) -> float:
    """Rank correlation between `values` and their time index over all pairs i < j.

    Ties count as half concordant and half discordant, so a constant sequence scores 0.
    """
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    n = values.shape[0]
    if n < 2:
        raise er.ArgumentError(f'Kendall tau needs at least 2 values, got {n}.')
    upper = np.triu_indices(n, k=1)
    signs = np.sign(values[None, :] - values[:, None])[upper]

    return float(signs.sum() / signs.size)


def increasing_fraction(values: t.Sequence[float]) -> float:
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.shape[0] < 2:
        raise er.ArgumentError('Need at least 2 values.')
    return float(np.mean(np.diff(values) > 0.0))


def is_monotone(values: t.Sequence[float], threshold: float = ct.MONOTONE_TAU) -> bool:
    return kendall_tau(values) >= threshold


class MeanKendallTau(im.Metric):
    """Average per-trajectory Kendall tau. Each engine output is one sequence of scores in time order."""

    def __init__(self, output_transform=lambda x: x):
        self.total = 0.0
        self.num_sequences = 0
        super(MeanKendallTau, self).__init__(output_transform)

    def reset(self):
        self.total = 0.0
        self.num_sequences = 0

    def update(self, output):
        self.total += kendall_tau(output)
        self.num_sequences += 1

    def compute(self) -> float:
        if self.num_sequences == 0:
            raise ie.NotComputableError('MeanKendallTau must have at least one sequence before it can be computed')
        return self.total / self.num_sequences


class MonotoneFraction(im.Metric):
    """Fraction of sequences whose Kendall tau against time reaches the monotone threshold."""

    def __init__(self, threshold: float = ct.MONOTONE_TAU, output_transform=lambda x: x):
        self.threshold = threshold
        self.monotone = 0
        self.num_sequences = 0
        super(MonotoneFraction, self).__init__(output_transform)

    def reset(self):
        self.monotone = 0
        self.num_sequences = 0

    def update(self, output):
        self.monotone += int(is_monotone(output, self.threshold))
        self.num_sequences += 1

    def compute(self) -> float:
        if self.num_sequences == 0:
            raise ie.NotComputableError('MonotoneFraction must have at least one sequence before it can be computed')
        return self.monotone / self.num_sequences
