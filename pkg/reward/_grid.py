import pathlib as pl
import typing as t

import numpy as np
import pandas as pd
import sklearn.neighbors as skn

import constants as ct
import errors as er
import helpers as hp
import reward._model as rwm


def lattice(resolution: int) -> np.ndarray:
    """Uniform lattice over the unit square, x varying fastest."""
    if resolution < 2:
        raise er.ArgumentError(f'resolution must be >= 2. Received: {resolution}.')
    axis = np.linspace(0.0, 1.0, resolution)
    xs, ys = np.meshgrid(axis, axis)

    return np.column_stack([xs.reshape(-1), ys.reshape(-1)])


def reward_grid(model: rwm.RewardModel, resolution: int,
                goal: t.Optional[t.Sequence[float]] = None) -> pd.DataFrame:
    points = lattice(resolution)
    goal = goal if goal is not None else model.goal
    if model.goal_conditioned and goal is None:
        raise er.ConfigError('A goal-conditioned reward grid needs a fixed goal.')
    if goal is not None:
        inputs = np.hstack([points, np.tile(np.asarray(goal, dtype=np.float64), (len(points), 1))])
    else:
        inputs = points
    components = rwm.reward_components(model, inputs)
    df = pd.DataFrame({'x': points[:, 0], 'y': points[:, 1]})
    for column in ct.GRID_COLUMNS[2:]:
        df[column] = components[column]

    return df[ct.GRID_COLUMNS]


def write_grid(df: pd.DataFrame, path: t.Union[pl.Path, str]) -> pl.Path:
    return hp.write_frame(path, df[ct.GRID_COLUMNS])


def read_grid(path: t.Union[pl.Path, str]) -> pd.DataFrame:
    return hp.read_frame(path)


def spurious_ranking_report(model: rwm.RewardModel, grid: pd.DataFrame, expert_states: np.ndarray,
                            min_distance: float = 0.2, p_threshold: float = 0.8) -> t.Dict[str, t.Any]:
    """Count grid cells far from every expert position whose progress probability is still high.

    Such a cell is suppressed when its combined reward stays below the mean reward on the expert states.
    """
    if min_distance <= 0 or not 0.0 < p_threshold < 1.0:
        raise er.ArgumentError(f'Need min_distance > 0 and p_threshold in (0, 1). '
                               f'Received: {min_distance}, {p_threshold}.')
    expert_states = np.asarray(expert_states, dtype=np.float64)
    if expert_states.ndim != 2 or len(expert_states) == 0:
        raise er.ArgumentError(f'expert_states must be a non-empty matrix. Received shape {expert_states.shape}.')
    cells = grid[['x', 'y']].to_numpy()
    distances, _ = skn.NearestNeighbors(n_neighbors=1).fit(expert_states[:, :2]).kneighbors(cells)
    expert_mean = float(np.mean(rwm.reward(model, expert_states)))

    far = distances[:, 0] >= min_distance
    spurious = far & (np.nan_to_num(grid['p_rf'].to_numpy(), nan=0.0) >= p_threshold)
    suppressed = spurious & (grid['reward'].to_numpy() < expert_mean)

    return {
        'far_cells': int(far.sum()),
        'spurious_cells': int(spurious.sum()),
        'suppressed_spurious_cells': int(suppressed.sum()),
        'expert_mean_reward': expert_mean,
        'spurious_ranking_property': bool(suppressed.any()),
    }
