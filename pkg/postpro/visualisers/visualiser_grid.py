import typing as t

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns

import constants as ct
import errors as er
import helpers as hp
import postpro.visualisers._visualiser_base as _base

GRID_FILES = {'pre': ct.GRID_PRE_FILE, 'post': ct.GRID_POST_FILE}
COMPONENTS = ('utility', 'p_rf', 'd', 'ratio', 'reward')


def grid_matrix(grid: pd.DataFrame, column: str) -> np.ndarray:
    """Reshape a row-major grid column into a (y, x) matrix with y increasing downwards."""
    resolution = int(round(np.sqrt(len(grid))))
    if resolution * resolution != len(grid):
        raise er.ArgumentError(f'Grid of {len(grid)} rows is not square.')
    return grid[column].to_numpy().reshape(resolution, resolution)


class GridVisualiser(_base.BaseVisualiser):
    """Reward landscapes over the unit square, before and after policy learning, with expert paths on top."""

    def load_grid(self, snapshot: str) -> pd.DataFrame:
        if snapshot not in GRID_FILES:
            raise er.ArgumentError(f'snapshot must be one of {tuple(GRID_FILES)}. Received: {snapshot}.')
        path = self.run_dir / GRID_FILES[snapshot]
        if not path.exists():
            raise er.ConfigError(f'Missing {path.name} in {self.run_dir}. Run `reward-grid` or `train` first.')
        return hp.read_frame(path)

    def _heatmap(self, ax: plt.Axes, grid: pd.DataFrame, column: str, overlay: bool) -> None:
        values = grid_matrix(grid, column)
        resolution = values.shape[0]
        sns.heatmap(values, ax=ax, cmap='viridis', cbar=True, xticklabels=False, yticklabels=False)
        ax.invert_yaxis()
        self.draw_walls(ax, resolution - 1)
        if overlay:
            dataset = self.expert_dataset()
            for traj in dataset.trajectories if dataset is not None else []:
                ax.plot(traj.positions[:, 0] * (resolution - 1), traj.positions[:, 1] * (resolution - 1),
                        color='white', linewidth=0.8, alpha=0.7)
        ax.set_title(column)

    def plot_components(self, snapshot: str = 'post', overlay: bool = True, save: bool = True) -> plt.Figure:
        grid = self.load_grid(snapshot)
        columns = [c for c in COMPONENTS if not grid[c].isna().all()]
        fig, axes = plt.subplots(1, len(columns), figsize=(4 * len(columns), 3.5), squeeze=False)
        for ax, column in zip(axes[0], columns):
            self._heatmap(ax, grid, column, overlay)
        fig.suptitle(f'{self.opts.reward.kind} ({snapshot})')
        self.save_fig(fig, f'grid_{snapshot}.png', save)

        return fig

    def plot_before_after(self, column: str = 'reward', overlay: bool = True, save: bool = True) -> plt.Figure:
        fig, axes = plt.subplots(1, 2, figsize=(8, 3.5))
        for ax, snapshot in zip(axes, ('pre', 'post')):
            self._heatmap(ax, self.load_grid(snapshot), column, overlay)
            ax.set_title(f'{column} ({snapshot})')
        self.save_fig(fig, f'grid_{column}_before_after.png', save)

        return fig

    def plot_curve(self, save: bool = True) -> t.Optional[plt.Figure]:
        path = self.run_dir / ct.CURVE_FILE
        if not path.exists():
            return None
        curve = hp.read_frame(path)
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
        sns.lineplot(data=curve, x='env_step', y='eval_success_rate', ax=axes[0], marker='o')
        sns.lineplot(data=curve, x='env_step', y='mean_learned_reward', ax=axes[1], marker='o')
        axes[0].set_ylim(-0.05, 1.05)
        self.save_fig(fig, 'curve.png', save)

        return fig
