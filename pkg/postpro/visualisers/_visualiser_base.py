import abc
import pathlib as pl
import typing as t

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402

import demos  # noqa: E402
import helpers as hp  # noqa: E402
import options.experiment_options as eo  # noqa: E402


class BaseVisualiser(abc.ABC):
    def __init__(self, opts: eo.ExperimentOptions):
        self.opts = opts
        self.run_dir: pl.Path = hp.run_dir(self.opts)
        self.run_viz_dir = self.run_dir / 'figures'
        self.run_viz_dir.mkdir(parents=True, exist_ok=True)
        self.spec = demos.build_env_spec(self.opts.env)

    def expert_dataset(self) -> t.Optional[demos.ExpertDataset]:
        path = hp.demos_path(self.opts)
        return demos.read_dataset(path, self.spec) if path.exists() else None

    def draw_walls(self, ax: plt.Axes, scale: float = 1.0) -> None:
        for (x1, y1), (x2, y2) in self.spec.walls:
            ax.plot([x1 * scale, x2 * scale], [y1 * scale, y2 * scale], color='black', linewidth=3)

    def save_fig(self, fig: plt.Figure, name: str, save: bool = True) -> t.Optional[pl.Path]:
        path = None
        if save:
            path = self.run_viz_dir / name
            fig.savefig(str(path), bbox_inches='tight', dpi=150)
        plt.close(fig)

        return path
