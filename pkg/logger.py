import dataclasses as dc
import pathlib as pl
import typing as t

import ignite.contrib.handlers.tqdm_logger as tql
import ignite.engine as ie
import pandas as pd
import tqdm

import constants as ct
import helpers as hp
import options.experiment_options as eo


class ExperimentLogger(object):
    """Console output and on-disk artefacts of a single run directory."""

    class _Decorator:
        @staticmethod
        def progress_only(func):
            def inner(self, *args, **kwargs):
                if not self.opts.show_progress:
                    return

                return func(self, *args, **kwargs)

            return inner

    def __init__(self, opts: eo.ExperimentOptions, run_dir: t.Union[pl.Path, str]):
        self.opts = opts
        self.run_dir = pl.Path(run_dir)
        self.pbars: t.List[tql.ProgressBar] = []
        self.metrics: t.Dict[str, float] = {}

    @_Decorator.progress_only
    def attach_pbar(self, engine: ie.Engine, metric_names: t.Union[str, t.List[str]] = 'all'):
        pbar = tql.ProgressBar(persist=True, dynamic_ncols=True)
        pbar.attach(engine, metric_names)
        self.pbars.append(pbar)

    def init_log(self):
        self.print_options()
        self.log(f'Run directory: {self.run_dir}')

    def print_options(self):
        self.log(f'{"Field":<50s}{"Value":>50s}')
        self.log(f'{"=" * 49:<50s}{"=" * 49:>50s}')
        for field, value in hp.flatten_dict(dc.asdict(self.opts)).items():
            self.log(f'{field:<50s}{value:>50s}')

    def log_metrics(self, metrics: t.Dict[str, float], prefix: str = ''):
        self.log(' || '.join(f'{prefix}{key}={value:1.4f}' for key, value in metrics.items()))

    def log(self, msg: str):
        tqdm.tqdm.write(msg)

    def persist_config(self) -> pl.Path:
        opts = hp.config_to_dict(self.opts)
        hp.path_to_string(opts)
        return hp.write_json(self.run_dir / ct.CONFIG_SNAPSHOT, opts)

    def persist_metrics(self, metrics: t.Dict[str, t.Any], file_name: str) -> pl.Path:
        self.metrics.update({k: v for k, v in metrics.items() if isinstance(v, (int, float))})
        return hp.write_json(self.run_dir / file_name, metrics)

    def persist_curve(self, rows: t.List[t.Dict[str, float]]) -> pl.Path:
        return hp.write_frame(self.run_dir / ct.CURVE_FILE, pd.DataFrame(rows, columns=ct.CURVE_COLUMNS))

    def persist_grid(self, grid: pd.DataFrame, file_name: str) -> pl.Path:
        return hp.write_frame(self.run_dir / file_name, grid)

    def close(self):
        for pbar in self.pbars:
            pbar.close()
        self.pbars = []
