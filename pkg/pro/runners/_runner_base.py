import abc
import pathlib as pth
import typing as typ

import ignite.engine as ie
import numpy as np

import constants as ct
import demos
import errors as er
import helpers as ghp
import logger as pl
import options.experiment_options as eo


class BaseRunner(abc.ABC):
    def __init__(self, opts: eo.ExperimentOptions):
        self.opts = opts
        self.run_dir = self._init_run()
        self.spec = demos.build_env_spec(self.opts.env)
        self.rng = np.random.default_rng(self.opts.seed)

        self.logger = pl.ExperimentLogger(self.opts, self.run_dir)
        self.logger.init_log()
        self.logger.persist_config()

        self.dataset = self._init_dataset()
        self.train_set, self.eval_set = self._init_split()

    def _init_run(self) -> pth.Path:
        run_dir = ghp.run_dir(self.opts)
        run_dir.mkdir(parents=True, exist_ok=True)

        return run_dir

    def _init_dataset(self) -> demos.ExpertDataset:
        path = ghp.demos_path(self.opts)
        if not path.exists():
            raise er.ConfigError(f'Expert demonstrations not found at {path}. Run `gen-demos` first.')
        dataset = demos.read_dataset(path, self.spec)
        self.logger.log(f'Loaded {len(dataset)} expert trajectories from {path}.')

        return dataset

    def _init_split(self) -> typ.Tuple[demos.ExpertDataset, demos.ExpertDataset]:
        return demos.split_dataset(self.dataset, ct.EVAL_FRACTION, self.opts.seed)

    def _end_run(self, _: typ.Optional[ie.Engine] = None):
        self.logger.close()

    def _graceful_shutdown(self, _engine: ie.Engine, exception: Exception) -> None:
        self._end_run(_engine)

        raise exception

    @abc.abstractmethod
    def run(self) -> typ.Dict[str, typ.Any]:
        raise NotImplementedError
