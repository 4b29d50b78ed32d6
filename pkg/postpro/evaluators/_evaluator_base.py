import abc
import pathlib as pl
import typing as t

import ignite.engine as ie

import demos
import helpers as hp
import logger as lg
import options.experiment_options as eo


class BaseEvaluator(abc.ABC):
    def __init__(self, opts: eo.ExperimentOptions):
        self.opts = opts
        self.run_dir: pl.Path = hp.run_dir(self.opts)
        self.spec = demos.build_env_spec(self.opts.env)
        self.logger = lg.ExperimentLogger(self.opts, self.run_dir)
        self.evaluator = self._init_evaluator()
        self.logger.attach_pbar(self.evaluator)

    @abc.abstractmethod
    def _init_evaluator(self) -> ie.Engine:
        raise NotImplementedError

    @abc.abstractmethod
    def evaluate(self) -> t.Dict[str, float]:
        raise NotImplementedError

    def start(self) -> t.Dict[str, float]:
        try:
            metrics = self.evaluate()
            self.logger.log_metrics(metrics)
        finally:
            self.logger.close()

        return metrics
