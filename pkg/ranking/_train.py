import dataclasses as dc
import typing as t

import ignite.contrib.handlers.tqdm_logger as tql
import ignite.engine as ie
import ignite.metrics as im
import numpy as np

import demos
import env
import errors as er
import numkit as nk
import options.model_options as mo
import ranking._loss as rl
import ranking._model as rm
import ranking._pairs as rp
import specs.maps as sm


@dc.dataclass
class RankingTrainState:
    model: rm.RankingModel
    adam: nk.AdamState


def create_ranking_trainer(state: RankingTrainState, opts: mo.RankingOptions, rng: np.random.Generator,
                           metrics: t.Optional[t.Dict[str, im.Metric]] = None) -> ie.Engine:
    """One refresh of the spectral vectors, one ranking loss evaluation and one Adam step per iteration."""

    def _update(_engine, batch: rp.PairBatch):
        net = nk.refresh_spectral_norm(state.model.net)
        try:
            loss, grads = rl.ranking_loss(dc.replace(state.model, net=net), batch, opts.mixup, rng, opts.mixup_alpha)
            params, state.adam = nk.adam_step(net.parameters(), grads.parameters(), state.adam)
        except er.NumericError as e:
            raise er.TrainingError(f'ranking training diverged ({e})', _engine.state.iteration,
                                   _engine.state.metrics) from e
        state.model = dc.replace(state.model, net=net.with_parameters(params))
        return loss

    _engine = ie.Engine(_update)
    if metrics is not None:
        for name, metric in metrics.items():
            metric.attach(_engine, name)

    return _engine


def initial_inputs(dataset: demos.ExpertDataset, goal_conditioned: bool) -> np.ndarray:
    return np.stack([rm.ranking_inputs(traj, goal_conditioned)[0] for traj in dataset.trajectories])


def train_ranking(dataset: demos.ExpertDataset, opts: mo.RankingOptions, seed: int,
                  show_progress: bool = False) -> rm.RankingModel:
    """Offline utility training on expert pairs, followed by anchoring on the dataset's start states."""
    if not len(dataset):
        raise er.ArgumentError('Cannot train a ranking model on an empty dataset.')
    rng = np.random.default_rng(seed)
    model = rm.init_ranking_model(rm.ranking_input_dim(dataset, opts.goal_conditioned), opts.net.hidden, rng,
                                  opts.net.spectral_norm, opts.goal_conditioned, opts.net.power_iterations)
    state = RankingTrainState(model, nk.init_adam(model.net.parameters(), opts.lr))

    if opts.steps > 0:
        trainer = create_ranking_trainer(state, opts, rng, sm.train_loss_metrics())
        if show_progress:
            tql.ProgressBar(persist=True, dynamic_ncols=True).attach(trainer, 'all')
        trainer.run(rp.PairBatchLoader(dataset, opts.batch_size, rng, opts.goal_conditioned),
                    max_epochs=1, epoch_length=opts.steps)
        env.LOGGER.info(f'Ranking: {opts.steps} steps, running loss {trainer.state.metrics["loss"]:.4f}.')

    return rm.anchor(state.model, initial_inputs(dataset, opts.goal_conditioned))