import dataclasses as dc
import typing as t

import ignite.contrib.handlers.tqdm_logger as tql
import ignite.engine as ie
import ignite.metrics as im
import numpy as np

import agent._buffer as ab
import demos
import discrim._batch as db
import discrim._loss as dl
import discrim._model as dm
import env
import errors as er
import numkit as nk
import options.model_options as mo
import specs.maps as sm


@dc.dataclass
class DiscriminatorTrainState:
    disc: dm.Discriminator
    adam: nk.AdamState


def discriminator_step(state: DiscriminatorTrainState, batch: db.ClassifierBatch) -> float:
    """Refresh the spectral vectors, then take one Adam step on `batch`. Mutates `state`."""
    net = nk.refresh_spectral_norm(state.disc.net)
    loss, grads = dl.discriminator_loss(dc.replace(state.disc, net=net), batch)
    params, state.adam = nk.adam_step(net.parameters(), grads.parameters(), state.adam)
    state.disc = dc.replace(state.disc, net=net.with_parameters(params))

    return loss


def init_discriminator_state(input_dim: int, opts: mo.DiscriminatorOptions,
                             rng: np.random.Generator) -> DiscriminatorTrainState:
    disc = dm.init_discriminator(input_dim, opts.net.hidden, rng, opts.net.spectral_norm,
                                 opts.mode == db.COUNTERFACTUAL, opts.mixup, opts.mode, opts.net.power_iterations)
    return DiscriminatorTrainState(disc, nk.init_adam(disc.net.parameters(), opts.lr))


def update_discriminator(disc: dm.Discriminator, adam: nk.AdamState, expert: t.Union[demos.ExpertDataset,
                                                                                   db.ExpertSampler],
                         replay: t.Optional[ab.ReplayBuffer], opts: mo.DiscriminatorOptions,
                         rng: np.random.Generator) -> t.Tuple[dm.Discriminator, nk.AdamState, float]:
    """`opts.updates_per_round` Adam steps, each on a fresh balanced batch. Returns the mean loss.

    Raises BufferTooSmallError while the replay is empty; the caller defers the update.
    """
    sampler = expert if isinstance(expert, db.ExpertSampler) else db.ExpertSampler(
        expert, opts.mode, opts.goal_states_per_trajectory)
    state = DiscriminatorTrainState(disc, adam)
    losses = []
    for _ in range(opts.updates_per_round):
        batch = db.sample_classifier_batch(sampler, replay, opts.batch_size, rng, disc.mixup_enabled,
                                           opts.mixup_alpha)
        losses.append(discriminator_step(state, batch))

    return state.disc, state.adam, float(np.mean(losses))


class ClassifierBatchLoader:
    def __init__(self, sampler: db.ExpertSampler, batch_size: int, rng: np.random.Generator, mixup: bool,
                 mixup_alpha: float):
        self.sampler = sampler
        self.batch_size = batch_size
        self.rng = rng
        self.mixup = mixup
        self.mixup_alpha = mixup_alpha

    def __iter__(self) -> t.Iterator[db.ClassifierBatch]:
        while True:
            yield db.sample_classifier_batch(self.sampler, None, self.batch_size, self.rng, self.mixup,
                                             self.mixup_alpha)


def create_discriminator_trainer(state: DiscriminatorTrainState,
                                 metrics: t.Optional[t.Dict[str, im.Metric]] = None) -> ie.Engine:
    def _update(_engine, batch: db.ClassifierBatch):
        try:
            return discriminator_step(state, batch)
        except er.NumericError as e:
            raise er.TrainingError(f'discriminator training diverged ({e})', _engine.state.iteration,
                                   _engine.state.metrics) from e

    _engine = ie.Engine(_update)
    if metrics is not None:
        for name, metric in metrics.items():
            metric.attach(_engine, name)

    return _engine


def train_discriminator_offline(dataset: demos.ExpertDataset, opts: mo.DiscriminatorOptions, seed: int,
                                show_progress: bool = False) -> dm.Discriminator:
    """Counterfactual-goal classifier fitted from expert data alone, before any policy learning."""
    if opts.mode != db.COUNTERFACTUAL:
        raise er.ConfigError(f'Offline training needs discriminator.mode counterfactual, got {opts.mode}.')
    rng = np.random.default_rng(seed)
    state = init_discriminator_state(4, opts, rng)
    if opts.offline_steps > 0:
        trainer = create_discriminator_trainer(state, sm.train_loss_metrics())
        if show_progress:
            tql.ProgressBar(persist=True, dynamic_ncols=True).attach(trainer, 'all')
        loader = ClassifierBatchLoader(db.ExpertSampler(dataset, db.COUNTERFACTUAL), opts.batch_size, rng,
                                       opts.mixup, opts.mixup_alpha)
        trainer.run(loader, max_epochs=1, epoch_length=opts.offline_steps)
        env.LOGGER.info(f'Counterfactual discriminator: {opts.offline_steps} steps, '
                        f'running loss {trainer.state.metrics["loss"]:.4f}.')

    return state.disc
