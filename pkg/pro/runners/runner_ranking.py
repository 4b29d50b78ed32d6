import typing as typ

import constants as ct
import demos
import discrim
import pro.checkpoints as pc
import pro.runners._runner_base as _base
import postpro.evaluators.evaluator_ranking as erk
import ranking


class RankingRunner(_base.BaseRunner):
    """Offline stage: utility network from expert pairs, plus the counterfactual classifier when configured."""

    def _init_split(self) -> typ.Tuple[demos.ExpertDataset, demos.ExpertDataset]:
        train, held_out = super(RankingRunner, self)._init_split()
        if self.opts.ranking.keep_every > 1:
            train = demos.subsample_dataset(train, self.opts.ranking.keep_every)

        return train, held_out

    def run(self) -> typ.Dict[str, typ.Any]:
        try:
            model = ranking.train_ranking(self.train_set, self.opts.ranking, self.opts.seed, self.opts.show_progress)
            ranking.save_ranking(model, self.run_dir / ct.RANKING_CKPT)
            metrics = {
                'steps': self.opts.ranking.steps,
                'keep_every': self.opts.ranking.keep_every,
                'train_trajectories': len(self.train_set),
                'eval_trajectories': len(self.eval_set),
            }
            metrics.update(erk.evaluate_ranking(model, self.train_set, 'train'))
            metrics.update(erk.evaluate_ranking(model, self.eval_set, 'eval'))

            if self.opts.discriminator.mode == discrim.COUNTERFACTUAL:
                disc = discrim.train_discriminator_offline(self.train_set, self.opts.discriminator, self.opts.seed,
                                                           self.opts.show_progress)
                discrim.save_discriminator(disc, self.run_dir / ct.DISC_CKPT)
                reward_model = pc.build_reward_model(self.opts, model, disc)
                metrics.update(erk.counterfactual_report(reward_model, self.eval_set, self.rng))

            self.logger.log_metrics({k: v for k, v in metrics.items() if isinstance(v, float)})
            self.logger.persist_metrics(metrics, ct.RANKING_METRICS)
        finally:
            self._end_run()

        return metrics
