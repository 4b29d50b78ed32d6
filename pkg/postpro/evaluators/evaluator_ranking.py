import typing as t

import ignite.engine as ie
import ignite.metrics as im
import numpy as np

import demos
import errors as er
import ranking
import reward as rw
import specs.maps as sm

ScoreFn = t.Callable[[t.Any], np.ndarray]


def create_sequence_evaluator(score_fn: ScoreFn, metrics: t.Optional[t.Dict[str, im.Metric]] = None) -> ie.Engine:
    """Each batch is one trajectory-like item; the output is its per-state score sequence in time order."""

    def _inference(_engine, item):
        return np.asarray(score_fn(item), dtype=np.float64).reshape(-1)

    _engine = ie.Engine(_inference)
    if metrics is not None:
        for name, metric in metrics.items():
            metric.attach(_engine, name)

    return _engine


def _run(engine: ie.Engine, items: t.List[t.Any]) -> t.Dict[str, float]:
    engine.run(items, max_epochs=1)
    return {k: float(v) for k, v in engine.state.metrics.items()}


def evaluate_ranking(model: ranking.RankingModel, dataset: demos.ExpertDataset, split: str) -> t.Dict[str, float]:
    """Kendall tau of utility against time, averaged over trajectories, plus the monotone fraction."""
    if not len(dataset):
        return {f'{split}_kendall_tau': float('nan'), f'{split}_monotone_fraction': float('nan')}
    engine = create_sequence_evaluator(
        lambda traj: ranking.utility(model, ranking.ranking_inputs(traj, model.goal_conditioned)),
        sm.eval_ranking_metrics())

    return {f'{split}_{k}': v for k, v in _run(engine, list(dataset.trajectories)).items()}


def goal_inputs(traj: demos.Trajectory, goal: np.ndarray) -> np.ndarray:
    return np.hstack([traj.positions, np.tile(np.asarray(goal, dtype=np.float64), (len(traj), 1))])


def counterfactual_goals(dataset: demos.ExpertDataset, rng: np.random.Generator) -> np.ndarray:
    """For every trajectory, the final position of a different, uniformly chosen trajectory."""
    n = len(dataset)
    if n < 2:
        raise er.ArgumentError(f'Counterfactual goals need at least 2 trajectories, got {n}.')
    finals = np.stack([traj.positions[-1] for traj in dataset.trajectories])
    offsets = rng.integers(1, n, size=n)

    return finals[(np.arange(n) + offsets) % n]


def counterfactual_report(model: rw.RewardModel, dataset: demos.ExpertDataset,
                          rng: np.random.Generator) -> t.Dict[str, float]:
    """Reward sequences of held-out trajectories scored under their own goal and under a borrowed one."""
    if not model.goal_conditioned:
        raise er.ConfigError('The counterfactual report needs a goal-conditioned reward model.')
    trajectories = list(dataset.trajectories)
    cf_goals = counterfactual_goals(dataset, rng)
    score = lambda item: rw.reward(model, goal_inputs(*item))

    report = _run(create_sequence_evaluator(score, sm.eval_sequence_metrics('true')),
                  [(traj, traj.positions[-1]) for traj in trajectories])
    report.update(_run(create_sequence_evaluator(score, sm.eval_sequence_metrics('counterfactual')),
                       list(zip(trajectories, cf_goals))))
    report['goal_reward_gap'] = report['true_mean_reward'] - report['counterfactual_mean_reward']

    return report
