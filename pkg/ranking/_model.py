import dataclasses as dc
import typing as t

import numpy as np

import demos
import errors as er
import metrics.custom as mc
import numkit as nk


@dc.dataclass
class RankingModel:
    net: nk.MlpParams
    anchor_offset: float = 0.0
    goal_conditioned: bool = False

    def __post_init__(self):
        if self.net.output_dim != 1:
            raise er.ShapeError(f'A utility network has one output, got {self.net.output_dim}.')
        if not np.isfinite(self.anchor_offset):
            raise er.NumericError(f'anchor_offset must be finite. Received: {self.anchor_offset}.')

    @property
    def input_dim(self) -> int:
        return self.net.input_dim


def init_ranking_model(input_dim: int, hidden: t.Sequence[int], rng: np.random.Generator,
                       spectral_norm: bool = True, goal_conditioned: bool = False,
                       power_iterations: int = 1) -> RankingModel:
    mask = nk.default_spectral_mask(len(hidden)) if spectral_norm else None
    net = nk.init_mlp([input_dim, *hidden, 1], rng, spectral_norm_mask=mask, power_iterations=power_iterations)

    return RankingModel(net, 0.0, goal_conditioned)


def ranking_input_dim(dataset: demos.ExpertDataset, goal_conditioned: bool) -> int:
    return 4 if goal_conditioned else dataset.state_dim


def ranking_inputs(traj: demos.Trajectory, goal_conditioned: bool) -> np.ndarray:
    """Per-frame network inputs. Goal-conditioned inputs append the final frame's position as the goal."""
    if goal_conditioned:
        positions = traj.positions
        return np.hstack([positions, np.repeat(positions[-1:], len(traj), axis=0)])
    return traj.states


def raw_utility(model: RankingModel, states: np.ndarray) -> np.ndarray:
    outputs, _ = nk.mlp_forward(model.net, states)
    return outputs[:, 0]


def utility(model: RankingModel, states: np.ndarray) -> np.ndarray:
    return raw_utility(model, states) - model.anchor_offset


def progress_likelihood(model: RankingModel, states: np.ndarray) -> np.ndarray:
    return nk.sigmoid(utility(model, states))


def log_progress_likelihood(model: RankingModel, states: np.ndarray) -> np.ndarray:
    return nk.stable_log_sigmoid(utility(model, states))


def anchor(model: RankingModel, initial_states: np.ndarray) -> RankingModel:
    """Shift the utility so its mean over the given start states is zero."""
    offset = float(np.mean(raw_utility(model, initial_states)))
    return dc.replace(model, anchor_offset=offset)


def kendall_tau(model: RankingModel, traj: demos.Trajectory) -> float:
    return mc.kendall_tau(utility(model, ranking_inputs(traj, model.goal_conditioned)))


def mean_kendall_tau(model: RankingModel, dataset: demos.ExpertDataset) -> float:
    if not len(dataset):
        return float('nan')
    return float(np.mean([kendall_tau(model, traj) for traj in dataset.trajectories]))


def input_gradient(model: RankingModel, states: np.ndarray) -> np.ndarray:
    """d utility / d input for each row."""
    outputs, cache = nk.mlp_forward(model.net, states)
    grads = nk.mlp_backward(model.net, cache, np.ones_like(outputs))
    return grads.inputs


def ranking_to_record(model: RankingModel) -> t.Dict[str, t.Any]:
    return {'anchor_offset': float(model.anchor_offset), 'goal_conditioned': bool(model.goal_conditioned),
            'net': nk.mlp_to_record(model.net)}


def ranking_from_record(record: t.Dict[str, t.Any]) -> RankingModel:
    return RankingModel(nk.mlp_from_record(record['net']), float(record['anchor_offset']),
                        bool(record['goal_conditioned']))


def save_ranking(model: RankingModel, path) -> None:
    nk.write_checkpoint(path, 'ranking', ranking_to_record(model))


def load_ranking(path) -> RankingModel:
    return ranking_from_record(nk.read_checkpoint(path, 'ranking'))
