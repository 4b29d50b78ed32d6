import dataclasses as dc
import json
import pathlib as pl
import typing as t

import numpy as np
import sklearn.model_selection as skm

import constants as ct
import demos._env as en
import demos._expert as ex
import env
import errors as er
import helpers as hp


@dc.dataclass
class Trajectory:
    states: np.ndarray
    env_kind: str
    meta: t.Dict[str, t.Any] = dc.field(default_factory=dict)

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=np.float64)
        if self.states.ndim != 2 or self.states.shape[0] < 2:
            raise er.ShapeError(f'A trajectory needs at least 2 states, got shape {self.states.shape}.')

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def positions(self) -> np.ndarray:
        return self.states[:, :2]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


@dc.dataclass
class ExpertDataset:
    trajectories: t.List[Trajectory]
    env_spec: t.Optional[en.EnvSpec] = None
    split: str = 'train'

    def __post_init__(self):
        kinds = {traj.env_kind for traj in self.trajectories}
        if len(kinds) > 1:
            raise er.DatasetFormatError(f'Trajectories mix environment kinds: {sorted(kinds)}.')
        if self.env_spec is not None and kinds and kinds != {self.env_spec.kind}:
            raise er.DatasetFormatError(f'Trajectories are {kinds.pop()}, spec is {self.env_spec.kind}.')

    def __len__(self) -> int:
        return len(self.trajectories)

    @property
    def state_dim(self) -> int:
        return self.trajectories[0].states.shape[1]

    @property
    def goal_conditioned(self) -> bool:
        return self.state_dim == 4

    def initial_states(self) -> np.ndarray:
        return np.stack([traj.states[0] for traj in self.trajectories])

    def all_states(self) -> np.ndarray:
        return np.concatenate([traj.states for traj in self.trajectories])


########################################################################################################################
# GENERATION
########################################################################################################################
def rollout_expert(spec: en.EnvSpec, rng: np.random.Generator) -> t.Tuple[np.ndarray, bool]:
    """One closed-loop expert episode. Runs past the goal radius until the final waypoint is hit."""
    state = en.env_reset(spec, rng)
    observations = [en.observe(spec, state)]
    while not ex.expert_finished(spec, state) and state.steps_elapsed < spec.horizon:
        state, _, _ = en.env_step(spec, state, ex.scripted_expert_action(spec, state, rng))
        observations.append(en.observe(spec, state))

    return np.stack(observations), ex.expert_finished(spec, state) and en.goal_reached(spec, state)


def generate_demos(spec: en.EnvSpec, n_trajectories: int, seed: int) -> ExpertDataset:
    if n_trajectories < 1:
        raise er.ArgumentError(f'n_trajectories must be >= 1. Received: {n_trajectories}.')
    rng = np.random.default_rng(seed)
    trajectories, attempts = [], 0
    while len(trajectories) < n_trajectories:
        if attempts >= 2 * n_trajectories:
            raise er.ConfigError(f'Expert failed {attempts - len(trajectories)} of {attempts} episodes in '
                                 f'{spec.kind}; failure rate exceeds 50%.')
        attempts += 1
        states, success = rollout_expert(spec, rng)
        if success and len(states) >= 2:
            trajectories.append(Trajectory(states, spec.kind, {'seed': seed, 'index': len(trajectories),
                                                               'subsampled': False, 'keep_every': 1}))
    failures = attempts - n_trajectories
    if failures:
        env.LOGGER.info(f'Resampled {failures} failed expert episodes out of {attempts}.')

    return ExpertDataset(trajectories, spec, 'train')


def subsample_trajectory(traj: Trajectory, keep_every: int) -> Trajectory:
    if keep_every < 1:
        raise er.ArgumentError(f'keep_every must be >= 1. Received: {keep_every}.')
    if keep_every == 1:
        return Trajectory(traj.states.copy(), traj.env_kind, dict(traj.meta))
    indices = list(range(0, len(traj), keep_every))
    if indices[-1] != len(traj) - 1:
        indices.append(len(traj) - 1)
    meta = dict(traj.meta, subsampled=True, keep_every=keep_every)

    return Trajectory(traj.states[indices], traj.env_kind, meta)


def subsample_dataset(dataset: ExpertDataset, keep_every: int) -> ExpertDataset:
    return dc.replace(dataset, trajectories=[subsample_trajectory(traj, keep_every) for traj in dataset.trajectories])


def split_dataset(dataset: ExpertDataset, eval_fraction: float = ct.EVAL_FRACTION,
                  seed: int = ct.RANDOM_STATE) -> t.Tuple[ExpertDataset, ExpertDataset]:
    """Split by trajectory so no demonstration contributes states to both sides."""
    if len(dataset) < 2:
        raise er.ArgumentError(f'Need at least 2 trajectories to split, got {len(dataset)}.')
    indices = np.arange(len(dataset))
    train_idx, eval_idx = skm.train_test_split(indices, test_size=eval_fraction, random_state=seed, shuffle=True)
    train = ExpertDataset([dataset.trajectories[i] for i in sorted(train_idx)], dataset.env_spec, 'train')
    held_out = ExpertDataset([dataset.trajectories[i] for i in sorted(eval_idx)], dataset.env_spec, 'eval')

    return train, held_out


def validate_trajectory(spec: en.EnvSpec, traj: Trajectory) -> None:
    positions = traj.positions
    if np.any(positions < 0.0) or np.any(positions > 1.0):
        raise er.DatasetFormatError('Trajectory leaves the unit square.')
    if not traj.meta.get('subsampled', False):
        steps = np.linalg.norm(np.diff(positions, axis=0), axis=1)
        if np.any(steps > spec.max_step_norm + 1e-9):
            raise er.DatasetFormatError(f'Step of norm {steps.max():.6f} exceeds {spec.max_step_norm}.')
        if en.count_wall_crossings(spec, positions):
            raise er.DatasetFormatError('Trajectory crosses a wall.')


def summarise_dataset(spec: en.EnvSpec, dataset: ExpertDataset) -> t.Dict[str, float]:
    lengths = [len(traj) for traj in dataset.trajectories]
    successes = []
    for traj in dataset.trajectories:
        goal = traj.final_state[2:4] if spec.goal_conditioned else np.asarray(spec.goal)
        successes.append(float(np.linalg.norm(traj.final_state[:2] - goal) <= spec.goal_radius))

    return {
        'trajectories': len(dataset),
        'mean_length': float(np.mean(lengths)) if lengths else 0.0,
        'success_rate': float(np.mean(successes)) if successes else 0.0,
    }


########################################################################################################################
# IO
########################################################################################################################
def write_dataset(dataset: ExpertDataset, path: t.Union[pl.Path, str]) -> pl.Path:
    """One JSON object per trajectory. Each line carries the generating env spec when the dataset has one."""
    spec = en.spec_to_record(dataset.env_spec) if dataset.env_spec is not None else None
    lines = []
    for traj in dataset.trajectories:
        record = {'env': traj.env_kind, 'states': traj.states.tolist(), 'meta': traj.meta}
        if spec is not None:
            record['env_spec'] = spec
        lines.append(json.dumps(record))

    return hp.atomic_write_text(path, ''.join(line + '\n' for line in lines))


def read_dataset(path: t.Union[pl.Path, str], spec: t.Optional[en.EnvSpec] = None,
                 split: str = 'train') -> ExpertDataset:
    """Parse a dataset file. An explicit `spec` wins over the stored one; files without one get kind defaults."""
    trajectories, kind = [], spec.kind if spec is not None else None
    stored, stored_record = None, None
    with open(str(path), 'r', encoding='utf-8') as file:
        for line_no, line in enumerate(file, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                states = np.asarray(record['states'], dtype=np.float64)
                tag, meta = record['env'], record.get('meta', {})
            except (ValueError, KeyError, TypeError) as e:
                raise er.DatasetFormatError(f'malformed record ({e})', line_no) from e
            if not np.all(np.isfinite(states)):
                raise er.DatasetFormatError('non-finite coordinate', line_no)
            if kind is None:
                kind = tag
            elif tag != kind:
                raise er.DatasetFormatError(f'env tag {tag} differs from {kind}', line_no)
            if 'env_spec' in record:
                if stored_record is None:
                    try:
                        stored = en.spec_from_record(record['env_spec'])
                    except (er.ConfigError, TypeError) as e:
                        raise er.DatasetFormatError(f'bad env spec ({e})', line_no) from e
                    stored_record = record['env_spec']
                elif record['env_spec'] != stored_record:
                    raise er.DatasetFormatError('env spec differs from earlier lines', line_no)
            try:
                trajectories.append(Trajectory(states, tag, meta))
            except er.ShapeError as e:
                raise er.DatasetFormatError(str(e), line_no) from e
    if spec is None:
        spec = stored if stored is not None else (en.default_spec(kind) if kind is not None else None)

    return ExpertDataset(trajectories, spec, split)
