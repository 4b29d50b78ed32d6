import dataclasses as dc
import typing as t

import numpy as np

import errors as er
import options.env_options as eno

Point = t.Tuple[float, float]
Segment = t.Tuple[Point, Point]

TWO_WALL_MAZE = 'two_wall_maze'
POINT_REACH = 'point_reach'
MULTI_GOAL_REACH = 'multi_goal_reach'
ENV_KINDS = (TWO_WALL_MAZE, POINT_REACH, MULTI_GOAL_REACH)

WAYPOINT_TOLERANCE = 0.02


@dc.dataclass(frozen=True)
class EnvSpec:
    kind: str
    max_step_norm: float = 0.05
    horizon: int = 200
    goal_radius: float = 0.05
    walls: t.Tuple[Segment, ...] = ()
    start_low: Point = (0.0, 0.0)
    start_high: Point = (0.0, 0.0)
    goal: t.Optional[Point] = None
    goal_set: t.Tuple[Point, ...] = ()
    waypoints: t.Tuple[Point, ...] = ()
    expert_noise_std: float = 0.005

    def __post_init__(self):
        if self.kind not in ENV_KINDS:
            raise er.ConfigError(f'Unknown environment kind: {self.kind}.')
        if self.horizon < 1:
            raise er.ConfigError(f'horizon must be >= 1. Received: {self.horizon}.')
        if self.max_step_norm <= 0:
            raise er.ConfigError(f'max_step_norm must be positive. Received: {self.max_step_norm}.')
        for (x1, y1), (x2, y2) in self.walls:
            if x1 != x2 and y1 != y2:
                raise er.ConfigError(f'Wall {((x1, y1), (x2, y2))} is not axis-aligned.')
            if not all(0.0 <= c <= 1.0 for c in (x1, y1, x2, y2)):
                raise er.ConfigError(f'Wall {((x1, y1), (x2, y2))} leaves the unit square.')
        if self.kind == MULTI_GOAL_REACH and not self.goal_set:
            raise er.ConfigError('multi_goal_reach needs a non-empty goal_set.')
        if self.kind != MULTI_GOAL_REACH and self.goal is None:
            raise er.ConfigError(f'{self.kind} needs a goal.')

    @property
    def goal_conditioned(self) -> bool:
        return self.kind == MULTI_GOAL_REACH

    @property
    def state_dim(self) -> int:
        return 4 if self.goal_conditioned else 2

    @property
    def action_dim(self) -> int:
        return 2


@dc.dataclass(frozen=True)
class EnvState:
    position: np.ndarray
    steps_elapsed: int = 0
    goal: t.Optional[np.ndarray] = None
    waypoint_index: int = 0


def two_wall_maze(**overrides) -> EnvSpec:
    """Top-left start, bottom-right goal, wall A open at the bottom and wall B open at the top."""
    opts = dict(
        kind=TWO_WALL_MAZE,
        walls=(((1.0 / 3.0, 0.2), (1.0 / 3.0, 1.0)),
               ((2.0 / 3.0, 0.0), (2.0 / 3.0, 0.8))),
        start_low=(0.0, 0.9),
        start_high=(0.1, 1.0),
        goal=(0.95, 0.05),
        waypoints=((0.10, 0.10), (0.40, 0.10), (0.40, 0.90), (0.72, 0.90), (0.95, 0.05)),
    )
    opts.update(overrides)
    return EnvSpec(**opts)


def point_reach(**overrides) -> EnvSpec:
    opts = dict(kind=POINT_REACH, start_low=(0.1, 0.1), start_high=(0.1, 0.1), goal=(0.9, 0.9))
    opts.update(overrides)
    return EnvSpec(**opts)


def multi_goal_reach(**overrides) -> EnvSpec:
    opts = dict(kind=MULTI_GOAL_REACH, start_low=(0.45, 0.45), start_high=(0.55, 0.55),
                goal_set=((0.15, 0.15), (0.15, 0.85), (0.85, 0.15), (0.85, 0.85)))
    opts.update(overrides)
    return EnvSpec(**opts)


def default_spec(kind: str, **overrides) -> EnvSpec:
    builders = {TWO_WALL_MAZE: two_wall_maze, POINT_REACH: point_reach, MULTI_GOAL_REACH: multi_goal_reach}
    if kind not in builders:
        raise er.ConfigError(f'Unknown environment kind: {kind}.')
    return builders[kind](**overrides)


def build_env_spec(opts: eno.EnvOptions) -> EnvSpec:
    return default_spec(opts.kind, max_step_norm=opts.max_step_norm, horizon=opts.horizon,
                        goal_radius=opts.goal_radius, expert_noise_std=opts.expert_noise_std)


def _as_tuples(value: t.Any) -> t.Any:
    if isinstance(value, (list, tuple)):
        return tuple(_as_tuples(v) for v in value)
    return value


def spec_to_record(spec: EnvSpec) -> t.Dict[str, t.Any]:
    return dc.asdict(spec)


def spec_from_record(record: t.Dict[str, t.Any]) -> EnvSpec:
    """Inverse of `spec_to_record`; JSON lists come back as the tuples EnvSpec stores."""
    if not isinstance(record, dict):
        raise er.ConfigError(f'An environment spec record must be an object, got {type(record).__name__}.')
    unknown = set(record) - {field.name for field in dc.fields(EnvSpec)}
    if unknown:
        raise er.ConfigError(f'Unknown environment spec fields: {sorted(unknown)}.')

    return EnvSpec(**{name: _as_tuples(value) for name, value in record.items()})


########################################################################################################################
# GEOMETRY
########################################################################################################################
def _orientation(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> float:
    return float((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def _on_segment(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> bool:
    return (min(p[0], r[0]) <= q[0] <= max(p[0], r[0])) and (min(p[1], r[1]) <= q[1] <= max(p[1], r[1]))


def segments_intersect(a1: t.Sequence[float], a2: t.Sequence[float],
                       b1: t.Sequence[float], b2: t.Sequence[float]) -> bool:
    """Closed-segment intersection; touching counts as crossing."""
    a1, a2, b1, b2 = (np.asarray(p, dtype=np.float64) for p in (a1, a2, b1, b2))
    o1, o2 = _orientation(a1, a2, b1), _orientation(a1, a2, b2)
    o3, o4 = _orientation(b1, b2, a1), _orientation(b1, b2, a2)
    if ((o1 > 0 > o2) or (o1 < 0 < o2)) and ((o3 > 0 > o4) or (o3 < 0 < o4)):
        return True
    if o1 == 0 and _on_segment(a1, b1, a2):
        return True
    if o2 == 0 and _on_segment(a1, b2, a2):
        return True
    if o3 == 0 and _on_segment(b1, a1, b2):
        return True
    if o4 == 0 and _on_segment(b1, a2, b2):
        return True
    return False


def crosses_wall(spec: EnvSpec, start: np.ndarray, end: np.ndarray) -> bool:
    if np.array_equal(start, end):
        return False
    return any(segments_intersect(start, end, w1, w2) for w1, w2 in spec.walls)


def count_wall_crossings(spec: EnvSpec, positions: np.ndarray) -> int:
    positions = np.asarray(positions, dtype=np.float64)[:, :2]
    return sum(crosses_wall(spec, positions[i], positions[i + 1]) for i in range(len(positions) - 1))


########################################################################################################################
# DYNAMICS
########################################################################################################################
def current_goal(spec: EnvSpec, state: EnvState) -> np.ndarray:
    return np.asarray(state.goal if spec.goal_conditioned else spec.goal, dtype=np.float64)


def waypoints_for(spec: EnvSpec, state: EnvState) -> np.ndarray:
    if spec.waypoints:
        return np.asarray(spec.waypoints, dtype=np.float64)
    return current_goal(spec, state).reshape(1, 2)


def observe(spec: EnvSpec, state: EnvState) -> np.ndarray:
    if spec.goal_conditioned:
        return np.concatenate([state.position, state.goal])
    return state.position.copy()


def _advance_waypoints(spec: EnvSpec, state: EnvState) -> EnvState:
    waypoints = waypoints_for(spec, state)
    index = state.waypoint_index
    while index < len(waypoints) and np.linalg.norm(state.position - waypoints[index]) <= WAYPOINT_TOLERANCE:
        index += 1
    return dc.replace(state, waypoint_index=index)


def clip_norm(vector: np.ndarray, max_norm: float) -> np.ndarray:
    norm = np.linalg.norm(vector)
    if norm > max_norm:
        return vector * (max_norm / norm)
    return vector


def env_reset(spec: EnvSpec, rng: np.random.Generator) -> EnvState:
    position = rng.uniform(spec.start_low, spec.start_high)
    goal = None
    if spec.goal_conditioned:
        goal = np.asarray(spec.goal_set[rng.integers(len(spec.goal_set))], dtype=np.float64)

    return _advance_waypoints(spec, EnvState(position=np.asarray(position, dtype=np.float64), goal=goal))


def env_step(spec: EnvSpec, state: EnvState, action: t.Sequence[float]) -> t.Tuple[EnvState, float, bool]:
    """Clip the action, move unless the segment touches a wall, then report goal reward and termination."""
    action = np.asarray(action, dtype=np.float64).reshape(-1)
    if action.shape != (2,) or not np.all(np.isfinite(action)):
        raise er.ArgumentError(f'Action must be a finite 2D vector. Received: {action}.')
    proposed = np.clip(state.position + clip_norm(action, spec.max_step_norm), 0.0, 1.0)
    position = state.position if crosses_wall(spec, state.position, proposed) else proposed
    steps = state.steps_elapsed + 1
    next_state = _advance_waypoints(spec, dc.replace(state, position=position, steps_elapsed=steps))
    reached = bool(np.linalg.norm(position - current_goal(spec, next_state)) <= spec.goal_radius)

    return next_state, float(reached), reached or steps >= spec.horizon


def goal_reached(spec: EnvSpec, state: EnvState) -> bool:
    return bool(np.linalg.norm(state.position - current_goal(spec, state)) <= spec.goal_radius)
