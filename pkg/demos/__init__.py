from demos._env import (EnvSpec, EnvState, TWO_WALL_MAZE, POINT_REACH, MULTI_GOAL_REACH, ENV_KINDS,
                        two_wall_maze, point_reach, multi_goal_reach, default_spec, build_env_spec, spec_to_record,
                        spec_from_record, segments_intersect, crosses_wall, count_wall_crossings, observe,
                        current_goal, goal_reached, clip_norm, env_reset, env_step)
from demos._expert import scripted_expert_action, expert_finished
from demos._dataset import (Trajectory, ExpertDataset, rollout_expert, generate_demos, subsample_trajectory,
                            subsample_dataset, split_dataset, validate_trajectory, summarise_dataset,
                            write_dataset, read_dataset)
