import options.env_options as eno
import options.experiment_options as eo
import options.model_options as mo

WIDE_HIDDEN = [4096, 4096, 4096]

########################################################################################################################
# TWO-WALL MAZE
########################################################################################################################
maze_rank2reward = eo.ExperimentOptions()
maze_ranking_only = eo.ExperimentOptions(
    reward=mo.RewardOptions(kind='ranking_only'),
)
maze_gail = eo.ExperimentOptions(
    reward=mo.RewardOptions(kind='gail'),
)
maze_airl = eo.ExperimentOptions(
    reward=mo.RewardOptions(kind='airl'),
)
maze_vice = eo.ExperimentOptions(
    discriminator=mo.DiscriminatorOptions(mode='goal_states'),
    reward=mo.RewardOptions(kind='vice'),
)
########################################################################################################################
# MULTI-GOAL REACH
########################################################################################################################
multigoal_counterfactual = eo.ExperimentOptions(
    env=eno.EnvOptions(kind='multi_goal_reach'),
    demos=eno.DemoOptions(n_trajectories=40),
    ranking=mo.RankingOptions(goal_conditioned=True),
    discriminator=mo.DiscriminatorOptions(mode='counterfactual', batch_size=64),
    reward=mo.RewardOptions(kind='rank2reward'),
    total_steps=30_000,
)
########################################################################################################################
# FULL SCALE
########################################################################################################################
full_scale = eo.ExperimentOptions(
    ranking=mo.RankingOptions(net=mo.NetworkOptions(hidden=WIDE_HIDDEN), steps=5000, batch_size=32, lr=1e-4),
    discriminator=mo.DiscriminatorOptions(net=mo.NetworkOptions(hidden=WIDE_HIDDEN)),
    agent=mo.AgentOptions(discount=0.99, tau=0.005, num_critics=2, utd_ratio=20, batch_size=256,
                          explore_steps=1440),
)

PRESETS = {
    'maze_rank2reward': maze_rank2reward,
    'maze_ranking_only': maze_ranking_only,
    'maze_gail': maze_gail,
    'maze_airl': maze_airl,
    'maze_vice': maze_vice,
    'multigoal_counterfactual': multigoal_counterfactual,
    'full_scale': full_scale,
}
