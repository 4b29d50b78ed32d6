from reward._model import (RANK2REWARD, GAIL, AIRL, VICE, RANKING_ONLY, KINDS, RewardModel, combined_reward,
                           product_form_reward, baseline_reward, reward, reward_components, reward_bounds)
from reward._grid import lattice, reward_grid, write_grid, read_grid, spurious_ranking_report
