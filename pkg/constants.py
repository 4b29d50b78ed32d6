import os
import pathlib as pl

########################################################################################################################
# PROJECT DIRECTORIES
########################################################################################################################
SOURCE_ROOT = pl.Path(__file__).resolve().parent
WORK_ROOT = pl.Path(os.environ.get('R2R_WORK', os.getcwd()))
RUNS_ROOT = pl.Path('runs')
########################################################################################################################
# OUTPUT LAYOUT
########################################################################################################################
CONFIG_SNAPSHOT = 'config.snapshot'
DEMOS_FILE = 'demos.jsonl'
RANKING_CKPT = 'ranking.ckpt'
DISC_CKPT = 'disc.ckpt'
AGENT_CKPT = 'agent.ckpt'
CURVE_FILE = 'curve.csv'
GRID_PRE_FILE = 'grid_pre.csv'
GRID_POST_FILE = 'grid_post.csv'
DEMOS_SUMMARY = 'demos.summary.json'
RANKING_METRICS = 'ranking.metrics.json'
TRAIN_METRICS = 'train.metrics.json'
EVAL_METRICS = 'eval.metrics.json'
########################################################################################################################
# NUMERICS
########################################################################################################################
CLAMP_EPSILON = 1e-7
CSV_FLOAT_FORMAT = '%.9g'
CHECKPOINT_VERSION = 1
########################################################################################################################
# MODEL SETTINGS
########################################################################################################################
RANDOM_STATE = 42
EVAL_FRACTION = 0.20
MONOTONE_TAU = 0.9
GRID_RESOLUTION = 101
DISC_INIT_STREAM = 1
EVAL_STREAM = 2
CURVE_COLUMNS = [
    'env_step',
    'eval_success_rate',
    'eval_mean_true_return',
    'mean_learned_reward',
    'discriminator_loss',
    'ranking_kendall_tau',
    'wall_clock_s',
]
GRID_COLUMNS = ['x', 'y', 'utility', 'p_rf', 'd', 'ratio', 'reward']
