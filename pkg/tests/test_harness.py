import json

import numpy as np
import pandas as pd
import pytest

import constants as ct
import demos
import errors as er
import helpers as hp
import logger as lg
import main
import metrics.custom as mc
import numkit as nk
import options.experiment_options as eo
import postpro.evaluators.evaluator_ranking as erk
import ranking
import reward as rw
import specs

QUICK = ','.join([
    'env.kind:point_reach',
    'env.horizon:50',
    'demos.n_trajectories:5',
    'ranking.steps:20',
    'ranking.net.hidden:8-8',
    'discriminator.net.hidden:8-8',
    'discriminator.batch_size:8',
    'agent.hidden:8-8',
    'agent.batch_size:8',
    'agent.utd_ratio:1',
    'agent.explore_steps:20',
    'total_steps:40',
    'eval_every:20',
    'eval_episodes:2',
    'show_progress:false',
])


def _cli(job: str, out, *extra: str) -> int:
    return main.main([job, '--out', str(out), '--seed', '3', '-o', QUICK, *extra])


########################################################################################################################
# CONFIGURATION
########################################################################################################################
def test_empty_config_gives_defaults(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text('')
    assert hp.load_config(path) == eo.ExperimentOptions()
    assert hp.load_config() == eo.ExperimentOptions()


def test_config_file_and_overrides_layer(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'total_steps': 5000, 'reward': {'alpha': 2}, 'agent': {'explore_steps': 100}}))
    config = hp.load_config(path, opts='reward.alpha:0.5,ranking.net.hidden:128-128,agent.terminal_on_goal:yes',
                            seed=9, out=str(tmp_path / 'run'))
    assert config.total_steps == 5000
    assert config.reward.alpha == 0.5
    assert config.ranking.net.hidden == [128, 128]
    assert config.agent.terminal_on_goal is True
    assert config.agent.explore_steps == 100
    assert config.seed == 9
    assert hp.run_dir(config) == tmp_path / 'run'
    assert hp.demos_path(config) == tmp_path / 'run' / ct.DEMOS_FILE


@pytest.mark.parametrize('opts', [
    'reward.alpha:-1',
    'reward.kind:bogus',
    'ranking.steps:-5',
    'discriminator.batch_size:7',
    'reward.kind:vice',
    'discriminator.mode:counterfactual',
    'ranking.goal_conditioned:true',
    'agent.explore_steps:200000',
    'no_such_key:1',
    'reward.alpha.value:1',
    'reward.alpha:lots',
    'missing_colon',
])
def test_invalid_configuration_is_rejected(opts: str):
    with pytest.raises(er.ConfigError):
        hp.load_config(opts=opts)


def test_config_file_errors(tmp_path):
    with pytest.raises(er.ConfigError):
        hp.load_config(tmp_path / 'absent.json')
    malformed = tmp_path / 'malformed.json'
    malformed.write_text('{"total_steps": }')
    with pytest.raises(er.ConfigError):
        hp.load_config(malformed)
    unknown = tmp_path / 'unknown.json'
    unknown.write_text(json.dumps({'agent': {'gamma': 0.9}}))
    with pytest.raises(er.ConfigError):
        hp.load_config(unknown)


@pytest.mark.parametrize('preset', sorted(specs.experiments.PRESETS))
def test_presets_round_trip(preset: str):
    config = hp.load_config(preset=preset)
    assert hp.parse_config(hp.config_to_dict(config)) == config


def test_unknown_preset():
    with pytest.raises(er.ConfigError):
        hp.load_config(preset='nope')


########################################################################################################################
# METRICS
########################################################################################################################
def test_increasing_fraction_and_monotone():
    assert mc.increasing_fraction([1.0, 2.0, 2.0, 3.0]) == pytest.approx(2.0 / 3.0)
    assert mc.is_monotone(np.arange(10.0))
    assert not mc.is_monotone(np.arange(10.0)[::-1])


def test_evaluate_ranking_reports_tau_and_monotone_fraction():
    model = ranking.RankingModel(nk.MlpParams([2, 1], [np.array([[1.0, 0.0]])], [np.zeros(1)]))
    forward = demos.Trajectory(np.column_stack([np.linspace(0, 1, 6), np.zeros(6)]), demos.POINT_REACH)
    backward = demos.Trajectory(forward.states[::-1], demos.POINT_REACH)
    report = erk.evaluate_ranking(model, demos.ExpertDataset([forward, backward]), 'eval')
    assert report['eval_kendall_tau'] == pytest.approx(0.0)
    assert report['eval_monotone_fraction'] == pytest.approx(0.5)
    assert np.isnan(erk.evaluate_ranking(model, demos.ExpertDataset([]), 'train')['train_kendall_tau'])


def test_print_options_lists_flattened_fields(tmp_path, capsys):
    lg.ExperimentLogger(eo.ExperimentOptions(), tmp_path).print_options()
    out = capsys.readouterr().out
    assert 'reward.alpha' in out
    assert 'agent.hidden' in out and '[64, 64]' in out


def test_counterfactual_goals_differ_from_own():
    dataset = demos.generate_demos(demos.multi_goal_reach(), 6, 0)
    goals = erk.counterfactual_goals(dataset, np.random.default_rng(0))
    finals = np.stack([traj.positions[-1] for traj in dataset.trajectories])
    assert not np.any(np.all(np.isclose(goals, finals), axis=1))


def test_counterfactual_report_prefers_true_goal():
    # utility grows as the position closes in on the goal
    weights = np.array([[1.0, 1.0, -1.0, -1.0], [-1.0, -1.0, 1.0, 1.0]])
    net = nk.MlpParams([4, 2, 1], [weights, np.array([[-5.0, -5.0]])], [np.zeros(2), np.zeros(1)])
    model = rw.RewardModel(rw.RANKING_ONLY, ranking.RankingModel(net, goal_conditioned=True))
    a = demos.Trajectory(np.column_stack([np.linspace(0.5, 0.15, 8), np.linspace(0.5, 0.15, 8)]), 'multi_goal_reach')
    b = demos.Trajectory(np.column_stack([np.linspace(0.5, 0.85, 8), np.linspace(0.5, 0.85, 8)]), 'multi_goal_reach')
    report = erk.counterfactual_report(model, demos.ExpertDataset([a, b]), np.random.default_rng(0))
    assert report['goal_reward_gap'] > 0.0
    assert report['true_monotone_fraction'] == 1.0
    assert report['counterfactual_monotone_fraction'] == 0.0


########################################################################################################################
# COMMAND LINE
########################################################################################################################
def test_gen_demos_is_deterministic(tmp_path):
    assert _cli('gen-demos', tmp_path / 'a') == 0
    assert _cli('gen-demos', tmp_path / 'b') == 0
    first = (tmp_path / 'a' / ct.DEMOS_FILE).read_bytes()
    assert first == (tmp_path / 'b' / ct.DEMOS_FILE).read_bytes()
    assert len(first.decode().splitlines()) == 5
    assert (tmp_path / 'a' / ct.CONFIG_SNAPSHOT).exists()


def test_gen_demos_on_the_default_maze(tmp_path):
    for name in ('a', 'b'):
        assert main.main(['gen-demos', '--out', str(tmp_path / name), '--seed', '7', '-o', 'show_progress:false']) == 0
    summary = hp.read_json(tmp_path / 'a' / ct.DEMOS_SUMMARY)
    assert summary['trajectories'] == 20
    assert 20 <= summary['mean_length'] <= 80
    assert summary['success_rate'] == 1.0
    assert (tmp_path / 'a' / ct.DEMOS_FILE).read_bytes() == (tmp_path / 'b' / ct.DEMOS_FILE).read_bytes()
    loaded = demos.read_dataset(tmp_path / 'a' / ct.DEMOS_FILE)
    assert loaded.env_spec == demos.two_wall_maze()


def test_errors_exit_nonzero(tmp_path):
    assert _cli('train', tmp_path / 'empty') == 1
    assert _cli('train-ranking', tmp_path / 'empty') == 1
    assert main.main(['gen-demos', '--out', str(tmp_path), '-o', 'reward.alpha:-1']) == 1
    assert _cli('reward-grid', tmp_path / 'empty', '--resolution', '1') == 1


def test_full_pipeline(tmp_path):
    out = tmp_path / 'run'
    assert _cli('gen-demos', out) == 0
    assert _cli('train-ranking', out) == 0
    assert _cli('train', out) == 0
    assert _cli('eval', out, '--episodes', '2') == 0
    assert _cli('reward-grid', out, '--resolution', '5', '--snapshot', 'pre') == 0

    for name in (ct.RANKING_CKPT, ct.DISC_CKPT, ct.AGENT_CKPT, ct.GRID_PRE_FILE, ct.GRID_POST_FILE,
                 ct.RANKING_METRICS, ct.TRAIN_METRICS, ct.EVAL_METRICS):
        assert (out / name).exists(), name

    curve = pd.read_csv(out / ct.CURVE_FILE)
    assert list(curve.columns) == ct.CURVE_COLUMNS
    assert curve['env_step'].tolist() == [20, 40]
    assert (curve['wall_clock_s'] == 0.0).all()

    counters = hp.read_json(out / ct.TRAIN_METRICS)
    assert counters['discriminator_updates'] == counters['expected_discriminator_updates'] == 20
    assert counters['agent_updates'] + counters['deferred_agent_updates'] == 20
    assert counters['far_cells'] >= counters['spurious_cells'] >= counters['suppressed_spurious_cells']
    assert isinstance(counters['spurious_ranking_property'], bool)

    grid = pd.read_csv(out / ct.GRID_PRE_FILE)
    assert len(grid) == 25 and list(grid.columns) == ct.GRID_COLUMNS
    assert hp.read_json(out / ct.EVAL_METRICS)['episodes'] == 2


def test_training_curves_are_reproducible(tmp_path):
    for name in ('a', 'b'):
        for job in ('gen-demos', 'train-ranking', 'train'):
            assert _cli(job, tmp_path / name) == 0
    assert (tmp_path / 'a' / ct.CURVE_FILE).read_bytes() == (tmp_path / 'b' / ct.CURVE_FILE).read_bytes()
