import numpy as np
import pytest

import constants as ct
import demos
import discrim
import errors as er
import helpers as hp
import numkit as nk
import postpro.visualisers.visualiser_grid as vg
import ranking
import reward as rw


@pytest.fixture
def run(tmp_path):
    config = hp.load_config(seed=0, out=str(tmp_path))
    spec = demos.build_env_spec(config.env)
    demos.write_dataset(demos.generate_demos(spec, 2, 0), hp.demos_path(config))
    rng = np.random.default_rng(0)
    model = rw.RewardModel(rw.RANK2REWARD, ranking.init_ranking_model(2, [4], rng),
                           discrim.init_discriminator(2, [4], rng))
    for name in (ct.GRID_PRE_FILE, ct.GRID_POST_FILE):
        rw.write_grid(rw.reward_grid(model, 6), tmp_path / name)
    return config


def test_grid_matrix_is_row_major():
    grid = rw.reward_grid(rw.RewardModel(rw.AIRL, disc=discrim.Discriminator(nk.zero_mlp([2, 1]))), 3)
    np.testing.assert_array_equal(vg.grid_matrix(grid, 'x')[0], [0.0, 0.5, 1.0])
    with pytest.raises(er.ArgumentError):
        vg.grid_matrix(grid.iloc[:5], 'x')


def test_plots_are_written(run):
    viz = vg.GridVisualiser(run)
    viz.plot_components('post')
    viz.plot_before_after('reward')
    assert (viz.run_viz_dir / 'grid_post.png').exists()
    assert (viz.run_viz_dir / 'grid_reward_before_after.png').exists()
    assert viz.plot_curve() is None


def test_missing_grid_is_reported(run):
    viz = vg.GridVisualiser(run)
    (viz.run_dir / ct.GRID_PRE_FILE).unlink()
    with pytest.raises(er.ConfigError):
        viz.load_grid('pre')
    with pytest.raises(er.ArgumentError):
        viz.load_grid('later')
