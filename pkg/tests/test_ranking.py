import dataclasses as dc

import numpy as np
import pytest

import demos
import errors as er
import metrics.custom as mc
import numkit as nk
import options.model_options as mo
import ranking
import specs.maps as sm

SEEDS = list(range(20))


def _line_dataset(n_trajectories: int, length: int, seed: int) -> demos.ExpertDataset:
    """Noisy straight runs from the left edge to the right edge of the unit square."""
    rng = np.random.default_rng(seed)
    trajectories = []
    for _ in range(n_trajectories):
        y = rng.uniform(0.2, 0.8)
        xs = np.linspace(0.05, 0.95, length)
        states = np.stack([xs, np.full(length, y) + rng.normal(0.0, 0.01, size=length)], axis=1)
        trajectories.append(demos.Trajectory(np.clip(states, 0.0, 1.0), demos.POINT_REACH))
    return demos.ExpertDataset(trajectories, demos.point_reach())


def _linear_model(weight) -> ranking.RankingModel:
    net = nk.MlpParams([2, 1], [np.array([weight], dtype=np.float64)], [np.zeros(1)])
    return ranking.RankingModel(net)


def _with_random_biases(net: nk.MlpParams, rng: np.random.Generator) -> nk.MlpParams:
    arrays = net.parameters()
    arrays[1::2] = [rng.normal(0.0, 0.5, size=b.shape) for b in arrays[1::2]]
    return net.with_parameters(arrays)


def _pair(first, second, label: float) -> ranking.PairBatch:
    return ranking.PairBatch(np.array([first], dtype=np.float64), np.array([second], dtype=np.float64),
                             np.array([label]), np.zeros(1, dtype=int), np.ones(1, dtype=int), np.zeros(1, dtype=int))


########################################################################################################################
# MODEL
########################################################################################################################
def test_zero_utility_gives_half_progress():
    model = ranking.RankingModel(nk.zero_mlp([2, 4, 1]))
    states = np.random.default_rng(0).uniform(size=(5, 2))
    np.testing.assert_array_equal(ranking.progress_likelihood(model, states), np.full(5, 0.5))
    np.testing.assert_allclose(ranking.log_progress_likelihood(model, states), np.full(5, np.log(0.5)))


def test_progress_likelihood_of_ln9_is_point_nine():
    model = _linear_model([1.0, 0.0])
    assert ranking.progress_likelihood(model, np.array([[np.log(9.0), 0.0]]))[0] == pytest.approx(0.9)


def test_ranking_model_needs_scalar_output():
    with pytest.raises(er.ShapeError):
        ranking.RankingModel(nk.zero_mlp([2, 4, 2]))


def test_anchor_zeroes_mean_initial_utility():
    rng = np.random.default_rng(0)
    model = ranking.init_ranking_model(2, [8, 8], rng)
    initial = rng.uniform(size=(6, 2))
    anchored = ranking.anchor(model, initial)
    assert np.mean(ranking.utility(anchored, initial)) == pytest.approx(0.0, abs=1e-9)


def test_goal_conditioned_inputs_append_final_position():
    traj = demos.Trajectory(np.array([[0.1, 0.1, 0.9, 0.9], [0.2, 0.2, 0.9, 0.9], [0.3, 0.4, 0.9, 0.9]]),
                            demos.MULTI_GOAL_REACH)
    inputs = ranking.ranking_inputs(traj, True)
    np.testing.assert_array_equal(inputs[:, 2:], np.tile([0.3, 0.4], (3, 1)))


def test_input_gradient_of_linear_model():
    model = _linear_model([2.0, -1.0])
    np.testing.assert_allclose(ranking.input_gradient(model, np.zeros((3, 2))), np.tile([2.0, -1.0], (3, 1)))


def test_ranking_checkpoint_roundtrip(tmp_path):
    model = ranking.anchor(ranking.init_ranking_model(2, [4], np.random.default_rng(1)), np.ones((1, 2)))
    ranking.save_ranking(model, tmp_path / 'ranking.ckpt')
    restored = ranking.load_ranking(tmp_path / 'ranking.ckpt')
    states = np.random.default_rng(2).uniform(size=(4, 2))
    np.testing.assert_array_equal(ranking.utility(model, states), ranking.utility(restored, states))
    assert restored.anchor_offset == model.anchor_offset


########################################################################################################################
# KENDALL TAU
########################################################################################################################
@pytest.mark.parametrize(['values', 'expected'], [
    ([1.0, 2.0, 3.0, 4.0], 1.0),
    ([4.0, 3.0, 2.0, 1.0], -1.0),
    ([1.0, 1.0, 1.0], 0.0),
    ([1.0, 3.0, 2.0], 1.0 / 3.0),
])
def test_kendall_tau(values, expected: float):
    assert mc.kendall_tau(values) == pytest.approx(expected)


def test_kendall_tau_needs_two_values():
    with pytest.raises(er.ArgumentError):
        mc.kendall_tau([1.0])
    with pytest.raises(er.ArgumentError):
        mc.increasing_fraction([1.0])


def test_mean_kendall_tau_of_empty_dataset_is_nan():
    model = _linear_model([1.0, 0.0])
    assert np.isnan(ranking.mean_kendall_tau(model, demos.ExpertDataset([])))


def test_linear_utility_orders_line_dataset():
    model = _linear_model([1.0, 0.0])
    assert ranking.mean_kendall_tau(model, _line_dataset(3, 10, 0)) == pytest.approx(1.0)


########################################################################################################################
# PAIRS
########################################################################################################################
def test_two_state_trajectories_always_pair_both_frames():
    traj = demos.Trajectory(np.array([[0.0, 0.0], [1.0, 1.0]]), demos.POINT_REACH)
    batch = ranking.sample_pair_batch(demos.ExpertDataset([traj]), 64, np.random.default_rng(0))
    assert set(zip(batch.first_indices, batch.second_indices)) <= {(0, 1), (1, 0)}
    np.testing.assert_array_equal(batch.labels, (batch.first_indices == 1).astype(float))
    np.testing.assert_array_equal(batch.first_states[:, 0], batch.first_indices.astype(float))


def test_pair_labels_follow_time_order():
    batch = ranking.sample_pair_batch(_line_dataset(4, 12, 0), 128, np.random.default_rng(1))
    assert np.all(batch.first_indices != batch.second_indices)
    np.testing.assert_array_equal(batch.labels, (batch.first_indices > batch.second_indices).astype(float))
    np.testing.assert_array_equal(batch.swapped().labels, 1.0 - batch.labels)


def test_unordered_pairs_are_uniform_within_a_trajectory():
    traj = demos.Trajectory(np.linspace(0.0, 1.0, 5).reshape(-1, 1).repeat(2, axis=1), demos.POINT_REACH)
    batch = ranking.sample_pair_batch(demos.ExpertDataset([traj]), 100_000, np.random.default_rng(2))
    low = np.minimum(batch.first_indices, batch.second_indices)
    high = np.maximum(batch.first_indices, batch.second_indices)
    counts = np.bincount(low * 5 + high, minlength=25)
    pairs = [i * 5 + j for i in range(5) for j in range(i + 1, 5)]
    assert counts.sum() == counts[pairs].sum()
    assert np.all(np.abs(counts[pairs] - 10_000) < 4.0 * np.sqrt(1e5 * 0.1 * 0.9))
    assert batch.labels.mean() == pytest.approx(0.5, abs=4.0 * np.sqrt(0.25 / 1e5))


def test_trajectories_are_drawn_uniformly_regardless_of_length():
    short = demos.Trajectory(np.zeros((3, 2)), demos.POINT_REACH)
    long = demos.Trajectory(np.zeros((9, 2)), demos.POINT_REACH)
    batch = ranking.sample_pair_batch(demos.ExpertDataset([short, long]), 100_000, np.random.default_rng(3))
    assert np.mean(batch.trajectory_ids == 0) == pytest.approx(0.5, abs=4.0 * np.sqrt(0.25 / 1e5))
    assert batch.first_indices[batch.trajectory_ids == 0].max() == 2


def test_pair_sampling_rejects_empty_dataset():
    with pytest.raises(er.ArgumentError):
        ranking.sample_pair_batch(demos.ExpertDataset([]), 4, np.random.default_rng(0))


def test_pair_loader_streams_batches():
    loader = ranking.PairBatchLoader(_line_dataset(2, 5, 0), 8, np.random.default_rng(0))
    batches = [batch for _, batch in zip(range(3), loader)]
    assert [len(batch) for batch in batches] == [8, 8, 8]


########################################################################################################################
# LOSS
########################################################################################################################
def test_loss_at_constant_utility_is_ln2():
    model = ranking.RankingModel(nk.zero_mlp([2, 8, 1]))
    batch = ranking.sample_pair_batch(_line_dataset(3, 10, 0), 32, np.random.default_rng(0))
    loss, _ = ranking.ranking_loss(model, batch)
    assert loss == pytest.approx(np.log(2.0), abs=1e-9)


def test_loss_closed_form_ln_four_thirds():
    loss, _ = ranking.ranking_loss(_linear_model([1.0, 0.0]), _pair([np.log(3.0), 0.0], [0.0, 0.0], 1.0))
    assert loss == pytest.approx(np.log(4.0 / 3.0), abs=1e-12)


def test_loss_is_symmetric_under_swap():
    rng = np.random.default_rng(3)
    model = ranking.init_ranking_model(2, [8], rng)
    batch = ranking.sample_pair_batch(_line_dataset(3, 10, 0), 16, rng)
    assert ranking.ranking_loss(model, batch)[0] == pytest.approx(ranking.ranking_loss(model, batch.swapped())[0])


def test_loss_ignores_final_bias_shift():
    rng = np.random.default_rng(4)
    model = ranking.init_ranking_model(2, [6, 6], rng)
    batch = ranking.sample_pair_batch(_line_dataset(3, 10, 0), 16, rng)
    params = model.net.parameters()
    params[-1] = params[-1] + 3.5
    shifted = dc.replace(model, net=model.net.with_parameters(params))
    loss, grads = ranking.ranking_loss(model, batch)
    shifted_loss, shifted_grads = ranking.ranking_loss(shifted, batch)
    assert shifted_loss == pytest.approx(loss, abs=1e-9)
    for a, b in zip(grads.parameters()[:-1], shifted_grads.parameters()[:-1]):
        np.testing.assert_allclose(a, b, atol=1e-9)


@pytest.mark.parametrize('seed', SEEDS)
def test_loss_gradient_matches_finite_differences(seed: int):
    rng = np.random.default_rng(seed)
    model = ranking.init_ranking_model(2, [5, 4], rng)
    model = dc.replace(model, net=_with_random_biases(model.net, rng))
    batch = ranking.sample_pair_batch(_line_dataset(3, 6, seed), 8, rng)
    _, grads = ranking.ranking_loss(model, batch)

    def _loss(params):
        return ranking.ranking_loss(dc.replace(model, net=model.net.with_parameters(params)), batch)[0]

    for analytic, numeric in zip(grads.parameters(), nk.finite_diff_grad(_loss, model.net.parameters())):
        assert nk.relative_error(analytic, numeric) < 1e-4


########################################################################################################################
# TRAINING
########################################################################################################################
def test_train_ranking_with_zero_steps_is_anchored_init():
    dataset = _line_dataset(4, 8, 0)
    model = ranking.train_ranking(dataset, mo.RankingOptions(steps=0), seed=0)
    initial = ranking.initial_inputs(dataset, False)
    assert np.mean(ranking.utility(model, initial)) == pytest.approx(0.0, abs=1e-9)


def test_train_ranking_is_deterministic():
    dataset = _line_dataset(4, 8, 0)
    opts = mo.RankingOptions(steps=20, net=mo.NetworkOptions(hidden=[8, 8]))
    first, second = ranking.train_ranking(dataset, opts, seed=5), ranking.train_ranking(dataset, opts, seed=5)
    states = np.random.default_rng(0).uniform(size=(10, 2))
    np.testing.assert_array_equal(ranking.utility(first, states), ranking.utility(second, states))


def test_ranking_trainer_reports_running_loss():
    dataset = _line_dataset(3, 6, 0)
    opts = mo.RankingOptions(steps=5, batch_size=8, net=mo.NetworkOptions(hidden=[4]))
    rng = np.random.default_rng(0)
    model = ranking.init_ranking_model(2, opts.net.hidden, rng)
    state = ranking.RankingTrainState(model, nk.init_adam(model.net.parameters(), opts.lr))
    trainer = ranking.create_ranking_trainer(state, opts, rng, sm.train_loss_metrics())
    trainer.run(ranking.PairBatchLoader(dataset, opts.batch_size, rng), max_epochs=1, epoch_length=opts.steps)
    assert np.isfinite(trainer.state.metrics['loss'])
    assert state.adam.step_count == 5


def test_train_ranking_rejects_empty_dataset():
    with pytest.raises(er.ArgumentError):
        ranking.train_ranking(demos.ExpertDataset([]), mo.RankingOptions(), seed=0)


@pytest.mark.slow
def test_ranking_learns_monotone_progress():
    train, held_out = _line_dataset(10, 40, 0), _line_dataset(5, 40, 1)
    model = ranking.train_ranking(train, mo.RankingOptions(steps=5000), seed=0)
    assert ranking.mean_kendall_tau(model, held_out) >= 0.9
