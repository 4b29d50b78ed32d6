import dataclasses as dc

import numpy as np
import pytest

import agent as ag
import demos
import discrim
import errors as er
import numkit as nk
import options.model_options as mo

SEEDS = list(range(20))
EXPERT_COUNTS = np.array([2, 3, 4, 5] * 4)
POLICY_COUNTS = np.array([5, 4, 3, 2] * 4)


def _linear_disc(weights, bias: float = 0.0) -> discrim.Discriminator:
    weights = np.asarray(weights, dtype=np.float64).reshape(1, -1)
    return discrim.Discriminator(nk.MlpParams([weights.shape[1], 1], [weights], [np.array([bias])]))


def _two_region_dataset() -> demos.ExpertDataset:
    left = np.array([[0.1, 0.2, 0.15, 0.15], [0.1, 0.1, 0.15, 0.15], [0.15, 0.15, 0.15, 0.15]])
    right = np.array([[0.9, 0.8, 0.85, 0.85], [0.9, 0.9, 0.85, 0.85], [0.85, 0.85, 0.85, 0.85]])
    return demos.ExpertDataset([demos.Trajectory(left, demos.MULTI_GOAL_REACH),
                                demos.Trajectory(right, demos.MULTI_GOAL_REACH)])


def _replay_with(states: np.ndarray) -> ag.ReplayBuffer:
    buffer = ag.ReplayBuffer(len(states), states.shape[1], 2)
    for state in states:
        buffer.push(ag.Transition(state, np.zeros(2), state))
    return buffer


def _with_random_biases(net: nk.MlpParams, rng: np.random.Generator) -> nk.MlpParams:
    arrays = net.parameters()
    arrays[1::2] = [rng.normal(0.0, 0.5, size=b.shape) for b in arrays[1::2]]
    return net.with_parameters(arrays)


def _count_batch() -> discrim.ClassifierBatch:
    """Every one-hot point repeated in proportion to its probability under each side."""
    eye = np.eye(len(EXPERT_COUNTS))
    expert = np.repeat(eye, EXPERT_COUNTS, axis=0)
    policy = np.repeat(eye, POLICY_COUNTS, axis=0)
    labels = np.concatenate([np.ones(len(expert)), np.zeros(len(policy))])
    return discrim.ClassifierBatch(np.vstack([expert, policy]), labels)


########################################################################################################################
# MODEL
########################################################################################################################
def test_zero_logit_classifies_half():
    disc = discrim.Discriminator(nk.zero_mlp([2, 4, 1]))
    states = np.random.default_rng(0).uniform(size=(3, 2))
    np.testing.assert_allclose(discrim.classify(disc, states), np.full(3, 0.5))
    np.testing.assert_allclose(discrim.density_ratio(disc, states), np.ones(3))


def test_logit_ln9_gives_ratio_nine():
    disc = _linear_disc([np.log(9.0), 0.0])
    assert discrim.classify(disc, np.array([[1.0, 0.0]]))[0] == pytest.approx(0.9)
    assert discrim.density_ratio(disc, np.array([[1.0, 0.0]]))[0] == pytest.approx(9.0)


def test_density_ratio_is_clamped():
    disc = _linear_disc([1000.0, 0.0])
    ratio = discrim.density_ratio(disc, np.array([[1.0, 0.0], [-1.0, 0.0]]), eps=1e-7)
    assert np.all(np.isfinite(ratio))
    assert ratio[0] == pytest.approx((1 - 1e-7) / 1e-7)
    assert ratio[1] == pytest.approx(1e-7 / (1 - 1e-7))


def test_negate_logit_flips_sign():
    disc = discrim.init_discriminator(2, [6, 6], np.random.default_rng(0))
    states = np.random.default_rng(1).uniform(size=(5, 2))
    np.testing.assert_allclose(discrim.logits(discrim.negate_logit(disc), states), -discrim.logits(disc, states))


def test_discriminator_checkpoint_roundtrip(tmp_path):
    disc = discrim.init_discriminator(4, [4], np.random.default_rng(2), goal_conditioned=True, mode='counterfactual')
    discrim.save_discriminator(disc, tmp_path / 'disc.ckpt')
    restored = discrim.load_discriminator(tmp_path / 'disc.ckpt')
    states = np.random.default_rng(3).uniform(size=(4, 4))
    np.testing.assert_array_equal(discrim.logits(disc, states), discrim.logits(restored, states))
    assert restored.goal_conditioned and restored.mode == 'counterfactual'


########################################################################################################################
# BATCHES
########################################################################################################################
def test_goal_states_takes_last_kappa():
    dataset = _two_region_dataset()
    np.testing.assert_array_equal(discrim.goal_states(dataset, 2), np.vstack([dataset.trajectories[0].states[-2:],
                                                                                dataset.trajectories[1].states[-2:]]))


def test_classifier_batch_is_balanced():
    dataset = demos.generate_demos(demos.point_reach(), 2, 0)
    replay = _replay_with(np.full((5, 2), 0.5))
    batch = discrim.build_classifier_batch(dataset, replay, 8, discrim.EXPERT, np.random.default_rng(0))
    np.testing.assert_array_equal(batch.labels, [1, 1, 1, 1, 0, 0, 0, 0])
    np.testing.assert_array_equal(batch.states[4:], np.full((4, 2), 0.5))


def test_empty_replay_defers_update():
    dataset = demos.generate_demos(demos.point_reach(), 2, 0)
    with pytest.raises(er.BufferTooSmallError):
        discrim.build_classifier_batch(dataset, ag.ReplayBuffer(4, 2, 2), 4, discrim.EXPERT,
                                       np.random.default_rng(0))


def test_odd_batch_size_is_rejected():
    dataset = demos.generate_demos(demos.point_reach(), 2, 0)
    with pytest.raises(er.ArgumentError):
        discrim.build_classifier_batch(dataset, _replay_with(np.zeros((2, 2))), 5, discrim.EXPERT,
                                       np.random.default_rng(0))


def test_counterfactual_negatives_use_the_other_goal():
    dataset = _two_region_dataset()
    batch = discrim.build_classifier_batch(dataset, None, 64, discrim.COUNTERFACTUAL, np.random.default_rng(0))
    positives, negatives = batch.states[:32], batch.states[32:]
    own_goal = np.where(positives[:, :1] < 0.5, 0.15, 0.85)
    other_goal = np.where(negatives[:, :1] < 0.5, 0.85, 0.15)
    np.testing.assert_allclose(positives[:, 2:], np.hstack([own_goal, own_goal]))
    np.testing.assert_allclose(negatives[:, 2:], np.hstack([other_goal, other_goal]))


def test_counterfactual_needs_two_trajectories():
    dataset = demos.ExpertDataset(_two_region_dataset().trajectories[:1])
    with pytest.raises(er.ArgumentError):
        discrim.ExpertSampler(dataset, discrim.COUNTERFACTUAL)


########################################################################################################################
# LOSS AND TRAINING
########################################################################################################################
def test_zero_logits_loss_is_ln2():
    disc = discrim.Discriminator(nk.zero_mlp([16, 4, 1]))
    loss, _ = discrim.discriminator_loss(disc, _count_batch())
    assert loss == pytest.approx(np.log(2.0), abs=1e-12)


@pytest.mark.parametrize('seed', SEEDS)
def test_loss_gradient_matches_finite_differences(seed: int):
    rng = np.random.default_rng(seed)
    disc = discrim.init_discriminator(3, [5, 4], rng)
    disc = dc.replace(disc, net=_with_random_biases(disc.net, rng))
    batch = discrim.ClassifierBatch(rng.normal(size=(8, 3)), rng.uniform(size=8))
    _, grads = discrim.discriminator_loss(disc, batch)

    def _loss(params):
        return discrim.discriminator_loss(dc.replace(disc, net=disc.net.with_parameters(params)), batch)[0]

    for analytic, numeric in zip(grads.parameters(), nk.finite_diff_grad(_loss, disc.net.parameters())):
        assert nk.relative_error(analytic, numeric) < 1e-4


@pytest.mark.parametrize('seed', SEEDS[:5])
def test_trained_goal_conditioned_input_gradient(seed: int):
    opts = mo.DiscriminatorOptions(mode=discrim.COUNTERFACTUAL, batch_size=8, offline_steps=200,
                                   net=mo.NetworkOptions(hidden=[8]))
    disc = discrim.train_discriminator_offline(_two_region_dataset(), opts, seed=seed)
    assert disc.goal_conditioned
    states = np.random.default_rng(seed).uniform(size=(5, 4))

    _, cache = nk.mlp_forward(disc.net, states)
    analytic = nk.mlp_backward(disc.net, cache, np.ones((5, 1))).inputs
    (numeric,) = nk.finite_diff_grad(lambda p: float(np.sum(discrim.logits(disc, p[0]))), [states])
    assert nk.relative_error(analytic, numeric) < 1e-4


def test_update_discriminator_counts_rounds():
    dataset = demos.generate_demos(demos.point_reach(), 2, 0)
    opts = mo.DiscriminatorOptions(batch_size=8, updates_per_round=3, net=mo.NetworkOptions(hidden=[4]))
    state = discrim.init_discriminator_state(2, opts, np.random.default_rng(0))
    _, adam, loss = discrim.update_discriminator(state.disc, state.adam, dataset, _replay_with(np.zeros((4, 2))),
                                                 opts, np.random.default_rng(1))
    assert adam.step_count == 3
    assert np.isfinite(loss)


def test_offline_training_requires_counterfactual_mode():
    with pytest.raises(er.ConfigError):
        discrim.train_discriminator_offline(_two_region_dataset(), mo.DiscriminatorOptions(mode='expert'), seed=0)


def test_closed_form_classifier_recovers_exact_ratio():
    expert, policy = EXPERT_COUNTS / EXPERT_COUNTS.sum(), POLICY_COUNTS / POLICY_COUNTS.sum()
    disc = _linear_disc(np.log(expert / policy))
    ratio = discrim.density_ratio(disc, np.eye(len(expert)))
    np.testing.assert_allclose(ratio, expert / policy, rtol=1e-9)


def test_trained_classifier_estimates_density_ratio():
    rng = np.random.default_rng(0)
    disc = discrim.init_discriminator(len(EXPERT_COUNTS), [32], rng, spectral_norm=False)
    state = discrim.DiscriminatorTrainState(disc, nk.init_adam(disc.net.parameters(), 1e-2))
    batch = _count_batch()
    for _ in range(3000):
        discrim.discriminator_step(state, batch)

    exact = EXPERT_COUNTS / POLICY_COUNTS
    estimate = discrim.density_ratio(state.disc, np.eye(len(exact)))
    assert np.mean(np.abs(estimate - exact) / exact) <= 0.1
