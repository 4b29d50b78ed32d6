import dataclasses as dc
import typing as t

import numpy as np

import constants as ct
import errors as er
import numkit as nk


@dc.dataclass
class Discriminator:
    net: nk.MlpParams
    goal_conditioned: bool = False
    mixup_enabled: bool = True
    mode: str = 'expert'

    def __post_init__(self):
        if self.net.output_dim != 1:
            raise er.ShapeError(f'A discriminator emits one logit, got {self.net.output_dim} outputs.')

    @property
    def input_dim(self) -> int:
        return self.net.input_dim


def init_discriminator(input_dim: int, hidden: t.Sequence[int], rng: np.random.Generator,
                       spectral_norm: bool = True, goal_conditioned: bool = False, mixup: bool = True,
                       mode: str = 'expert', power_iterations: int = 1) -> Discriminator:
    mask = nk.default_spectral_mask(len(hidden)) if spectral_norm else None
    net = nk.init_mlp([input_dim, *hidden, 1], rng, spectral_norm_mask=mask, power_iterations=power_iterations)

    return Discriminator(net, goal_conditioned, mixup, mode)


def logits(disc: Discriminator, states: np.ndarray) -> np.ndarray:
    outputs, _ = nk.mlp_forward(disc.net, states)
    return outputs[:, 0]


def classify(disc: Discriminator, states: np.ndarray, eps: float = ct.CLAMP_EPSILON) -> np.ndarray:
    return nk.clamp_probability(nk.sigmoid(logits(disc, states)), eps)


def density_ratio(disc: Discriminator, states: np.ndarray, eps: float = ct.CLAMP_EPSILON) -> np.ndarray:
    """d_expert / d_policy estimated as D / (1 - D) from the clamped probability."""
    d = classify(disc, states, eps)
    return d / (1.0 - d)


def negate_logit(disc: Discriminator) -> Discriminator:
    net = disc.net.copy()
    net.weights[-1] = -net.weights[-1]
    net.biases[-1] = -net.biases[-1]
    return dc.replace(disc, net=net)


def discriminator_to_record(disc: Discriminator) -> t.Dict[str, t.Any]:
    return {'goal_conditioned': bool(disc.goal_conditioned), 'mixup_enabled': bool(disc.mixup_enabled),
            'mode': disc.mode, 'net': nk.mlp_to_record(disc.net)}


def discriminator_from_record(record: t.Dict[str, t.Any]) -> Discriminator:
    return Discriminator(nk.mlp_from_record(record['net']), bool(record['goal_conditioned']),
                         bool(record['mixup_enabled']), record['mode'])


def save_discriminator(disc: Discriminator, path) -> None:
    nk.write_checkpoint(path, 'discriminator', discriminator_to_record(disc))


def load_discriminator(path) -> Discriminator:
    return discriminator_from_record(nk.read_checkpoint(path, 'discriminator'))
