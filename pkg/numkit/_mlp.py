import dataclasses as dc
import typing as t

import numpy as np

import errors as er
import numkit._functional as fn
import numkit._spectral as sn

ACTIVATIONS = ('relu',)


@dc.dataclass
class MlpParams:
    """Dense ReLU network. weights[i] has shape (layer_sizes[i+1], layer_sizes[i]).

    Layers flagged in spectral_norm_mask are evaluated as W / (u^T W v) with the persisted
    power-iteration vectors in spectral_states.
    """
    layer_sizes: t.List[int]
    weights: t.List[np.ndarray]
    biases: t.List[np.ndarray]
    activation: str = 'relu'
    spectral_norm_mask: t.List[bool] = None
    spectral_states: t.List[t.Optional[sn.SpectralNormState]] = None

    def __post_init__(self):
        num_layers = len(self.layer_sizes) - 1
        if num_layers < 1:
            raise er.ShapeError(f'An MLP needs at least one layer. Received sizes {self.layer_sizes}.')
        if self.activation not in ACTIVATIONS:
            raise er.ArgumentError(f'Unknown activation: {self.activation}.')
        if self.spectral_norm_mask is None:
            self.spectral_norm_mask = [False] * num_layers
        if self.spectral_states is None:
            self.spectral_states = [None] * num_layers
        if not (len(self.weights) == len(self.biases) == len(self.spectral_norm_mask) == num_layers):
            raise er.ShapeError('weights, biases and spectral_norm_mask must have one entry per layer.')
        for i, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            expected = (self.layer_sizes[i + 1], self.layer_sizes[i])
            if weight.shape != expected or bias.shape != (expected[0],):
                raise er.ShapeError(f'Layer {i}: weight {weight.shape}, bias {bias.shape}, expected {expected}.')
            if self.spectral_norm_mask[i] and self.spectral_states[i] is None:
                raise er.ShapeError(f'Layer {i} is spectrally normalized but has no power-iteration state.')

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_dim(self) -> int:
        return self.layer_sizes[-1]

    def parameters(self) -> t.List[np.ndarray]:
        params = []
        for weight, bias in zip(self.weights, self.biases):
            params.extend([weight, bias])
        return params

    def with_parameters(self, params: t.Sequence[np.ndarray]) -> 'MlpParams':
        if len(params) != 2 * self.num_layers:
            raise er.ShapeError(f'Expected {2 * self.num_layers} parameter arrays, got {len(params)}.')
        return dc.replace(self,
                          weights=[np.array(p, dtype=np.float64) for p in params[0::2]],
                          biases=[np.array(p, dtype=np.float64) for p in params[1::2]],
                          spectral_norm_mask=list(self.spectral_norm_mask),
                          spectral_states=list(self.spectral_states))

    def copy(self) -> 'MlpParams':
        return self.with_parameters(self.parameters())


@dc.dataclass
class MlpCache:
    layer_sizes: t.List[int]
    inputs: t.List[np.ndarray]
    pre_activations: t.List[np.ndarray]
    effective_weights: t.List[np.ndarray]
    sigmas: t.List[t.Optional[float]]


@dc.dataclass
class MlpGrads:
    weights: t.List[np.ndarray]
    biases: t.List[np.ndarray]
    inputs: np.ndarray

    def parameters(self) -> t.List[np.ndarray]:
        grads = []
        for weight, bias in zip(self.weights, self.biases):
            grads.extend([weight, bias])
        return grads


def init_mlp(layer_sizes: t.Sequence[int], rng: np.random.Generator,
             spectral_norm_mask: t.Optional[t.Sequence[bool]] = None,
             power_iterations: int = 1, final_scale: float = 1.0) -> MlpParams:
    """He-normal weights, zero biases; the last layer is scaled by `final_scale`."""
    layer_sizes = [int(size) for size in layer_sizes]
    num_layers = len(layer_sizes) - 1
    mask = list(spectral_norm_mask) if spectral_norm_mask is not None else [False] * num_layers
    weights, biases, states = [], [], []
    for i in range(num_layers):
        fan_in, fan_out = layer_sizes[i], layer_sizes[i + 1]
        weight = rng.standard_normal((fan_out, fan_in)) * np.sqrt(2.0 / fan_in)
        if i == num_layers - 1:
            weight = weight * final_scale
        weights.append(weight)
        biases.append(np.zeros(fan_out))
        states.append(sn.init_spectral_state(weight, rng, power_iterations) if mask[i] else None)

    return MlpParams(layer_sizes, weights, biases, 'relu', mask, states)


def zero_mlp(layer_sizes: t.Sequence[int]) -> MlpParams:
    layer_sizes = [int(size) for size in layer_sizes]
    weights = [np.zeros((layer_sizes[i + 1], layer_sizes[i])) for i in range(len(layer_sizes) - 1)]
    biases = [np.zeros(layer_sizes[i + 1]) for i in range(len(layer_sizes) - 1)]

    return MlpParams(layer_sizes, weights, biases)


def default_spectral_mask(num_hidden: int) -> t.List[bool]:
    """Spectral norm on the layer producing the last hidden activation only."""
    mask = [False] * (num_hidden + 1)
    if num_hidden > 0:
        mask[num_hidden - 1] = True
    return mask


def refresh_spectral_norm(params: MlpParams, iterations: t.Optional[int] = None) -> MlpParams:
    states = list(params.spectral_states)
    for i, masked in enumerate(params.spectral_norm_mask):
        if not masked:
            continue
        state = states[i]
        if iterations is not None:
            state = dc.replace(state, power_iterations=iterations)
        _, state = sn.spectral_normalize(params.weights[i], state)
        states[i] = dc.replace(state, power_iterations=params.spectral_states[i].power_iterations)

    return dc.replace(params, spectral_states=states)


def effective_weights(params: MlpParams) -> t.Tuple[t.List[np.ndarray], t.List[t.Optional[float]]]:
    weights, sigmas = [], []
    for weight, masked, state in zip(params.weights, params.spectral_norm_mask, params.spectral_states):
        sigma = sn.spectral_sigma(weight, state) if masked else None
        if sigma is not None and sigma <= sn._ZERO_SIGMA:
            sigma = None
        weights.append(weight / sigma if sigma is not None else weight)
        sigmas.append(sigma)

    return weights, sigmas


def mlp_forward(params: MlpParams, batch: np.ndarray) -> t.Tuple[np.ndarray, MlpCache]:
    x = fn.as_matrix(batch, params.input_dim)
    weights, sigmas = effective_weights(params)
    inputs, pre_activations = [], []
    for i, (weight, bias) in enumerate(zip(weights, params.biases)):
        inputs.append(x)
        z = x @ weight.T + bias
        pre_activations.append(z)
        x = np.maximum(z, 0.0) if i < params.num_layers - 1 else z

    return x, MlpCache(list(params.layer_sizes), inputs, pre_activations, weights, sigmas)


def mlp_backward(params: MlpParams, cache: MlpCache, output_gradient: np.ndarray) -> MlpGrads:
    if list(cache.layer_sizes) != list(params.layer_sizes):
        raise er.ShapeError(f'Cache built for {cache.layer_sizes}, params are {params.layer_sizes}.')
    delta = np.asarray(output_gradient, dtype=np.float64)
    expected = cache.pre_activations[-1].shape
    if delta.ndim == 1 and expected[1] == 1:
        delta = delta.reshape(-1, 1)
    if delta.shape != expected:
        raise er.ShapeError(f'Output gradient has shape {delta.shape}, expected {expected}.')

    weight_grads: t.List[np.ndarray] = [None] * params.num_layers
    bias_grads: t.List[np.ndarray] = [None] * params.num_layers
    for i in reversed(range(params.num_layers)):
        if i < params.num_layers - 1:
            # subgradient of ReLU at exactly 0 is 0
            delta = delta * (cache.pre_activations[i] > 0.0)
        grad_effective = delta.T @ cache.inputs[i]
        sigma = cache.sigmas[i]
        if sigma is not None:
            state = params.spectral_states[i]
            inner = float(np.sum(grad_effective * cache.effective_weights[i]))
            weight_grads[i] = (grad_effective - inner * np.outer(state.left_vector, state.right_vector)) / sigma
        else:
            weight_grads[i] = grad_effective
        bias_grads[i] = delta.sum(axis=0)
        delta = delta @ cache.effective_weights[i]

    return MlpGrads(weight_grads, bias_grads, delta)
