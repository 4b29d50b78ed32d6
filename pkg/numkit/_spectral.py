import dataclasses as dc
import typing as t

import numpy as np

import errors as er

_ZERO_SIGMA = 1e-12


@dc.dataclass
class SpectralNormState:
    left_vector: np.ndarray
    right_vector: np.ndarray
    power_iterations: int = 1

    def __post_init__(self):
        if self.power_iterations < 1:
            raise er.ArgumentError(f'power_iterations must be >= 1. Received: {self.power_iterations}.')


def _unit(vector: np.ndarray) -> t.Optional[np.ndarray]:
    norm = np.linalg.norm(vector)
    if norm <= _ZERO_SIGMA:
        return None

    return vector / norm


def init_spectral_state(weight: np.ndarray, rng: np.random.Generator, power_iterations: int = 1,
                        warmup: int = 20) -> SpectralNormState:
    rows, cols = weight.shape
    state = SpectralNormState(left_vector=_unit(rng.standard_normal(rows)),
                              right_vector=_unit(rng.standard_normal(cols)),
                              power_iterations=power_iterations)
    if warmup > 0:
        _, state = spectral_normalize(weight, dc.replace(state, power_iterations=warmup))
        state = dc.replace(state, power_iterations=power_iterations)

    return state


def spectral_sigma(weight: np.ndarray, state: SpectralNormState) -> float:
    """σ estimate u^T W v for the stored vectors. Differentiable in W with gradient u v^T."""
    return float(state.left_vector @ weight @ state.right_vector)


def spectral_normalize(weight: np.ndarray,
                       state: SpectralNormState) -> t.Tuple[np.ndarray, SpectralNormState]:
    """Warm-started power iteration, returning W / σ and the updated unit vectors.

    A zero matrix is returned unchanged together with the previous state.
    """
    u, v = state.left_vector, state.right_vector
    for _ in range(state.power_iterations):
        new_v = _unit(weight.T @ u)
        if new_v is None:
            return weight.copy(), state
        new_u = _unit(weight @ new_v)
        if new_u is None:
            return weight.copy(), state
        u, v = new_u, new_v
    state = dc.replace(state, left_vector=u, right_vector=v)
    sigma = spectral_sigma(weight, state)
    if sigma <= _ZERO_SIGMA:
        return weight.copy(), state

    return weight / sigma, state
