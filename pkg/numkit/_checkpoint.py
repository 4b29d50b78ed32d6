"""Versioned JSON checkpoint records.

Field order of an MLP record: ``layer_sizes``, ``activation``, ``spectral_norm_mask``,
``weights`` (row-major nested lists), ``biases``, ``spectral`` (per layer ``null`` or
``{left_vector, right_vector, power_iterations}``). Adam records hold ``step_count``,
``learning_rate``, ``beta1``, ``beta2``, ``epsilon``, ``first_moment``, ``second_moment``.
Floats are written with ``repr`` precision so 64-bit values round-trip exactly.
"""
import pathlib as pl
import typing as t

import numpy as np

import constants as ct
import errors as er
import helpers as hp
import numkit._mlp as mlp
import numkit._optim as opt
import numkit._spectral as sn


def _array_from(data: t.Any, name: str) -> np.ndarray:
    array = np.array(data, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise er.NumericError(f'Checkpoint field {name} holds non-finite values.')
    return array


def mlp_to_record(params: mlp.MlpParams) -> t.Dict[str, t.Any]:
    spectral = []
    for state in params.spectral_states:
        if state is None:
            spectral.append(None)
        else:
            spectral.append({
                'left_vector': state.left_vector.tolist(),
                'right_vector': state.right_vector.tolist(),
                'power_iterations': int(state.power_iterations),
            })

    return {
        'layer_sizes': [int(size) for size in params.layer_sizes],
        'activation': params.activation,
        'spectral_norm_mask': [bool(flag) for flag in params.spectral_norm_mask],
        'weights': [w.tolist() for w in params.weights],
        'biases': [b.tolist() for b in params.biases],
        'spectral': spectral,
    }


def mlp_from_record(record: t.Dict[str, t.Any]) -> mlp.MlpParams:
    try:
        layer_sizes = [int(size) for size in record['layer_sizes']]
        weights = [_array_from(w, f'weights[{i}]').reshape(layer_sizes[i + 1], layer_sizes[i])
                   for i, w in enumerate(record['weights'])]
        biases = [_array_from(b, f'biases[{i}]').reshape(-1) for i, b in enumerate(record['biases'])]
        states = []
        for entry in record['spectral']:
            if entry is None:
                states.append(None)
            else:
                states.append(sn.SpectralNormState(left_vector=_array_from(entry['left_vector'], 'left_vector'),
                                                   right_vector=_array_from(entry['right_vector'], 'right_vector'),
                                                   power_iterations=int(entry['power_iterations'])))
        return mlp.MlpParams(layer_sizes, weights, biases, record['activation'],
                             list(record['spectral_norm_mask']), states)
    except (KeyError, TypeError) as e:
        raise er.ConfigError(f'Malformed network record: {e!r}.') from e


def adam_to_record(state: opt.AdamState) -> t.Dict[str, t.Any]:
    return {
        'step_count': int(state.step_count),
        'learning_rate': float(state.learning_rate),
        'beta1': float(state.beta1),
        'beta2': float(state.beta2),
        'epsilon': float(state.epsilon),
        'first_moment': [m.tolist() for m in state.first_moment],
        'second_moment': [v.tolist() for v in state.second_moment],
    }


def adam_from_record(record: t.Dict[str, t.Any]) -> opt.AdamState:
    try:
        return opt.AdamState(first_moment=[_array_from(m, 'first_moment') for m in record['first_moment']],
                             second_moment=[_array_from(v, 'second_moment') for v in record['second_moment']],
                             step_count=int(record['step_count']),
                             learning_rate=float(record['learning_rate']),
                             beta1=float(record['beta1']),
                             beta2=float(record['beta2']),
                             epsilon=float(record['epsilon']))
    except (KeyError, TypeError) as e:
        raise er.ConfigError(f'Malformed optimizer record: {e!r}.') from e


def write_checkpoint(path: t.Union[pl.Path, str], kind: str, payload: t.Dict[str, t.Any]) -> pl.Path:
    record = {'version': ct.CHECKPOINT_VERSION, 'kind': kind}
    record.update(payload)

    return hp.write_json(path, record)


def read_checkpoint(path: t.Union[pl.Path, str], kind: str) -> t.Dict[str, t.Any]:
    record = hp.read_json(path)
    if record.get('version') != ct.CHECKPOINT_VERSION:
        raise er.ConfigError(f'{path}: unsupported checkpoint version {record.get("version")}.')
    if record.get('kind') != kind:
        raise er.ConfigError(f'{path}: expected a {kind} checkpoint, found {record.get("kind")}.')

    return record
