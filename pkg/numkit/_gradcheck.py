import typing as t

import numpy as np

import errors as er


def finite_diff_grad(loss_fn: t.Callable[[t.List[np.ndarray]], float], params: t.Sequence[np.ndarray],
                     h: float = 1e-5) -> t.List[np.ndarray]:
    """Central differences (loss(p + h) - loss(p - h)) / 2h for every scalar entry of every array."""
    if h <= 0:
        raise er.ArgumentError(f'Step h must be positive. Received: {h}.')
    params = [np.array(p, dtype=np.float64) for p in params]
    grads = []
    for param in params:
        grad = np.zeros_like(param)
        flat, flat_grad = param.reshape(-1), grad.reshape(-1)
        for j in range(flat.size):
            original = flat[j]
            flat[j] = original + h
            plus = float(loss_fn(params))
            flat[j] = original - h
            minus = float(loss_fn(params))
            flat[j] = original
            if not (np.isfinite(plus) and np.isfinite(minus)):
                raise er.NumericError(f'Loss is not finite around entry {j}: {plus}, {minus}.')
            flat_grad[j] = (plus - minus) / (2.0 * h)
        grads.append(grad)

    return grads


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-5) -> float:
    """Largest elementwise |a - n| / max(|a|, |n|, floor).

    Entries below `floor` in both arrays are compared in absolute terms, so a relative tolerance `tol`
    becomes the absolute bound `floor * tol` there.
    """
    if floor <= 0:
        raise er.ArgumentError(f'floor must be positive. Received: {floor}.')
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)

    return float(np.max(np.abs(analytic - numeric) / scale)) if analytic.size else 0.0
