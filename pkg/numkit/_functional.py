import typing as t

import numpy as np

import constants as ct
import errors as er

ArrayLike = t.Union[float, np.ndarray]


def as_matrix(data: t.Any, cols: t.Optional[int] = None, name: str = 'batch') -> np.ndarray:
    """Validate a row-major batch of 64-bit reals. A single vector is promoted to one row."""
    matrix = np.asarray(data, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2:
        raise er.ShapeError(f'{name} must be 2D, got shape {matrix.shape}.')
    if cols is not None and matrix.shape[1] != cols:
        raise er.ShapeError(f'{name} has {matrix.shape[1]} columns, expected {cols}.')
    if not np.all(np.isfinite(matrix)):
        raise er.NumericError(f'{name} contains non-finite entries.')

    return matrix


def sigmoid(x: ArrayLike) -> ArrayLike:
    return np.exp(stable_log_sigmoid(x))


def stable_log_sigmoid(x: ArrayLike) -> ArrayLike:
    """log(1 / (1 + exp(-x))) without overflow."""
    return -np.logaddexp(0.0, -np.asarray(x, dtype=np.float64))


def clamp_probability(p: ArrayLike, eps: float = ct.CLAMP_EPSILON) -> ArrayLike:
    return np.clip(p, eps, 1.0 - eps)


def clamped_log_probability(logits: ArrayLike, eps: float = ct.CLAMP_EPSILON) -> ArrayLike:
    """log σ(logits) restricted to [log ε, log(1-ε)]."""
    return np.clip(stable_log_sigmoid(logits), np.log(eps), np.log1p(-eps))


def clamped_logit(logits: ArrayLike, eps: float = ct.CLAMP_EPSILON) -> ArrayLike:
    """log D - log(1 - D) for D = σ(logits) clamped to [ε, 1-ε]."""
    bound = np.log1p(-eps) - np.log(eps)
    return np.clip(logits, -bound, bound)


def bce_loss(p: ArrayLike, y: ArrayLike, eps: float = ct.CLAMP_EPSILON) -> ArrayLike:
    p = clamp_probability(np.asarray(p, dtype=np.float64), eps)
    y = np.asarray(y, dtype=np.float64)

    return -y * np.log(p) - (1.0 - y) * np.log1p(-p)


def bce_with_logits(logits: np.ndarray, labels: np.ndarray) -> t.Tuple[float, np.ndarray]:
    """Mean binary cross-entropy on logits and its gradient with respect to each logit."""
    logits = np.asarray(logits, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels, dtype=np.float64).reshape(-1)
    if logits.shape != labels.shape:
        raise er.ShapeError(f'{logits.shape[0]} logits for {labels.shape[0]} labels.')
    if not np.all(np.isfinite(logits)):
        raise er.NumericError('Non-finite logit.')
    n = logits.shape[0]
    losses = -labels * stable_log_sigmoid(logits) - (1.0 - labels) * stable_log_sigmoid(-logits)
    grad = (sigmoid(logits) - labels) / n

    return float(losses.mean()), grad


def mixup_pair(x1: np.ndarray, y1: ArrayLike, x2: np.ndarray, y2: ArrayLike,
               lam: float) -> t.Tuple[np.ndarray, ArrayLike]:
    if not 0.0 <= lam <= 1.0:
        raise er.ArgumentError(f'Mixup lambda must lie in [0, 1]. Received: {lam}.')
    x1, x2 = np.asarray(x1, dtype=np.float64), np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape:
        raise er.ShapeError(f'Cannot mix shapes {x1.shape} and {x2.shape}.')
    if lam == 1.0:
        return x1.copy(), y1

    return lam * x1 + (1.0 - lam) * x2, lam * np.asarray(y1) + (1.0 - lam) * np.asarray(y2)


def mixup_batch(inputs: t.Sequence[np.ndarray], labels: np.ndarray, rng: np.random.Generator,
                alpha: float = 1.0) -> t.Tuple[t.List[np.ndarray], np.ndarray, np.ndarray]:
    """Mix every row with a partner row of a random permutation; one λ ~ Beta(α, α) per row.

    All arrays in `inputs` are mixed with the same λ and partner, so paired inputs stay paired.
    Returns the mixed inputs, mixed labels and the λ drawn per row.
    """
    labels = np.asarray(labels, dtype=np.float64)
    n = labels.shape[0]
    lam = rng.beta(alpha, alpha, size=n)
    partner = rng.permutation(n)
    mixed = [lam[:, None] * x + (1.0 - lam[:, None]) * x[partner] for x in inputs]
    mixed_labels = lam * labels + (1.0 - lam) * labels[partner]

    return mixed, mixed_labels, lam
