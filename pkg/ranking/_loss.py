import typing as t

import numpy as np

import numkit as nk
import ranking._model as rm
import ranking._pairs as rp


def ranking_loss(model: rm.RankingModel, batch: rp.PairBatch, mixup: bool = False,
                 rng: t.Optional[np.random.Generator] = None,
                 mixup_alpha: float = 1.0) -> t.Tuple[float, nk.MlpGrads]:
    """Bradley-Terry negative log-likelihood, i.e. BCE on u(first) - u(second) against the pair label.

    Both pair members go through one forward pass. With mixup, both members share λ and partner.
    """
    first, second, labels = batch.first_states, batch.second_states, batch.labels
    if mixup:
        (first, second), labels, _ = nk.mixup_batch([first, second], labels, rng, mixup_alpha)
    n = labels.shape[0]
    outputs, cache = nk.mlp_forward(model.net, np.vstack([first, second]))
    difference = outputs[:n, 0] - outputs[n:, 0]
    loss, grad = nk.bce_with_logits(difference, labels)
    output_grad = np.concatenate([grad, -grad]).reshape(-1, 1)

    return loss, nk.mlp_backward(model.net, cache, output_grad)
