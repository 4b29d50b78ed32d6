import typing as t

import numkit as nk
import discrim._batch as db
import discrim._model as dm


def discriminator_loss(disc: dm.Discriminator, batch: db.ClassifierBatch) -> t.Tuple[float, nk.MlpGrads]:
    outputs, cache = nk.mlp_forward(disc.net, batch.states)
    loss, grad = nk.bce_with_logits(outputs[:, 0], batch.labels)

    return loss, nk.mlp_backward(disc.net, cache, grad.reshape(-1, 1))
