from discrim._model import (Discriminator, init_discriminator, logits, classify, density_ratio, negate_logit,
                            discriminator_to_record, discriminator_from_record, save_discriminator,
                            load_discriminator)
from discrim._batch import (EXPERT, GOAL_STATES, COUNTERFACTUAL, MODES, ClassifierBatch, ExpertSampler, goal_states,
                            sample_classifier_batch, build_classifier_batch)
from discrim._loss import discriminator_loss
from discrim._train import (DiscriminatorTrainState, discriminator_step, init_discriminator_state,
                            update_discriminator, ClassifierBatchLoader, create_discriminator_trainer,
                            train_discriminator_offline)
