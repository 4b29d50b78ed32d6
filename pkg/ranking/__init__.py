from ranking._model import (RankingModel, init_ranking_model, ranking_input_dim, ranking_inputs, raw_utility,
                            utility, progress_likelihood, log_progress_likelihood, anchor, kendall_tau,
                            mean_kendall_tau, input_gradient, ranking_to_record, ranking_from_record, save_ranking,
                            load_ranking)
from ranking._pairs import PairBatch, PairBatchLoader, sample_pair_batch
from ranking._loss import ranking_loss
from ranking._train import RankingTrainState, create_ranking_trainer, initial_inputs, train_ranking
