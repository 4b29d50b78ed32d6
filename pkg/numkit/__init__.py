from numkit._functional import *
from numkit._spectral import SpectralNormState, init_spectral_state, spectral_normalize, spectral_sigma
from numkit._mlp import (MlpParams, MlpCache, MlpGrads, init_mlp, zero_mlp, default_spectral_mask,
                         refresh_spectral_norm, effective_weights, mlp_forward, mlp_backward)
from numkit._optim import AdamState, init_adam, adam_step
from numkit._gradcheck import finite_diff_grad, relative_error
from numkit._checkpoint import (mlp_to_record, mlp_from_record, adam_to_record, adam_from_record,
                                write_checkpoint, read_checkpoint)
