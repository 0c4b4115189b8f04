"""Path-norm complexity measures and generalization bounds for shallow nets."""

from .bounds import (BoundInputs, BoundValue, all_bound_values, cm_constant,
                     cm_prime_constant, comparator_bound, gen_bound_pn,
                     gen_bound_spn, rad_lower, rad_upper_frob, rad_upper_path)
from .datasets import (Dataset, RawImageSet, TaskSpec, build_binary_task,
                       parse_cifar10_bin, parse_idx, parse_idx_images,
                       parse_idx_labels, subsample)
from .linalg import (SpectralResult, fork_rng, frobenius_norm, make_rng,
                     pq_norm, row_l2_norms, sample_signs, spectral_norm)
from .measures import (MeasureReport, init_activation_term, measure_report,
                       path_norm, standard_path_norm)
from .model import (ACTIVATIONS, RELU, SIGMOID, TANH, Activation, Checkpoint,
                    InitSnapshot, SnnParams, checkpoint_load, checkpoint_save,
                    forward, get_activation, init_kaiming)
from .rademacher import (RadConfig, RadEstimate, closed_form_linear_sup,
                         closed_form_toplayer_sup, enumerate_signs,
                         khintchine_sandwich_check, mc_rad_estimate,
                         pga_sup_estimate, project_fro_ball)
from .trainer import (TrainConfig, TrainReport, bce_logits, ramp_risk,
                      sgd_train, zero_one_error)

__version__ = "0.1.0"
