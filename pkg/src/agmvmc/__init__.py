"""Ground-state solver for stoquastic spin Hamiltonians: an autoregressive
pairwise ansatz trained by variational Monte Carlo, with exact
small-system oracles (dense diagonalization, exact interaction
screening, free-fermion chain reference)."""

__version__ = "0.1.0"

from .ansatz import (conditional_prob, grad_log_prob, log_prob, log_prob_batch,
                     log_prob_delta, sample_batch, scores)
from .errors import ConfigError, ConvergenceError, NumericFault
from .exact import (ConditionalTable, DenseState, all_configs, closed_form_conditional_energy,
                    exact_conditionals, exact_weights, ground_state_dense,
                    variational_energy_exact)
from .freefermion import tfim_chain_energy
from .hamiltonian import (HamiltonianSpec, check_stoquastic, connected_configs,
                          diagonal_energies, diagonal_energy, permuted_spec, sample_disorder)
from .lattice import LatticeGraph, build_chain, build_square
from .localenergy import local_energies, local_energy
from .params import AgmParams, init_params, load_checkpoint, save_checkpoint, zero_params
from .runlog import RunLog, RunLogWriter, StepRecord, export_csv, read_runlog
from .screening import (PolyEnergy, ScreeningResult, UnboundedScreeningError, order_profile,
                        poly_to_csv, screen_exact)
from .symmetry import (SymmetryGroup, Transform, chain_reflection_group, global_flip_group,
                       group_from_generators, sym_log_prob, sym_sample, trivial_group)
from .vmc import (OptimizerState, TrainConfig, adam_update, estimate_energy,
                  estimate_gradient, gradient_from_batch, lr_at, train)
