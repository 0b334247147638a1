"""Entropy diagrams and uncertainty bounds for pairs of finite observables.

The package stores the analysis matrix W = U^dagger of an overlap unitary
U_ij = <x_i|y_j>, so that a state psi in the x-basis has outcome
distributions pX = |psi|^2 and pY = |W psi|^2.
"""

from .entropy import (EntropyPoint, born_distributions, discrete_variance,
                      dual_order, entropy_pair, entropy_pairs_rows,
                      is_dual_pair, renyi, renyi_gradient, renyi_rows,
                      von_neumann)
from .equality import (EqualityReport, OverlapData, SupportPair, SupportScan,
                       berta_slack, boundary_half_inf_deficit,
                       check_equality_state, find_equality_supports,
                       fourier_equality_states, mu_deficit, overlap_data,
                       phase_equalizable, tensor_equality)
from .errors import (EntrodiagError, Infeasible, InvalidInput, NoConvergence,
                     NumericalFailure, SearchFailed)
from .frontier import (DiagramSample, FrontierCurve, MinimizeOptions,
                       d2_exact_curve, dominating_pure, englert_curve,
                       englert_states, extremality_residual,
                       frontier_deviation, frontier_value, frontier_witnesses,
                       min_halpha_given_hbeta, pareto_lower, phase_gradient_fd,
                       reduce_2x2_to_rotation, rotation_pair, sample_diagram)
from .numerics import (MixedEnsemble, SeededRng, haar_unitary, hermitian_eigen,
                       is_unitary, sample_state, sample_states, tensor_product)
from .observables import (AbelianGroup, ObservablePair, annihilator,
                          bicharacter, builtin, coset_representatives, dephase,
                          fourier_cyclic, fourier_group, indicator_state,
                          is_hadamard, load_unitary, random_unitary,
                          save_unitary, subgroups, translate_modulate)
from .conjectures import (ProbeReport, probe_alpha_independence,
                          probe_fourier_decomposition, probe_product_states,
                          probe_rrs_sufficiency)

__version__ = "0.1.0"
