"""Metropolis-Hastings reversiblizations of finite-state continuous-time Markov generators."""

from .core import (
    Generator,
    additive_reversiblization,
    dirichlet_form,
    from_off_diagonal,
    inner_product,
    is_reversible,
    peskun_dominates,
    stationary_distribution,
    time_reversal,
    validate_generator,
)
from .hitting import (
    average_hitting_time,
    average_hitting_time_spectral,
    capacity,
    commute_time,
    expected_hitting_times,
    hitting_laplace,
)
from .kernels import MhPair, build_m1, build_m2, convex_combination, distance_to_reversible, l1_distance
from .mis import build_mis, mis_cross_validate, mis_spectrum
from .mixing import bd_sst, separation_distance, transition_semigroup, tv_mixing_time
from .spectral import relaxation_time, reversible_spectrum, spectral_gap
from .variance import asymptotic_variance, rate_function_reversible, rate_function_variational

__version__ = "0.1.0"
