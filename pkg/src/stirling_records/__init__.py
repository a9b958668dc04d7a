"""Exact computation and cross-verification of Stirling numbers of the second
kind through a record-time representation and the algebraic identity behind it."""

from .exact_arith import BoundExceeded, IdentityViolation, binomial, factorial
from .partition_oracle import PartitionQuery, count_set_partitions, stirling_recurrence
from .stirling_engine import (
    dilcher_multiple_sum,
    harmonic_alt_sum,
    s2_enum,
    s2_nested,
    stirling,
    stirling_euler,
    stirling_record_dp,
    stirling_record_sum,
    stirling_via_duality,
)
from .poly_engine import (
    Polynomial,
    eval_poly,
    kappa,
    poly_f,
    poly_g,
    poly_g_stirling,
    rho,
    signed_g,
    stirling_from_f_inversion,
)
from .ballbox_sim import (
    SimConfig,
    SimResult,
    brute_force_prob,
    exact_prob_incl_excl,
    exact_prob_record_times,
    simulate,
)
from .identity_suite import GridSpec, IdentityReport, run_suite

__version__ = "0.1.0"
