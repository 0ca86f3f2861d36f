"""Computational laboratory for Beurling generalized number systems.

A system is a pair of measures ``dN`` (generalized integers) and ``dPi``
(Riemann prime distribution) on [1, oo) linked by ``dN = exp*(dPi)``.  The
package builds such systems, evaluates their zeta functions by several
independent routes, samples boundary behaviour on Re s = 1 and measures
remainder profiles (raw and Cesaro-Riesz averaged).
"""

from .asymptotics import (
    CesaroConfig,
    PiecewiseLinear,
    Remainder,
    RemainderProfile,
    cesaro_mean,
    cesaro_remainder_profile,
    estimate_density_a,
    laplace_delta_check,
    remainder_profile,
    variation_bound_check,
)
from .errors import (
    BeurlingError,
    DivergenceError,
    DomainError,
    FitError,
    NoDensityError,
    ParameterError,
    PreconditionError,
    ProfileError,
    RangeError,
    SignError,
    SizeError,
    TailTooWeakError,
)
from .gallery import (
    asymptote_example1,
    build_system,
    gallery_names,
    hardy_ramanujan,
    partition_numbers,
    system_continuous_alpha,
    system_ordinary,
    system_powers_of_two,
    system_sparse_rational_primes,
)
from .logint import Li, li
from .measures import (
    GeneralizedNumberSystem,
    HalfLineMeasure,
    PowerKernel,
    TailModel,
    cumulative,
    exp_star,
    remainder_transform,
    stieltjes_integral,
)
from .primedist import (
    chebyshev_gap_check,
    mobius,
    pi_from_riemann_pi,
    riemann_pi_from_pi,
    riemann_pi_measure,
)
from .semigroup import PrimeSequence, count_N, count_pi, enumerate_integers
from .sieve import primes_upto
from .zeta import (
    boundary_scan,
    classify_scans,
    fit_growth_exponent,
    g1_function,
    g_derivative,
    g_function,
    inequality_341,
    inverse_zeta_scan,
    zeta_dirichlet,
    zeta_euler,
    zeta_exp_pi,
)

__version__ = "0.1.0"

__all__ = [
    "BeurlingError",
    "CesaroConfig",
    "DivergenceError",
    "DomainError",
    "FitError",
    "GeneralizedNumberSystem",
    "HalfLineMeasure",
    "Li",
    "NoDensityError",
    "ParameterError",
    "PiecewiseLinear",
    "PowerKernel",
    "PreconditionError",
    "PrimeSequence",
    "ProfileError",
    "RangeError",
    "Remainder",
    "RemainderProfile",
    "SignError",
    "SizeError",
    "TailModel",
    "TailTooWeakError",
    "asymptote_example1",
    "boundary_scan",
    "build_system",
    "cesaro_mean",
    "cesaro_remainder_profile",
    "chebyshev_gap_check",
    "classify_scans",
    "count_N",
    "count_pi",
    "cumulative",
    "enumerate_integers",
    "estimate_density_a",
    "exp_star",
    "fit_growth_exponent",
    "g1_function",
    "g_derivative",
    "g_function",
    "gallery_names",
    "hardy_ramanujan",
    "inequality_341",
    "inverse_zeta_scan",
    "laplace_delta_check",
    "li",
    "mobius",
    "partition_numbers",
    "pi_from_riemann_pi",
    "primes_upto",
    "remainder_profile",
    "remainder_transform",
    "riemann_pi_from_pi",
    "riemann_pi_measure",
    "stieltjes_integral",
    "system_continuous_alpha",
    "system_ordinary",
    "system_powers_of_two",
    "system_sparse_rational_primes",
    "variation_bound_check",
    "zeta_dirichlet",
    "zeta_euler",
    "zeta_exp_pi",
]
