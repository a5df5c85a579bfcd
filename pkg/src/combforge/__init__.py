"""Comb-function toolkit: equilibrium measures, least-deviation polynomials,
polynomials with prescribed critical values and periodic Jacobi spectra."""

__version__ = "0.1.0"

from ._errors import CombforgeError, ConvergenceError, InputError, QuadratureError
from .combs import (
    GeneralComb,
    cantor_comb,
    julia_comb,
    muckenhoupt_sup,
    sector_H,
    theta_eval,
    widom_sum,
)
from .critpoly import (
    CriticalSequence,
    VComb,
    critical_sequence_of,
    poly_from_critical_values,
    validate,
    vcomb_of,
)
from .estimators import (
    ChebyshevPolynomial,
    CriticalValuePolynomial,
    EquilibriumMeasure,
    PeriodicJacobiSpectrum,
    WeightedChebyshevPolynomial,
)
from .jacobi import (
    MOComb,
    PeriodicJacobi,
    discriminant,
    discriminant_from_heights,
    rational_measure_check,
    spectrum,
    transfer_matrix,
)
from .minimax import ball_monomial_error, comb_check, remez, verify_extremal, weighted_remez
from .polynomial import RealPolynomial, real_roots
from .potential import complex_green, density, equilibrium, green, green_comb
from .realset import IntervalUnion, gaps, homogeneity_eta, normalize
