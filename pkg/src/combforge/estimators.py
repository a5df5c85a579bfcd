"""scikit-learn style front ends.

Each estimator keeps its settings as constructor parameters (so
``get_params`` / ``set_params`` / ``clone`` work) and stores fitted state in
trailing-underscore attributes.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import critpoly, jacobi, minimax, potential
from ._errors import InputError
from ._validation import as_float_array, check_degree, check_interval_union, check_points, check_values


class EquilibriumMeasure(BaseEstimator):
    """Equilibrium measure and Green function of a union of intervals.

    ``fit`` takes the bands, ``predict`` evaluates the Green function and
    ``transform`` returns ``[Re phi, Im phi]`` of the complex Green function.

    Examples
    --------
    >>> em = EquilibriumMeasure().fit([[-1, 1]])
    >>> round(em.capacity_, 12)
    0.5
    """

    def __init__(self, tol=1e-12, max_nodes=None):
        self.tol = tol
        self.max_nodes = max_nodes

    def fit(self, X, y=None):
        E = check_interval_union(X)
        self.equilibrium_ = potential.equilibrium(E, tol=self.tol, max_nodes=self.max_nodes)
        self.capacity_ = self.equilibrium_.capacity
        self.robin_ = self.equilibrium_.robin
        self.band_measures_ = np.array(self.equilibrium_.band_measures)
        self.gap_zeros_ = np.array(self.equilibrium_.gap_zeros)
        self.comb_ = potential.green_comb(self.equilibrium_)
        return self

    def predict(self, Z):
        check_is_fitted(self, "equilibrium_")
        return potential.green(self.equilibrium_, check_points(Z))

    def transform(self, Z):
        check_is_fitted(self, "equilibrium_")
        phi = potential.complex_green(self.equilibrium_, check_points(Z))
        return np.column_stack([phi.real, phi.imag])

    def density(self, T):
        check_is_fitted(self, "equilibrium_")
        return potential.density(self.equilibrium_, check_points(T, allow_complex=False))


class ChebyshevPolynomial(BaseEstimator):
    """Monic polynomial of least deviation from zero on a union of intervals."""

    def __init__(self, degree=1):
        self.degree = degree

    def fit(self, X, y=None):
        E = check_interval_union(X)
        self.set_ = E
        self.result_ = minimax.remez(E, check_degree(self.degree))
        self.coef_ = self.result_.P.coeffs.copy()
        self.deviation_ = self.result_.L
        self.extreme_points_ = np.array(self.result_.extreme_points)
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        return self.result_.evaluate(check_points(X, allow_complex=False))

    def verify(self):
        check_is_fitted(self, "result_")
        return minimax.verify_extremal(self.set_, self.result_)

    def comb(self):
        check_is_fitted(self, "result_")
        return minimax.comb_check(self.set_, self.result_)


class WeightedChebyshevPolynomial(BaseEstimator):
    """Least deviation on ``[0, 1]`` under the weight ``x**alpha (1-x)**beta``.

    ``fit`` ignores its arguments; they exist for pipeline compatibility.
    """

    def __init__(self, degree=1, alpha=0.0, beta=0.0):
        self.degree = degree
        self.alpha = alpha
        self.beta = beta

    def fit(self, X=None, y=None):
        self.result_ = minimax.weighted_remez(check_degree(self.degree), self.alpha, self.beta)
        self.coef_ = self.result_.P.coeffs.copy()
        self.deviation_ = self.result_.L
        self.extreme_points_ = np.array(self.result_.extreme_points)
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        return self.result_.evaluate(check_points(X, allow_complex=False))

    def weighted_error(self, X):
        check_is_fitted(self, "result_")
        return self.result_.weighted_error(check_points(X, allow_complex=False))


class CriticalValuePolynomial(BaseEstimator):
    """Polynomial with a prescribed up-down sequence of critical values."""

    def __init__(self, kind="up-down", strict=True, frame=(0.0, 1.0)):
        self.kind = kind
        self.strict = strict
        self.frame = frame

    def fit(self, X, y=None):
        seq = critpoly.CriticalSequence(tuple(check_values(X)), self.kind)
        out = critpoly.construct_from_critical_values(seq, strict=self.strict, frame=tuple(self.frame))
        self.poly_ = out.poly
        self.coef_ = out.poly.coeffs.copy()
        self.critical_points_ = np.array(out.critical_points)
        self.residual_ = out.residual
        return self

    def predict(self, X):
        check_is_fitted(self, "poly_")
        return self.poly_(check_points(X, allow_complex=False))


class PeriodicJacobiSpectrum(BaseEstimator):
    """Band spectrum of a periodic Jacobi matrix given as rows ``(q_j, p_j)``."""

    def fit(self, X, y=None):
        arr = as_float_array(X)
        if arr.ndim != 2 or arr.shape[1] != 2 or not np.all(np.isfinite(arr)):
            raise InputError("expected an (n, 2) array of finite (q, p) rows")
        self.matrix_ = jacobi.PeriodicJacobi(tuple(arr[:, 0]), tuple(arr[:, 1]))
        self.discriminant_ = jacobi.discriminant(self.matrix_)
        self.spectrum_ = jacobi.spectrum(self.matrix_)
        self.bands_ = np.array(self.spectrum_.bands)
        self.comb_heights_ = np.array(jacobi.comb_heights(self.discriminant_))
        return self

    def predict(self, Z):
        """Discriminant values; ``|predict(z)| <= 1`` exactly on the spectrum."""
        check_is_fitted(self, "discriminant_")
        return self.discriminant_(check_points(Z, allow_complex=False))
