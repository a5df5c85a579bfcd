"""Periodic Jacobi matrices: transfer matrix, discriminant and spectrum."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._errors import ConvergenceError, InputError
from .critpoly import poly_from_critical_values
from .polynomial import RealPolynomial, _fsum_convolve, real_roots
from .realset import IntervalUnion, normalize

__all__ = [
    "PeriodicJacobi",
    "TransferMatrix",
    "MOComb",
    "MeasureReport",
    "transfer_matrix",
    "discriminant",
    "spectrum",
    "comb_heights",
    "discriminant_from_heights",
    "rational_measure_check",
]


@dataclass(frozen=True)
class PeriodicJacobi:
    """Doubly infinite Jacobi matrix with diagonal ``q`` and off-diagonal ``p``.

    ``p[j]`` couples sites ``j - 1`` and ``j``; both sequences have period ``n``.
    """

    q: tuple[float, ...]
    p: tuple[float, ...]

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        p = tuple(float(v) for v in self.p)
        if not q or len(q) != len(p):
            raise InputError("q and p must be non-empty and of equal length")
        if not all(np.isfinite(q + p)):
            raise InputError("entries must be finite")
        if any(v <= 0 for v in p):
            raise InputError("off-diagonal entries p must be positive")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.q)

    def rotate(self, shift: int) -> "PeriodicJacobi":
        s = shift % self.n
        return PeriodicJacobi(self.q[s:] + self.q[:s], self.p[s:] + self.p[:s])


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 matrix of polynomials ``[[a, b], [c, d]]``."""

    a: RealPolynomial
    b: RealPolynomial
    c: RealPolynomial
    d: RealPolynomial

    def trace(self) -> RealPolynomial:
        return self.a + self.d

    def det(self) -> np.ndarray:
        """Coefficients of ``a d - b c`` (zero entries kept).

        Evaluated exactly in rational arithmetic from the stored entries and
        rounded once, so what remains is the rounding of the entries alone.
        """
        a, b, c, d = ([Fraction(float(v)) for v in m.coeffs] for m in (self.a, self.b, self.c, self.d))
        size = max(len(a) + len(d), len(b) + len(c)) - 1
        out = [Fraction(0)] * size
        for i, x in enumerate(a):
            for j, y in enumerate(d):
                out[i + j] += x * y
        for i, x in enumerate(b):
            for j, y in enumerate(c):
                out[i + j] -= x * y
        return np.array([float(v) for v in out])

    def __call__(self, z) -> np.ndarray:
        return np.array([[self.a(z), self.b(z)], [self.c(z), self.d(z)]])


@dataclass(frozen=True)
class MOComb:
    """Half-strip ``pi*m < Re < pi*k`` minus vertical slits of heights ``h'_j``."""

    m: int
    k: int
    heights: tuple[float, ...]

    def __post_init__(self):
        h = tuple(float(v) for v in self.heights)
        if len(h) != self.k - self.m - 1:
            raise InputError("need one height per interior integer m < j < k")
        if any(not (0 <= v < np.inf) for v in h):
            raise InputError("heights must be finite and non-negative")
        object.__setattr__(self, "heights", h)

    def to_json(self) -> dict:
        return {"range": [self.m, self.k], "heights": list(self.heights)}


def _poly_fsum(*terms) -> np.ndarray:
    size = max(len(t) for t in terms)
    cols = [np.pad(t, (0, size - len(t))) for t in terms]
    return np.array([math.fsum(col[k] for col in cols) for k in range(size)])


EXACT_PERIOD = 32


def _exact_transfer(J: PeriodicJacobi) -> list[np.ndarray]:
    """Transfer-matrix entries in rational arithmetic, each coefficient rounded once."""

    def lin(x, y, s=1):
        m = max(len(x), len(y))
        x = x + [Fraction(0)] * (m - len(x))
        y = y + [Fraction(0)] * (m - len(y))
        return [u + s * v for u, v in zip(x, y)]

    def shift(x):
        return [Fraction(0)] + x

    a, b, c, d = [Fraction(1)], [Fraction(0)], [Fraction(0)], [Fraction(1)]
    for j in range(J.n):
        p = Fraction(J.p[(j + 1) % J.n])
        q = Fraction(J.q[(j + 1) % J.n])
        # lower row: -p * (a, b) + ((z - q) / p) * (c, d)
        c2 = lin(lin(shift(c), [q * v for v in c], -1), [p * p * v for v in a], -1)
        d2 = lin(lin(shift(d), [q * v for v in d], -1), [p * p * v for v in b], -1)
        a, b, c, d = [v / p for v in c], [v / p for v in d], [v / p for v in c2], [v / p for v in d2]
    return [np.array([float(v) for v in e]) for e in (a, b, c, d)]


def transfer_matrix(J: PeriodicJacobi) -> TransferMatrix:
    """Product of one period of single-step matrices.

    Step ``j`` uses ``[[0, 1/p_{j+1}], [-p_{j+1}, (z - q_{j+1})/p_{j+1}]]``
    and later steps multiply from the left.  Periods up to ``EXACT_PERIOD``
    are multiplied exactly, longer ones with compensated sums.
    """
    if J.n <= EXACT_PERIOD:
        return TransferMatrix(*(RealPolynomial(x, allow_zero=True) for x in _exact_transfer(J)))
    a, b, c, d = np.ones(1), np.zeros(1), np.zeros(1), np.ones(1)
    for j in range(J.n):
        p = J.p[(j + 1) % J.n]
        q = J.q[(j + 1) % J.n]
        lower = np.array([-q / p, 1.0 / p])
        # [[0, 1/p], [-p, lower]] @ [[a, b], [c, d]]
        a, b, c, d = (
            c / p,
            d / p,
            _poly_fsum(-p * a, _fsum_convolve(lower, c)),
            _poly_fsum(-p * b, _fsum_convolve(lower, d)),
        )
    return TransferMatrix(*(RealPolynomial(x, allow_zero=True) for x in (a, b, c, d)))


def discriminant(J: PeriodicJacobi) -> RealPolynomial:
    """Half the trace of the transfer matrix; degree ``n``, positive leading coefficient."""
    return transfer_matrix(J).trace() / 2


def _band_edges(D: RealPolynomial):
    lo, hi = real_roots(D + 1), real_roots(D - 1)
    worst = max(lo.max_imag, hi.max_imag)
    if not (lo.all_real and hi.all_real):
        raise ConvergenceError(
            f"non-real root of the discriminant equation (|Im| = {worst:.3e})", residual=worst
        )
    return np.sort(np.concatenate([lo.real, hi.real]))


def _bands_from_edges(D, edges: np.ndarray) -> IntervalUnion:
    tol = 1e-12 * max(1.0, float(np.max(np.abs(edges))))
    distinct = [edges[0]]
    for x in edges[1:]:
        if x - distinct[-1] > tol:
            distinct.append(x)
    pieces = [(a, b) for a, b in zip(distinct, distinct[1:]) if abs(D(0.5 * (a + b))) <= 1.0]
    if not pieces:
        raise ConvergenceError("no band found between the discriminant edges")
    return normalize(pieces)


def _floquet_matrix(J: PeriodicJacobi, sign: float) -> np.ndarray:
    """Real symmetric ``n x n`` Floquet matrix with boundary phase ``sign = +-1``.

    Row ``k`` of the operator reads ``p_k u_{k-1} + q_k u_k + p_{k+1} u_{k+1}``,
    so the bond between sites ``j`` and ``j + 1`` carries ``p_{j+1}``.
    """
    n = J.n
    M = np.diag(np.asarray(J.q, dtype=float))
    for j in range(n):
        k = (j + 1) % n
        w = J.p[k] * (sign if j == n - 1 else 1.0)
        M[j, k] += w
        M[k, j] += w
    return M


def discriminant_values(J: PeriodicJacobi, x) -> np.ndarray:
    """``discriminant(J)`` at real points by multiplying numeric 2x2 steps."""
    x = np.asarray(x, dtype=float)
    a, b, c, d = (np.ones_like(x), np.zeros_like(x), np.zeros_like(x), np.ones_like(x))
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(J.n):
            p = J.p[(j + 1) % J.n]
            q = J.q[(j + 1) % J.n]
            low = (x - q) / p
            a, b, c, d = c / p, d / p, -p * a + low * c, -p * b + low * d
    return 0.5 * (a + d)


def spectrum(J: PeriodicJacobi) -> IntervalUnion:
    """Spectrum ``{z : |discriminant(z)| <= 1}`` as at most ``n`` bands.

    The edges, the solutions of ``discriminant = +-1``, are the eigenvalues of
    the periodic and antiperiodic Floquet matrices; this stays accurate for
    periods where the monomial discriminant is too ill-conditioned to root.
    """
    edges = np.sort(np.concatenate([
        np.linalg.eigvalsh(_floquet_matrix(J, 1.0)),
        np.linalg.eigvalsh(_floquet_matrix(J, -1.0)),
    ]))
    return _bands_from_edges(lambda x: discriminant_values(J, x), edges)


def comb_heights(D: RealPolynomial) -> tuple[float, ...]:
    """Slit heights ``arccosh|D(x_j)|`` at the ordered critical points of ``D``."""
    if D.degree < 2:
        return ()
    crit = real_roots(D.deriv())
    if not crit.all_real:
        raise ConvergenceError("discriminant has non-real critical points", residual=crit.max_imag)
    return tuple(float(np.arccosh(max(1.0, abs(v)))) for v in D(crit.real))


def discriminant_from_heights(heights: Sequence[float]) -> RealPolynomial:
    """Polynomial ``cos(theta)`` for the MO-comb with the given slit heights.

    Critical values are ``(-1)**j cosh(h_j)``; the result is rescaled so the
    outermost solutions of ``D**2 = 1`` are ``-1`` and ``+1``.  The sign
    follows from the critical values: ``D`` decreases to the right of its
    last critical point when ``j = n - 1`` is even (odd degree ``n``).
    """
    h = np.asarray(heights, dtype=float)
    if h.ndim != 1 or h.size < 1:
        raise InputError("need at least one height")
    if np.any(h < 0) or not np.all(np.isfinite(h)):
        raise InputError("heights must be finite and non-negative")
    j = np.arange(1, h.size + 1)
    values = (-1.0) ** j * np.cosh(h)
    P = poly_from_critical_values(values)
    edges = _band_edges(P)
    lo, hi = edges[0], edges[-1]
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    return P.compose_affine(half, mid)


@dataclass(frozen=True)
class MeasureReport:
    band_measures: tuple[float, ...]
    scaled: tuple[float, ...]
    max_distance: float
    tol: float = 1e-6

    @property
    def passed(self) -> bool:
        return self.max_distance < self.tol


def rational_measure_check(J: PeriodicJacobi, tol: float = 1e-6) -> MeasureReport:
    """Check that ``n`` times each band's harmonic measure is an integer."""
    from .potential import equilibrium

    data = equilibrium(spectrum(J))
    scaled = tuple(J.n * m for m in data.band_measures)
    dist = max(abs(v - round(v)) for v in scaled)
    return MeasureReport(data.band_measures, scaled, float(dist), tol)
