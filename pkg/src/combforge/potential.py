"""Equilibrium measure and Green function of a finite union of intervals.

For ``E`` with ``k`` bands and endpoints ``e_0 < ... < e_{2k-1}`` put
``R(t) = prod (t - e_i)``.  The equilibrium density is
``|Q(t)| / (pi sqrt|R(t)|)`` where ``Q`` is the monic polynomial of degree
``k - 1`` whose integrals ``Q / sqrt|R|`` vanish over every gap.

All integrals use the substitution ``t = mid + half*cos(phi)`` on each band
or gap, which absorbs both square-root endpoint singularities.  The
logarithmic potential of a band is then evaluated by product integration:
with the cosine coefficients ``g_n`` of the density in ``phi`` and the
Joukowski variable ``w`` of ``z``,

    int log(z - t) dmu = pi*g_0*log(half*w/2) - pi * sum_n g_n / (n w^n),

which is exact for the truncated series and stays accurate on ``E`` itself.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as ncheb
from numpy.polynomial import polynomial as npoly
from scipy.fft import dct
from scipy.optimize import brentq

from ._errors import InputError, QuadratureError
from .polynomial import RealPolynomial
from .realset import IntervalUnion, gaps

__all__ = [
    "EquilibriumData",
    "GreenComb",
    "equilibrium",
    "density",
    "green",
    "complex_green",
    "green_comb",
    "MAX_BANDS",
]

MAX_BANDS = 64
_START_NODES = 32
_DEFAULT_MAX_NODES = 2**17


def _max_nodes() -> int:
    raw = os.environ.get("COMBFORGE_MAX_NODES")
    if raw is None:
        return _DEFAULT_MAX_NODES
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"COMBFORGE_MAX_NODES must be an integer, got {raw!r}") from None
    if value < _START_NODES:
        raise InputError(f"COMBFORGE_MAX_NODES must be at least {_START_NODES}")
    return value


@dataclass(frozen=True)
class GreenComb:
    """Half-strip over ``base`` minus vertical slits ``(position, height)``."""

    base: tuple[float, float]
    slits: tuple[tuple[float, float], ...]

    def __post_init__(self):
        a, b = self.base
        xs = [x for x, _ in self.slits]
        if any(not a < x < b for x in xs) or any(x1 >= x2 for x1, x2 in zip(xs, xs[1:])):
            raise InputError("slit positions must increase strictly inside the base")
        if any(not (0 < h < np.inf) for _, h in self.slits):
            raise InputError("slit heights must be positive and finite")

    def to_json(self) -> dict:
        return {"base": list(self.base), "slits": [[x, h] for x, h in self.slits]}


@dataclass(frozen=True)
class EquilibriumData:
    """Equilibrium measure of ``E`` together with its Green-function constants."""

    E: IntervalUnion
    Q: RealPolynomial
    gap_zeros: tuple[float, ...]
    robin: float
    capacity: float
    band_measures: tuple[float, ...]
    total_degree_R: int
    nodes: int
    _qcheb: np.ndarray = field(repr=False, compare=False)
    _qscale: float = field(repr=False, compare=False)
    _gcoef: tuple[np.ndarray, ...] = field(repr=False, compare=False)

    def q(self, t):
        """Evaluate ``Q`` stably through its Chebyshev representation."""
        s = (np.asarray(t) - self._hull_mid) / self._hull_half
        return ncheb.chebval(s, self._qcheb) * self._qscale

    @property
    def _hull_mid(self) -> float:
        return 0.5 * (self.E.inf + self.E.sup)

    @property
    def _hull_half(self) -> float:
        return 0.5 * self.E.diam


def _phi_nodes(N: int) -> np.ndarray:
    return (np.arange(N) + 0.5) * np.pi / N


def _inv_sqrt_other(t: np.ndarray, others: np.ndarray) -> np.ndarray:
    """``1 / sqrt(prod |t - e|)`` over the given endpoints, via log sums."""
    if others.size == 0:
        return np.ones_like(t)
    return np.exp(-0.5 * np.sum(np.log(np.abs(t[:, None] - others[None, :])), axis=1))


def _solve(E: IntervalUnion, N: int):
    edges = E.edges
    k = E.n_bands
    mid, half = 0.5 * (E.inf + E.sup), 0.5 * E.diam
    phi = _phi_nodes(N)
    cphi = np.cos(phi)

    if k == 1:
        qcheb = np.array([1.0])
        qscale = 1.0
    else:
        A = np.empty((k - 1, k))
        for i, (lo, hi) in enumerate(gaps(E)):
            m, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
            t = m + h * cphi
            others = np.delete(edges, [2 * i + 1, 2 * i + 2])
            wgt = _inv_sqrt_other(t, others)
            V = ncheb.chebvander((t - mid) / half, k - 1)
            A[i] = (np.pi / N) * (V * wgt[:, None]).sum(axis=0)
        rhs = -A[:, k - 1]
        try:
            a = np.linalg.solve(A[:, : k - 1], rhs)
        except np.linalg.LinAlgError:
            raise QuadratureError("singular gap-period system") from None
        qcheb = np.append(a, 1.0)
        # T_{k-1}((t-mid)/half) has leading coefficient 2**(k-2) / half**(k-1)
        qscale = half ** (k - 1) / 2.0 ** (k - 2)

    gcoef = []
    for i, (lo, hi) in enumerate(E.bands):
        m, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
        t = m + h * cphi
        others = np.delete(edges, [2 * i, 2 * i + 1])
        g = np.abs(ncheb.chebval((t - mid) / half, qcheb) * qscale) * _inv_sqrt_other(t, others) / np.pi
        c = dct(g, type=2) / N
        c[0] *= 0.5
        gcoef.append(c)
    return qcheb, qscale, tuple(gcoef)


def _band_log_potential(E: IntervalUnion, gcoef, z: np.ndarray) -> np.ndarray:
    """Complex ``sum_i int_{band i} log(z - t) dmu(t)`` (principal branch)."""
    z = np.asarray(z, dtype=complex)
    total = np.zeros(z.shape, dtype=complex)
    for (lo, hi), c in zip(E.bands, gcoef):
        m, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
        u = (z - m) / h
        # u -/+ 1 from the endpoint differences, which are exact at the edges
        w = u + np.sqrt((z - hi) / h) * np.sqrt((z - lo) / h)
        w = np.where(np.abs(w) < 1, 1 / w, w)
        cut = len(c)
        tail = np.flatnonzero(np.abs(c) > 1e-18 * np.abs(c).max())
        if tail.size:
            cut = tail[-1] + 1
        n = np.arange(1, cut)
        series = np.zeros(cut, dtype=float)
        series[1:] = c[1:cut] / n
        total += np.pi * c[0] * np.log(h * w / 2) - np.pi * npoly.polyval(1 / w, series)
    return total


def equilibrium(E: IntervalUnion, tol: float = 1e-12, max_nodes: int | None = None) -> EquilibriumData:
    """Equilibrium measure, Robin constant and capacity of ``E``.

    Node counts per band and gap double from 32 until successive Robin
    constants differ by less than ``tol``.

    Raises
    ------
    QuadratureError
        If the node cap (``COMBFORGE_MAX_NODES``, default 131072) is hit
        first; ``residual`` holds the last change in the Robin constant.
    """
    if not isinstance(E, IntervalUnion):
        raise InputError("equilibrium expects an IntervalUnion")
    if E.n_bands > MAX_BANDS:
        raise InputError(f"at most {MAX_BANDS} bands are supported")
    cap = max_nodes if max_nodes is not None else _max_nodes()
    anchor = np.array([E.sup + 0j])

    N = _START_NODES
    prev = None
    while True:
        qcheb, qscale, gcoef = _solve(E, N)
        gamma = -float(_band_log_potential(E, gcoef, anchor).real[0])
        if prev is not None and abs(gamma - prev) < tol:
            break
        if 2 * N > cap:
            change = abs(gamma - prev) if prev is not None else float("inf")
            raise QuadratureError(
                f"Robin constant not converged with {N} nodes per interval (change {change:.3e})",
                residual=change,
            )
        prev = gamma
        N *= 2

    mid, half = 0.5 * (E.inf + E.sup), 0.5 * E.diam
    qpoly = ncheb.cheb2poly(qcheb)
    # change variable s = (t - mid)/half into monomials in t
    coeffs = np.zeros(1)
    for c in qpoly[::-1]:
        coeffs = npoly.polyadd(npoly.polymul(coeffs, [-mid / half, 1 / half]), [c])
    coeffs = coeffs * qscale
    coeffs[-1] = 1.0
    Q = RealPolynomial(coeffs)

    def qfun(t):
        return ncheb.chebval((t - mid) / half, qcheb)

    zeros = tuple(float(brentq(qfun, lo, hi, xtol=1e-15, rtol=1e-15)) for lo, hi in gaps(E))
    measures = tuple(float(np.pi * c[0]) for c in gcoef)
    return EquilibriumData(
        E=E,
        Q=Q,
        gap_zeros=zeros,
        robin=gamma,
        capacity=float(np.exp(-gamma)),
        band_measures=measures,
        total_degree_R=2 * E.n_bands,
        nodes=N,
        _qcheb=qcheb,
        _qscale=qscale,
        _gcoef=gcoef,
    )


def density(data: EquilibriumData, t):
    """Equilibrium density ``|Q(t)| / (pi sqrt|R(t)|)`` at interior points of ``E``."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    inside = np.zeros(t_arr.shape, dtype=bool)
    for a, b in data.E.bands:
        inside |= (t_arr > a) & (t_arr < b)
    if not inside.all():
        raise InputError("density is only defined strictly inside a band")
    val = np.abs(data.q(t_arr)) * _inv_sqrt_other(t_arr, data.E.edges) / np.pi
    return float(val[0]) if np.ndim(t) == 0 else val


def _as_complex(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise InputError("evaluation points must be finite")
    return np.atleast_1d(arr), arr.ndim == 0


def green(data: EquilibriumData, z):
    """Green function of the complement of ``E`` with pole at infinity."""
    zz, scalar = _as_complex(z)
    zz = zz.real + 1j * np.abs(zz.imag)
    g = _band_log_potential(data.E, data._gcoef, zz).real + data.robin
    return float(g[0]) if scalar else g


def complex_green(data: EquilibriumData, z):
    """Analytic ``phi`` on the upper half-plane with ``Im phi = G``.

    ``Re phi = int (pi - arg(z - t)) dmu(t)``, so the base of the comb is
    ``(0, pi)`` and ``Re phi`` increases from left to right.
    """
    zz, scalar = _as_complex(z)
    if np.any(zz.imag <= 0):
        raise InputError("complex_green needs Im z > 0")
    phi = np.pi + 1j * (_band_log_potential(data.E, data._gcoef, zz) + data.robin)
    return complex(phi[0]) if scalar else phi


def green_comb(data: EquilibriumData) -> GreenComb:
    """Slits at cumulative harmonic measure times pi, heights ``G(c_j)``."""
    cum = np.cumsum(data.band_measures)[:-1]
    heights = green(data, np.array(data.gap_zeros)) if data.gap_zeros else []
    slits = tuple((float(np.pi * x), float(h)) for x, h in zip(cum, heights))
    return GreenComb(base=(0.0, float(np.pi)), slits=slits)
