"""Monic polynomials of least deviation from zero.

:func:`remez` handles finite unions of intervals, :func:`weighted_remez` the
weight ``x**alpha * (1 - x)**beta`` on ``[0, 1]``.  Both run the same
exchange engine in a variable ``s`` scaled to ``[-1, 1]``, with the
polynomial kept in the Chebyshev basis.  The exchange first runs on a dense
grid and then continues on exact extrema (roots of the derivative of the
weighted error), which is where the final accuracy comes from.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as ncheb
from numpy.polynomial import polynomial as npoly

from ._errors import ConvergenceError, InputError
from .polynomial import RealPolynomial, real_roots
from .realset import IntervalUnion, normalize

__all__ = [
    "ChebyshevResult",
    "ExtremalReport",
    "CombReport",
    "remez",
    "weighted_remez",
    "verify_extremal",
    "comb_check",
    "ball_monomial_error",
    "MAX_DEGREE",
]

MAX_DEGREE = 200
GRID_PER_BAND = 2048


@dataclass(frozen=True)
class ChebyshevResult:
    """Monic extremal polynomial with its deviation and extremal set.

    ``cheb_coeffs`` represent ``P`` in the Chebyshev basis of the variable
    ``s = (x - center) / radius``; :meth:`evaluate` uses them and is the
    numerically preferable way to evaluate high-degree results.
    """

    P: RealPolynomial
    L: float
    extreme_points: tuple[float, ...]
    signs: tuple[int, ...]
    alpha: float = 0.0
    beta: float = 0.0
    cheb_coeffs: np.ndarray | None = field(default=None, repr=False, compare=False)
    center: float = field(default=0.0, repr=False)
    radius: float = field(default=1.0, repr=False)
    iterations: int = field(default=0, repr=False)

    @property
    def degree(self) -> int:
        return self.P.degree

    def evaluate(self, x):
        if self.cheb_coeffs is None:
            return self.P(x)
        s = (np.asarray(x, dtype=float) - self.center) / self.radius
        return self.radius ** self.degree * ncheb.chebval(s, self.cheb_coeffs)

    def weighted_error(self, x):
        x = np.asarray(x, dtype=float)
        return x**self.alpha * (1 - x) ** self.beta * self.evaluate(x)


def _alternating(xs: np.ndarray, es: np.ndarray, n_ref: int):
    """Pick ``n_ref`` alternating points of largest error.

    One point per sign run (the largest, leftmost on ties); surplus points
    are dropped from whichever end carries the smaller error (the right end
    on ties).
    """
    keep = es != 0
    xs, es = xs[keep], es[keep]
    sx, se = [], []
    run_start = 0
    sign = np.sign(es)
    for i in range(1, len(es) + 1):
        if i == len(es) or sign[i] != sign[run_start]:
            j = run_start + int(np.argmax(np.abs(es[run_start:i])))
            sx.append(xs[j])
            se.append(es[j])
            run_start = i
    while len(sx) > n_ref:
        if abs(se[0]) < abs(se[-1]):
            sx.pop(0)
            se.pop(0)
        else:
            sx.pop()
            se.pop()
    return np.array(sx), np.array(se)


class _Engine:
    """Weighted minimax for monic degree-``n`` polynomials in ``s``."""

    def __init__(self, bands, n, weight, deriv_factors=None):
        self.bands = bands
        self.n = n
        self.weight = weight
        # deriv_factors = (a, b) polynomials (Chebyshev coeffs) such that the
        # critical points of weight*P are the roots of a*P' + b*P
        self.deriv_factors = deriv_factors
        self.lead = 2.0 ** (1 - n)

    def coeffs(self, a):
        return np.append(a, self.lead)

    def solve(self, ref):
        n = self.n
        w = self.weight(ref)
        V = ncheb.chebvander(ref, n)
        A = np.empty((n + 1, n + 1))
        A[:, :n] = V[:, :n] * w[:, None]
        A[:, n] = -((-1.0) ** np.arange(n + 1))
        rhs = -w * self.lead * V[:, n]
        try:
            sol = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            raise ConvergenceError("singular reference system") from None
        return sol[:n], sol[n]

    def error(self, c, s):
        return self.weight(s) * ncheb.chebval(s, c)

    def endpoints(self):
        pts = np.array([x for band in self.bands for x in band])
        return pts[self.weight(pts) > 0]

    def critical_points(self, c):
        dc = ncheb.chebder(c)
        if self.deriv_factors is None:
            D = dc
        else:
            fa, fb = self.deriv_factors
            D = ncheb.chebadd(ncheb.chebmul(fa, dc), ncheb.chebmul(fb, c))
        D = ncheb.chebtrim(D, tol=0)
        if len(D) < 2:
            return np.zeros(0)
        r = ncheb.chebroots(D)
        r = r[np.abs(r.imag) < 1e-6].real
        dD = ncheb.chebder(D)
        for _ in range(4):
            d = ncheb.chebval(r, dD)
            ok = d != 0
            r[ok] = r[ok] - ncheb.chebval(r[ok], D) / d[ok]
        inside = np.zeros(r.shape, dtype=bool)
        for lo, hi in self.bands:
            inside |= (r > lo) & (r < hi)
        return np.sort(r[inside])

    def _report_points(self, c, exact, cand, ec, L):
        # prefer exact extrema; stale reference points only if those do not alternate
        ee = self.error(c, exact)
        keep = np.abs(ee) >= L * (1 - 1e-9)
        if keep.any():
            _, signs = _extremal_set(exact, ee, L)
            if sum(1 for i in range(1, len(signs)) if signs[i] != signs[i - 1]) >= self.n:
                return exact, ee
        return cand, ec

    def grid(self):
        j = np.arange(GRID_PER_BAND)
        pts = [0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.pi * j / (GRID_PER_BAND - 1)) for lo, hi in self.bands]
        g = np.concatenate(pts)
        return g[self.weight(g) > 0]

    def run(self, max_iter=100):
        n = self.n
        grid = self.grid()
        if len(grid) < n + 1:
            raise InputError("not enough points to carry the reference")
        ref = grid[np.round(np.linspace(0, len(grid) - 1, n + 1)).astype(int)]
        ends = np.array([self.bands[0][0], self.bands[-1][1]])
        if np.any(self.weight(ends) == 0):
            # vanishing weight at an end: start from interior Gauss points
            gauss = -np.cos(np.pi * (np.arange(n + 1) + 0.5) / (n + 1))
            ref = grid[np.unique(np.searchsorted(grid, gauss).clip(0, len(grid) - 1))]
            if len(ref) < n + 1:
                ref = grid[np.round(np.linspace(0, len(grid) - 1, n + 1)).astype(int)]
        it = 0
        # grid phase
        while True:
            it += 1
            a, L = self.solve(ref)
            c = self.coeffs(a)
            e = self.error(c, grid)
            emax = np.max(np.abs(e))
            if emax <= abs(L) * (1 + 1e-9) or it >= max_iter:
                break
            xs = np.concatenate([grid, ref])
            es = np.concatenate([e, self.error(c, ref)])
            order = np.argsort(xs, kind="stable")
            ref, _ = _alternating(xs[order], es[order], n + 1)
            if len(ref) < n + 1:
                raise ConvergenceError("error curve lost alternation", residual=emax - abs(L))
        # continuous phase on exact extrema
        prev_L = None
        best = None
        for _ in range(max_iter):
            it += 1
            exact = np.unique(np.concatenate([self.endpoints(), self.critical_points(c)]))
            cand = np.unique(np.concatenate([exact, ref]))
            ec = self.error(c, cand)
            emax = np.max(np.abs(ec))
            gap = emax - abs(L)
            if best is None or gap / emax < best[0]:
                best = (gap / emax, (c, abs(L), *self._report_points(c, exact, cand, ec, abs(L))))
            if gap <= 1e-14 * emax and (prev_L is None or abs(abs(L) - prev_L) <= 1e-14 * emax):
                return (c, abs(L), *self._report_points(c, exact, cand, ec, abs(L)), it)
            prev_L = abs(L)
            new_ref, _ = _alternating(cand, ec, n + 1)
            # a fixed reference means only rounding noise is left
            if len(new_ref) == len(ref) and np.allclose(new_ref, ref, rtol=0, atol=1e-9) and best[0] <= 1e-9:
                return (*best[1], it)
            ref = new_ref
            if len(ref) < n + 1:
                raise ConvergenceError("error curve lost alternation", residual=gap)
            a, L = self.solve(ref)
            c = self.coeffs(a)
        if best is not None and best[0] <= 1e-9:
            return (*best[1], it)
        raise ConvergenceError(
            f"exchange did not converge; deviation bracket [{abs(L):.17g}, {emax:.17g}]",
            residual=emax - abs(L),
        )


def _extremal_set(cand, ec, L, rtol=1e-9, merge=1e-6):
    sel = np.abs(ec) >= L * (1 - rtol)
    xs, es = cand[sel], ec[sel]
    pts, vals = [], []
    for x, e in zip(xs, es):
        if pts and x - pts[-1] <= merge and np.sign(e) == np.sign(vals[-1]):
            if abs(e) > abs(vals[-1]):
                pts[-1], vals[-1] = x, e
            continue
        pts.append(x)
        vals.append(e)
    return tuple(float(x) + 0.0 for x in pts), tuple(int(np.sign(v)) for v in vals)


def _cheb_to_monomial(c, center, radius, scale):
    """Monomial coefficients in x of ``scale * sum c_m T_m((x - center)/radius)``."""
    ps = ncheb.cheb2poly(c)
    out = np.zeros(1)
    for v in ps[::-1]:
        out = npoly.polyadd(npoly.polymul(out, [-center / radius, 1 / radius]), [v])
    return out * scale


def remez(E: IntervalUnion, n: int) -> ChebyshevResult:
    """Monic polynomial of degree ``n`` with least sup-norm on ``E``.

    Raises
    ------
    ConvergenceError
        When the exchange stalls; the message carries the deviation bracket.
    """
    if not isinstance(E, IntervalUnion):
        E = normalize(E)
    if int(n) != n or n < 1:
        raise InputError("degree must be a positive integer")
    n = int(n)
    if n >= MAX_DEGREE:
        raise InputError(f"degree must be below {MAX_DEGREE}")
    center, radius = 0.5 * (E.inf + E.sup), 0.5 * E.diam
    bands = [((a - center) / radius, (b - center) / radius) for a, b in E.bands]
    eng = _Engine(bands, n, lambda s: np.ones(np.shape(s)))
    c, Ls, cand, ec, it = eng.run()
    scale = radius**n
    coeffs = _cheb_to_monomial(c, center, radius, scale)
    coeffs[-1] = 1.0
    pts, signs = _extremal_set(cand, ec, Ls)
    return ChebyshevResult(
        P=RealPolynomial(coeffs),
        L=float(Ls * scale),
        extreme_points=tuple(center + radius * x for x in pts),
        signs=signs,
        cheb_coeffs=c,
        center=center,
        radius=radius,
        iterations=it,
    )


def weighted_remez(n: int, alpha: float, beta: float) -> ChebyshevResult:
    """Monic ``J_n`` minimising ``sup_[0,1] x**alpha (1-x)**beta |J_n(x)|``.

    The returned ``L`` is the weighted deviation and ``extreme_points`` the
    equioscillation points of the weighted error.
    """
    if int(n) != n or n < 1:
        raise InputError("degree must be a positive integer")
    n = int(n)
    if n >= MAX_DEGREE:
        raise InputError(f"degree must be below {MAX_DEGREE}")
    alpha, beta = float(alpha), float(beta)
    if alpha < 0 or beta < 0:
        raise InputError("alpha and beta must be non-negative")

    def weight(s):
        x = 0.5 * (1 + np.asarray(s, dtype=float))
        return x**alpha * (1 - x) ** beta

    # d/ds [w P] = 0  <=>  (1 - s^2) P' + (alpha (1 - s) - beta (1 + s)) P = 0
    fa = ncheb.poly2cheb([1.0, 0.0, -1.0])
    fb = ncheb.poly2cheb([alpha - beta, -(alpha + beta)])
    factors = None if alpha == 0 and beta == 0 else (fa, fb)
    eng = _Engine([(-1.0, 1.0)], n, weight, factors)
    c, Ls, cand, ec, it = eng.run()
    scale = 0.5**n
    coeffs = _cheb_to_monomial(c, 0.5, 0.5, scale)
    coeffs[-1] = 1.0
    pts, signs = _extremal_set(cand, ec, Ls)
    return ChebyshevResult(
        P=RealPolynomial(coeffs),
        L=float(Ls * scale),
        extreme_points=tuple(0.5 * (1 + x) for x in pts),
        signs=signs,
        alpha=alpha,
        beta=beta,
        cheb_coeffs=c,
        center=0.5,
        radius=0.5,
        iterations=it,
    )


def _extrema_on(E: IntervalUnion, P: RealPolynomial) -> np.ndarray:
    pts = list(E.edges)
    if P.degree >= 2:
        crit = real_roots(P.deriv()).real
        pts.extend(x for x in crit if E.contains(x))
    return np.unique(np.array(pts))


@dataclass(frozen=True)
class ExtremalReport:
    """Outcome of the three-part extremality certificate."""

    zeros_real_simple: bool
    zeros: tuple[float, ...]
    alternation: bool
    witnesses: tuple[float | None, ...]
    endpoints: bool
    endpoint_values: tuple[float, float]
    extreme_points: tuple[float, ...]

    @property
    def passed(self) -> bool:
        return self.zeros_real_simple and self.alternation and self.endpoints


def _normalized(E: IntervalUnion, r: ChebyshevResult):
    """``(E_s, P_s, L_s, to_x)`` in the scaled variable where ``P`` is well conditioned."""
    if r.cheb_coeffs is None:
        return E, r.P, r.L, lambda s: np.asarray(s, dtype=float)
    c, h = r.center, r.radius
    Ps = RealPolynomial(ncheb.cheb2poly(r.cheb_coeffs))
    Es = E.affine(1.0 / h, -c / h)
    return Es, Ps, r.L / h**r.P.degree, lambda s: c + h * np.asarray(s, dtype=float)


def verify_extremal(E: IntervalUnion, r: ChebyshevResult, rtol: float = 1e-8) -> ExtremalReport:
    """Check real simple zeros, an extremum between zeros, and endpoint attainment."""
    Es, P, L, to_x = _normalized(E, r)
    roots = real_roots(P)
    zs = roots.real
    separated = all(b - a > 1e-7 * Es.diam for a, b in zip(zs, zs[1:]))
    simple = roots.all_real and separated and len(zs) == P.degree
    zeros = tuple(float(x) for x in to_x(zs))

    pts_s = _extrema_on(Es, P)
    vals = np.abs(P(pts_s))
    attained_s = pts_s[np.abs(vals - L) <= rtol * L]
    attained = to_x(attained_s)

    witnesses = []
    for z0, z1 in zip(zeros, zeros[1:]):
        inside = attained[(attained > z0) & (attained < z1)]
        witnesses.append(float(inside[0]) if inside.size else None)
    alternation = simple and all(w is not None for w in witnesses)

    ends_s = (float(P(Es.inf)), float(P(Es.sup)))
    endpoints = all(abs(abs(v) - L) <= rtol * L for v in ends_s)
    ends = tuple(v * (r.L / L) for v in ends_s)
    return ExtremalReport(
        zeros_real_simple=simple,
        zeros=zeros,
        alternation=alternation,
        witnesses=tuple(witnesses),
        endpoints=endpoints,
        endpoint_values=ends,
        extreme_points=tuple(float(x) for x in attained),
    )


@dataclass(frozen=True)
class CombReport:
    """Comb structure induced by ``P = L cos(theta)``."""

    roots_real: bool
    max_imag: float
    level_roots: tuple[float, ...]
    critical_points: tuple[float, ...]
    gap_heights: tuple[tuple[float, float], ...]
    heights: tuple[float, ...]
    maximal_set: IntervalUnion | None
    contains_E: bool
    maps_onto: bool

    @property
    def passed(self) -> bool:
        return self.roots_real and self.contains_E and self.maps_onto and all(h >= 0 for h in self.heights)

    @property
    def mo_comb(self):
        from .jacobi import MOComb

        return MOComb(0, len(self.heights) + 1, self.heights)


def _level_roots(P: RealPolynomial, L: float):
    lo, hi = real_roots(P + L), real_roots(P - L)
    roots = np.sort(np.concatenate([lo.real, hi.real]))
    return roots, max(lo.max_imag, hi.max_imag), lo.all_real and hi.all_real


def comb_check(E: IntervalUnion, r: ChebyshevResult, rtol: float = 1e-9) -> CombReport:
    """Read off the MO-comb of ``P = L cos(theta)``.

    Checks that ``P**2 - L**2`` has only real roots, computes slit heights
    ``arccosh(|P(x)| / L)`` at the critical points of ``P`` and verifies that
    ``P`` maps every band of the maximal set ``{|P| <= L}`` onto ``[-L, L]``.
    """
    E_x = E
    E, P, L, to_x = _normalized(E_x, r)
    roots, max_imag, ok = _level_roots(P, L)
    crit = real_roots(P.deriv()).real if P.degree >= 2 else np.zeros(0)
    ratio = np.abs(P(crit)) / L if crit.size else np.zeros(0)
    heights = tuple(float(np.arccosh(max(1.0, v))) for v in ratio)
    gap_heights = tuple(
        (float(x), h) for x, h in zip(crit, heights) if not E.contains(x)
    )

    maximal = None
    contains = maps = False
    if ok and roots.size:
        tol = 1e-9 * max(1.0, E.diam)
        distinct = [roots[0]]
        for x in roots[1:]:
            if x - distinct[-1] > tol:
                distinct.append(x)
        pieces = []
        for a, b in zip(distinct, distinct[1:]):
            if abs(P(0.5 * (a + b))) <= L:
                pieces.append((a, b))
        if pieces:
            maximal = normalize(pieces)
            contains = all(
                any(a >= lo - tol and b <= hi + tol for lo, hi in maximal.bands) for a, b in E.bands
            )
            maps = True
            for lo, hi in maximal.bands:
                pts = np.concatenate([[lo, hi], crit[(crit > lo) & (crit < hi)]])
                v = P(pts)
                if v.max() > L * (1 + 1e-7) or v.min() < -L * (1 + 1e-7):
                    maps = False
                if v.max() < L * (1 - 1e-7) or v.min() > -L * (1 - 1e-7):
                    maps = False
    if maximal is not None:
        maximal = IntervalUnion(tuple((float(to_x(a)), float(to_x(b))) for a, b in maximal.bands))
    return CombReport(
        roots_real=ok,
        max_imag=float(to_x(max_imag) - to_x(0.0)),
        level_roots=tuple(float(x) for x in to_x(roots)),
        critical_points=tuple(float(x) for x in to_x(crit)),
        gap_heights=tuple((float(to_x(x)), h) for x, h in gap_heights),
        heights=heights,
        maximal_set=maximal,
        contains_E=contains,
        maps_onto=maps,
    )


def _simplex_grid(d: int, grid: int) -> np.ndarray:
    if d == 1:
        return np.linspace(0.0, 1.0, grid)[:, None]
    m = max(2, int(np.ceil(grid ** (1.0 / d))))
    axes = np.meshgrid(*([np.linspace(0.0, 1.0, m)] * (d - 1)), indexing="ij")
    head = np.stack([a.ravel() for a in axes], axis=1)
    head = head[head.sum(axis=1) <= 1.0]
    t = np.linspace(0.0, 1.0, m)
    rest = (1.0 - head.sum(axis=1))[:, None] * t[None, :]
    out = np.repeat(head, m, axis=0)
    return np.column_stack([out, rest.ravel()])


def ball_monomial_error(k: Sequence[int], l1: int, grid: int) -> float:
    """Sampled sup-norm of the extremal error for ``z^k * conj(z_1)^l1`` on the unit ball.

    The error modulus depends only on ``r_i = |z_i|^2``; it is sampled on a
    deterministic grid of the simplex ``r_i >= 0, sum r_i <= 1``.
    """
    k = [int(v) for v in k]
    if not k or any(v < 0 for v in k):
        raise InputError("k must be a non-empty list of non-negative integers")
    if not 0 <= l1 <= k[0]:
        raise InputError("need 0 <= l1 <= k1")
    if grid < 1:
        raise InputError("grid must be positive")
    alpha = (k[0] - l1) / 2
    beta = sum(k[1:]) / 2
    r = _simplex_grid(len(k), int(grid))
    radial = r[:, 0] ** alpha * np.prod(r[:, 1:] ** (np.array(k[1:]) / 2), axis=1)
    if l1 >= 1:
        J = weighted_remez(l1, alpha, beta)
        radial = radial * np.abs(J.evaluate(r[:, 0]))
    return float(radial.max())
