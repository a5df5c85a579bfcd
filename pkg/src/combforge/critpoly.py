"""Real polynomials with prescribed critical values.

Any strictly up-down sequence ``c_1, ..., c_{n-1}`` is the critical
sequence of a degree-``n`` real polynomial, unique up to an increasing
affine change of variable.  :func:`poly_from_critical_values` pins that
freedom by placing the first and last critical points at ``frame``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from ._errors import ConvergenceError, InputError
from .polynomial import RealPolynomial, real_roots

__all__ = [
    "CriticalSequence",
    "CriticalPolynomial",
    "TieError",
    "VComb",
    "validate",
    "poly_from_critical_values",
    "construct_from_critical_values",
    "critical_sequence_of",
    "vcomb_of",
]

UP_DOWN = "up-down"
ALTERNATING = "alternating"


class TieError(InputError):
    """Equal consecutive critical values (merged critical points) are not supported."""


@dataclass(frozen=True)
class CriticalSequence:
    values: tuple[float, ...]
    kind: str = UP_DOWN

    def __post_init__(self):
        if self.kind not in (UP_DOWN, ALTERNATING):
            raise InputError(f"unknown sequence kind {self.kind!r}")
        vals = tuple(float(v) for v in self.values)
        if not all(np.isfinite(vals)):
            raise InputError("critical values must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


def _coerce(seq) -> CriticalSequence:
    if isinstance(seq, CriticalSequence):
        return seq
    return CriticalSequence(tuple(seq))


def validate(seq, strict: bool = False) -> tuple[bool, int | None]:
    """Check the inequality of the declared kind at every index.

    Returns ``(ok, j)`` where ``j`` is the 1-based index of the first
    violation: the middle index for up-down sequences, the left member of
    the offending pair for alternating ones.
    """
    seq = _coerce(seq)
    c = seq.values
    bad = (lambda v: v >= 0) if strict else (lambda v: v > 0)
    if seq.kind == UP_DOWN:
        for j in range(1, len(c) - 1):
            if bad((c[j + 1] - c[j]) * (c[j] - c[j - 1])):
                return False, j + 1
        if strict:
            for j in range(len(c) - 1):
                if c[j + 1] == c[j]:
                    return False, j + 1
    else:
        for j in range(len(c) - 1):
            if bad(c[j + 1] * c[j]):
                return False, j + 1
    return True, None


@dataclass(frozen=True)
class CriticalPolynomial:
    poly: RealPolynomial
    critical_points: tuple[float, ...]
    values: tuple[float, ...]
    residual: float
    iterations: int


def _gauss_legendre01(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1), 0.5 * w


def _log_swings(u: np.ndarray, nodes, weights) -> np.ndarray:
    """``log |int_{x_j}^{x_{j+1}} prod_i (t - x_i) dt|`` for the points with log-gaps ``u``."""
    g = np.exp(u)
    x = np.concatenate([[0.0], np.cumsum(g)])
    out = np.empty(len(g))
    for j, gj in enumerate(g):
        t = x[j] + gj * nodes
        logs = np.log(np.abs(t[:, None] - x[None, :])).sum(axis=1)
        out[j] = np.log(gj) + logsumexp(logs, b=weights)
    return out


def _newton(target, u, nodes, weights, tol=1e-13, max_iter=40):
    h = 1e-6
    F = _log_swings(u, nodes, weights) - target
    norm = np.max(np.abs(F))
    for it in range(max_iter):
        if norm < tol:
            return u, norm, it
        J = np.empty((len(u), len(u)))
        for i in range(len(u)):
            e = np.zeros(len(u))
            e[i] = h
            J[:, i] = (_log_swings(u + e, nodes, weights) - _log_swings(u - e, nodes, weights)) / (2 * h)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return u, norm, it
        t = 1.0
        while t > 1e-4:
            cand = u + t * step
            Fc = _log_swings(cand, nodes, weights) - target
            nc = np.max(np.abs(Fc))
            if np.isfinite(nc) and nc < norm:
                u, F, norm = cand, Fc, nc
                break
            t *= 0.5
        else:
            return u, norm, it
    return u, norm, max_iter


def _solve_gaps(swings: np.ndarray, iterations: list[int]) -> np.ndarray:
    m = len(swings) + 1
    nodes, weights = _gauss_legendre01(m // 2 + 2)
    target = np.log(np.abs(swings))
    u = np.zeros(len(swings))
    start = _log_swings(u, nodes, weights)
    lam, step = 0.0, 1.0
    while lam < 1.0:
        nxt = min(1.0, lam + step)
        goal = (1 - nxt) * start + nxt * target
        cand, norm, it = _newton(goal, u, nodes, weights)
        iterations[0] += it
        if norm < 1e-12:
            u, lam = cand, nxt
            step = min(1.0, 2 * step)
        else:
            step *= 0.5
            if step < 1e-6:
                raise ConvergenceError(
                    f"critical-point solve stalled at homotopy parameter {lam:.3g}", residual=norm
                )
    cand, norm, it = _newton(target, u, nodes, weights, tol=1e-15, max_iter=5)
    iterations[0] += it
    return cand if norm <= 1e-12 else u


def construct_from_critical_values(
    seq, strict: bool = True, frame: tuple[float, float] = (0.0, 1.0)
) -> CriticalPolynomial:
    """Build the polynomial and report critical points and the value residual."""
    seq = _coerce(seq)
    c = np.array(seq.values)
    if len(c) < 1:
        raise InputError("need at least one critical value")
    if any(c[j] == c[j + 1] for j in range(len(c) - 1)):
        raise TieError("equal consecutive critical values are not supported")
    ok, j = validate(seq, strict=strict)
    if not ok:
        raise InputError(f"sequence violates the {seq.kind} condition at index {j}")
    if seq.kind == ALTERNATING:
        ok, j = validate(CriticalSequence(seq.values, UP_DOWN), strict=True)
        if not ok:
            raise InputError(f"construction needs a strict up-down pattern; fails at index {j}")
    f0, f1 = (float(v) for v in frame)
    if len(c) > 1 and not f0 < f1:
        raise InputError("frame must be increasing")

    if len(c) == 1:
        sign = 1.0 if c[0] <= 0 else -1.0
        P = RealPolynomial([c[0] + sign * f0 * f0, -2 * sign * f0, sign])
        return CriticalPolynomial(P, (f0,), (float(P(f0)),), float(abs(P(f0) - c[0])), 0)

    iterations = [0]
    u = _solve_gaps(np.diff(c), iterations)
    x = np.concatenate([[0.0], np.cumsum(np.exp(u))])
    # the last critical point is a local minimum iff P' > 0 to its right
    A = 1.0 if c[-1] < c[-2] else -1.0
    rho = x[-1] / (f1 - f0)
    pts = f0 + x / rho
    pts[-1] = f1
    # P = a * int_{f0} prod(t - pts) + b; the amplitude a = A rho**n is refit
    # together with b by least squares to absorb rounding in the coefficients
    shape = RealPolynomial.from_roots(pts).integ(lbnd=f0)
    basis = np.column_stack([shape(pts), np.ones(len(pts))])
    (a, b), *_ = np.linalg.lstsq(basis, c, rcond=None)
    if np.sign(a) != A:
        raise ConvergenceError("amplitude fit flipped orientation")
    P = shape * a + b
    vals = P(pts)
    return CriticalPolynomial(
        poly=P,
        critical_points=tuple(float(v) for v in pts),
        values=tuple(float(v) for v in vals),
        residual=float(np.max(np.abs(vals - c))),
        iterations=iterations[0],
    )


def poly_from_critical_values(seq, strict: bool = True, frame: tuple[float, float] = (0.0, 1.0)) -> RealPolynomial:
    """Real polynomial whose ordered critical values are ``seq``.

    The first and last critical points land on ``frame``.  With a single
    critical value the parabola ``±(z - frame[0])**2 + c`` is returned, with
    a minimum when ``c <= 0`` and a maximum otherwise.

    >>> poly_from_critical_values([-1.0, 1.0]).coeffs.round(12).tolist()
    [-1.0, 0.0, 6.0, -4.0]
    """
    return construct_from_critical_values(seq, strict=strict, frame=frame).poly


def critical_sequence_of(P: RealPolynomial) -> tuple[CriticalSequence, tuple[float, ...]]:
    """Ordered critical values and points of a polynomial with real critical points."""
    if not isinstance(P, RealPolynomial):
        P = RealPolynomial(P)
    if P.degree < 2:
        return CriticalSequence(()), ()
    roots = real_roots(P.deriv())
    if roots.max_imag > 1e-8:
        raise InputError("P' has non-real roots; critical sequence is undefined")
    pts = tuple(float(v) + 0.0 for v in roots.real)
    vals = tuple(float(v) for v in P(np.array(pts)))
    kind = ALTERNATING if all(a * b <= 0 for a, b in zip(vals, vals[1:])) else UP_DOWN
    return CriticalSequence(vals, kind), pts


@dataclass(frozen=True)
class VComb:
    """Strip ``pi*m < Im < pi*k`` minus leftward rays ``{x + i pi j : x <= tip}``.

    Rays are stored bottom to top as ``(j, tip)``.  A ray at level ``j`` ends
    at ``log|c_{n-j}|``: the bottom edge of the strip corresponds to the real
    axis right of the largest zero, so the lowest ray meets the rightmost
    critical point.
    """

    m: int
    k: int
    rays: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.m < self.k:
            raise InputError("strip bounds must satisfy m < k")
        levels = [j for j, _ in self.rays]
        if any(not self.m < j < self.k for j in levels) or len(set(levels)) != len(levels):
            raise InputError("ray levels must be distinct and inside the strip")

    def to_json(self) -> dict:
        return {
            "strip": [np.pi * self.m, np.pi * self.k],
            "rays": [[j, tip] for j, tip in self.rays],
        }


def vcomb_of(P: RealPolynomial) -> VComb:
    """V-comb of a real polynomial with only real zeros."""
    if not isinstance(P, RealPolynomial):
        P = RealPolynomial(P)
    if P.degree < 1:
        raise InputError("constant polynomials have no comb")
    zeros = real_roots(P)
    if not zeros.all_real:
        raise InputError("P has non-real zeros")
    n = P.degree
    seq, _ = critical_sequence_of(P)
    c = seq.values
    rays = []
    for j in range(1, n):
        v = abs(c[n - j - 1])
        if v > 0:
            rays.append((j, float(np.log(v))))
    return VComb(0, n, tuple(rays))
