"""Dense real polynomials and real-root extraction.

Roots come from the companion matrix (``numpy.polynomial.polynomial.polyroots``)
and are then polished by Newton's method.  Companion eigenvalues of a
multiple real root split into a small complex cluster; :func:`real_roots`
detects such clusters and re-solves them on the real line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._errors import InputError

__all__ = ["RealPolynomial", "RootSet", "real_roots"]

_EPS = np.finfo(float).eps


def _fsum_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty(len(a) + len(b) - 1)
    for k in range(len(out)):
        lo, hi = max(0, k - len(b) + 1), min(k, len(a) - 1)
        out[k] = math.fsum(a[i] * b[k - i] for i in range(lo, hi + 1))
    return out


class RealPolynomial:
    """Real polynomial stored as ascending coefficients.

    Trailing zero coefficients are trimmed on construction, so
    ``coeffs[-1]`` is the (nonzero) leading coefficient.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[float], allow_zero: bool = False):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise InputError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise InputError("coefficients must be finite")
        nz = np.flatnonzero(c)
        if nz.size == 0:
            if not allow_zero:
                raise InputError("the zero polynomial is not a RealPolynomial")
            c = np.zeros(1)
        else:
            c = c[: nz[-1] + 1].copy()
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def zero(cls) -> "RealPolynomial":
        """The zero polynomial; only used where a matrix entry vanishes identically."""
        return cls([0.0], allow_zero=True)

    @property
    def is_zero(self) -> bool:
        return self.coeffs[-1] == 0

    @classmethod
    def from_roots(cls, roots, lead: float = 1.0) -> "RealPolynomial":
        c = np.real_if_close(npoly.polyfromroots(roots))
        return cls(lead * np.real(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> float:
        return float(self.coeffs[-1])

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def __repr__(self):
        return f"RealPolynomial({self.to_list()!r})"

    def __eq__(self, other):
        if not isinstance(other, RealPolynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, RealPolynomial):
            return other.coeffs
        return np.array([float(other)])

    def __add__(self, other):
        return RealPolynomial(npoly.polyadd(self.coeffs, self._coerce(other)), allow_zero=True)

    __radd__ = __add__

    def __sub__(self, other):
        return RealPolynomial(npoly.polysub(self.coeffs, self._coerce(other)), allow_zero=True)

    def __rsub__(self, other):
        return RealPolynomial(npoly.polysub(self._coerce(other), self.coeffs), allow_zero=True)

    def __neg__(self):
        return RealPolynomial(-self.coeffs)

    def __mul__(self, other):
        return RealPolynomial(_fsum_convolve(self.coeffs, self._coerce(other)), allow_zero=True)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return RealPolynomial(self.coeffs / float(scalar))

    def __pow__(self, k: int):
        out = RealPolynomial([1.0])
        for _ in range(int(k)):
            out = out * self
        return out

    def deriv(self, m: int = 1) -> "RealPolynomial":
        if m > self.degree:
            raise InputError("derivative order exceeds degree")
        return RealPolynomial(npoly.polyder(self.coeffs, m))

    def integ(self, lbnd: float = 0.0, k: float = 0.0) -> "RealPolynomial":
        """Antiderivative ``F`` with ``F(lbnd) = k``."""
        return RealPolynomial(npoly.polyint(self.coeffs, lbnd=lbnd, k=k))

    def monic(self) -> "RealPolynomial":
        return RealPolynomial(self.coeffs / self.lead)

    def compose_affine(self, a: float, b: float) -> "RealPolynomial":
        """The polynomial ``z -> P(a*z + b)``."""
        out = np.zeros(1)
        for c in self.coeffs[::-1]:
            out = npoly.polyadd(npoly.polymul(out, [b, a]), [c])
        return RealPolynomial(out)

    def roots(self) -> np.ndarray:
        """All complex roots (companion matrix, Newton polished)."""
        if self.degree == 0:
            return np.zeros(0, dtype=complex)
        r = npoly.polyroots(self.coeffs).astype(complex)
        return np.array([_complex_newton(self, z) for z in r])

    def magnitude_bound(self, x) -> np.ndarray:
        """``sum |c_k| |x|^k``, the scale of rounding error in ``P(x)``."""
        return npoly.polyval(np.abs(x), np.abs(self.coeffs))

    def to_list(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def _complex_newton(P: RealPolynomial, z: complex, iters: int = 8) -> complex:
    dP = P.deriv() if P.degree > 0 else None
    best, fbest = z, abs(P(z))
    for _ in range(iters):
        d = dP(z)
        if d == 0:
            break
        z = z - P(z) / d
        fz = abs(P(z))
        if fz < fbest:
            best, fbest = z, fz
        else:
            break
    return best


def _real_newton(P: RealPolynomial, dP: RealPolynomial, x: float, iters: int = 60):
    """Newton on the real line; returns (x, converged)."""
    for _ in range(iters):
        d = dP(x)
        if d == 0 or not np.isfinite(d):
            break
        step = P(x) / d
        x = x - step
        if abs(step) <= 4 * _EPS * max(1.0, abs(x)):
            break
    small = abs(P(x)) <= 1e3 * _EPS * P.magnitude_bound(x)
    return float(x), bool(small)


@dataclass(frozen=True)
class RootSet:
    """Roots split into real ones (sorted, repeated by multiplicity) and the rest."""

    real: np.ndarray
    complex: np.ndarray

    @property
    def max_imag(self) -> float:
        """Largest |Im| among roots not recognised as real (0 if all real)."""
        return float(np.max(np.abs(self.complex.imag))) if self.complex.size else 0.0

    @property
    def all_real(self) -> bool:
        return self.complex.size == 0


def _clusters(z: np.ndarray, radius: float) -> list[list[int]]:
    order = np.argsort(z.real)
    groups: list[list[int]] = []
    for i in order:
        for g in groups:
            if any(abs(z[i] - z[j]) <= radius for j in g):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def real_roots(P: RealPolynomial, near_axis: float = 1e-3) -> RootSet:
    """Extract real roots of ``P`` with multiplicities.

    Companion roots within ``near_axis * scale`` of the real axis are
    re-solved in real arithmetic: first one by one; if that does not give
    distinct real roots, the cluster is treated as a root of multiplicity
    ``m`` and located as a root of ``P^(m-1)``.
    """
    if P.degree == 0:
        return RootSet(np.zeros(0), np.zeros(0, dtype=complex))
    z = npoly.polyroots(P.coeffs).astype(complex)
    scale = max(1.0, float(np.max(np.abs(z))))
    dP = P.deriv()
    real: list[float] = []
    cplx: list[complex] = []
    for group in _clusters(z, near_axis * scale):
        members = z[group]
        if np.max(np.abs(members.imag)) > near_axis * scale:
            cplx.extend(_complex_newton(P, w) for w in members)
            continue
        m = len(members)
        found = []
        for w in members:
            x, ok = _real_newton(P, dP, w.real)
            if ok:
                found.append(x)
        found.sort()
        # two simple roots are resolvable only if P clearly leaves zero between them
        distinct = len(found) == m and all(
            b - a > 1e-10 * scale
            and abs(P(0.5 * (a + b))) > 1e2 * _EPS * P.magnitude_bound(0.5 * (a + b))
            for a, b in zip(found, found[1:])
        )
        if distinct:
            real.extend(found)
            continue
        if m >= 2:
            Pm = P.deriv(m - 1)
            x, _ = _real_newton(Pm, Pm.deriv(), float(np.mean(members.real)))
            # floor the bound: cancellation can leave a near-zero constant term
            bound = max(P.magnitude_bound(x), float(np.max(np.abs(P.coeffs))))
            if abs(P(x)) <= 1e5 * _EPS * bound:
                real.extend([x] * m)
                continue
        if m == 1 and found:
            real.extend(found)
            continue
        cplx.extend(_complex_newton(P, w) for w in members)
    return RootSet(np.sort(np.array(real, dtype=float)), np.array(cplx, dtype=complex))
