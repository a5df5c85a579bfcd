"""General comb regions, their condition checkers and example generators.

A :class:`GeneralComb` is the region ``{a < x < b, y > h(x)}`` for a height
function ``h`` made of finitely many slits and constant plateaus.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._errors import InputError
from .polynomial import RealPolynomial, real_roots

__all__ = [
    "GeneralComb",
    "widom_sum",
    "sector_H",
    "muckenhoupt_sup",
    "theta_eval",
    "julia_comb",
    "cantor_comb",
]


def _as_array(rows, width: int) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.size == 0:
        return np.zeros((0, width))
    if arr.ndim != 2 or arr.shape[1] != width:
        raise InputError(f"expected rows of length {width}")
    return arr


@dataclass(frozen=True)
class GeneralComb:
    """Comb over ``base`` with slits ``(y, h)`` and plateaus ``(lo, hi, h)``.

    Slits are kept sorted by position; arrays are read-only.
    """

    base: tuple[float, float]
    slits: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    plateaus: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))

    def __post_init__(self):
        a, b = (float(v) for v in self.base)
        if not a < b:
            raise InputError("base must satisfy a < b")
        slits = _as_array(self.slits, 2)
        plateaus = _as_array(self.plateaus, 3)
        if slits.size:
            slits = slits[np.argsort(slits[:, 0], kind="stable")]
            if np.any(slits[:, 0] <= a) or np.any(slits[:, 0] >= b):
                raise InputError("slit positions must lie inside the base")
            if np.any(slits[:, 1] < 0):
                raise InputError("slit heights must be non-negative")
        if plateaus.size:
            plateaus = plateaus[np.argsort(plateaus[:, 0], kind="stable")]
            if np.any(plateaus[:, 0] > plateaus[:, 1]) or np.any(plateaus[:, 2] < 0):
                raise InputError("plateaus need lo <= hi and non-negative height")
            if np.any(plateaus[:, 0] < a) or np.any(plateaus[:, 1] > b):
                raise InputError("plateaus must lie in the closed base")
            if np.any(plateaus[1:, 0] <= plateaus[:-1, 1]):
                raise InputError("plateaus must be pairwise disjoint")
        slits.setflags(write=False)
        plateaus.setflags(write=False)
        object.__setattr__(self, "base", (a, b))
        object.__setattr__(self, "slits", slits)
        object.__setattr__(self, "plateaus", plateaus)

    def union(self, other: "GeneralComb") -> "GeneralComb":
        if self.base != other.base:
            raise InputError("combs must share a base")
        return GeneralComb(
            self.base,
            np.vstack([self.slits, other.slits]),
            np.vstack([self.plateaus, other.plateaus]),
        )

    def to_json(self) -> dict:
        return {
            "base": list(self.base),
            "slits": self.slits.tolist(),
            "plateaus": self.plateaus.tolist(),
        }

    @classmethod
    def from_json(cls, obj) -> "GeneralComb":
        try:
            base = tuple(obj["base"])
        except (TypeError, KeyError):
            raise InputError('comb JSON needs a "base" pair') from None
        if len(base) != 2:
            raise InputError('comb JSON needs a "base" pair')
        return cls(base, obj.get("slits", []), obj.get("plateaus", []))


def widom_sum(c: GeneralComb) -> float:
    """Total slit length; ``inf`` once a plateau of positive length and height is present."""
    p = c.plateaus
    if p.size and np.any((p[:, 1] > p[:, 0]) & (p[:, 2] > 0)):
        return float("inf")
    total = float(np.sum(c.slits[:, 1])) if c.slits.size else 0.0
    if p.size:
        total += float(np.sum(p[p[:, 1] == p[:, 0], 2]))
    return total


def sector_H(c: GeneralComb, x: float) -> float:
    """``sup_y h(y) / |y - x|`` over the comb's slits and plateaus.

    Distances to a plateau are measured to its nearest point.
    """
    a, b = c.base
    x = float(x)
    if not a < x < b:
        raise InputError("x must lie inside the base")
    best = 0.0
    s = c.slits
    if s.size:
        pos = s[:, 1] > 0
        if np.any(pos & (s[:, 0] == x)):
            return float("inf")
        d = np.abs(s[pos, 0] - x)
        if d.size:
            best = max(best, float(np.max(s[pos, 1] / d)))
    p = c.plateaus
    if p.size:
        pos = p[:, 2] > 0
        lo, hi, h = p[pos, 0], p[pos, 1], p[pos, 2]
        if np.any((lo <= x) & (x <= hi)):
            return float("inf")
        d = np.where(x < lo, lo - x, x - hi)
        if d.size:
            best = max(best, float(np.max(h / d)))
    return best


def muckenhoupt_sup(d: Sequence[float]) -> float:
    """Maximum over integer windows ``I`` of ``sum_I d * sum_I 1/d / |I|**2``."""
    d = np.asarray(d, dtype=float)
    if d.ndim != 1 or d.size == 0:
        raise InputError("need a non-empty list")
    if np.any(~(d > 0)) or not np.all(np.isfinite(d)):
        raise InputError("entries must be positive and finite")
    s = np.concatenate([[0.0], np.cumsum(d)])
    r = np.concatenate([[0.0], np.cumsum(1.0 / d)])
    best = 1.0
    for i in range(d.size):
        length = np.arange(1, d.size - i + 1)
        j = i + length
        vals = (s[j] - s[i]) * (r[j] - r[i]) / length**2
        best = max(best, float(vals.max()))
    return best


def julia_comb(h0: float, depth: int) -> GeneralComb:
    """Slits over ``(0, 1)`` at every ``odd / 2**m`` with height ``2**-m * h0``, ``m <= depth``."""
    if not h0 > 0:
        raise InputError("h0 must be positive")
    if int(depth) != depth or not 1 <= depth <= 24:
        raise InputError("depth must be an integer in [1, 24]")
    depth = int(depth)
    pos, hts = [], []
    for m in range(1, depth + 1):
        odd = np.arange(1, 2**m, 2, dtype=float)
        pos.append(odd / 2.0**m)
        hts.append(np.full(odd.size, h0 / 2.0**m))
    return GeneralComb((0.0, 1.0), np.column_stack([np.concatenate(pos), np.concatenate(hts)]))


def cantor_comb(depth: int) -> GeneralComb:
    """Height-one plateaus on the ``2**depth`` intervals of the middle-thirds construction."""
    if int(depth) != depth or not 1 <= depth <= 20:
        raise InputError("depth must be an integer in [1, 20]")
    lo = np.array([0.0])
    width = 1.0
    for _ in range(int(depth)):
        width /= 3.0
        lo = np.concatenate([lo, lo + 2 * width])
    lo.sort()
    return GeneralComb((0.0, 1.0), plateaus=np.column_stack([lo, lo + width, np.ones(lo.size)]))


def _branch_points(P: RealPolynomial, L: float) -> np.ndarray:
    a, b = real_roots(P - L), real_roots(P + L)
    return np.concatenate([a.real, b.real, a.complex, b.complex])


def _segment_distance(z0: complex, z1: complex, pts: np.ndarray) -> np.ndarray:
    d = z1 - z0
    if d == 0:
        return np.abs(pts - z0)
    t = np.clip(((pts - z0) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(pts - (z0 + t * d))


def theta_eval(P: RealPolynomial, L: float, z: complex, path: Sequence[complex] | None = None) -> complex:
    """Continue ``theta = arccos(P / L)`` along a polyline from the anchor.

    The anchor is the rightmost real solution of ``P**2 = L**2``, where
    ``theta`` is ``0`` (``pi`` if ``P`` there equals ``-L``).  Leaving the
    anchor, the branch is chosen so that ``theta`` maps the upper half-plane
    into the upper half-plane, matching the MO-comb picture.  Without a
    ``path`` the default polyline climbs vertically from the anchor to
    height ``max(1, Im z)``, then runs horizontally and descends to ``z``.

    Raises
    ------
    InputError
        If the path does not start at the anchor or passes within ``1e-8``
        of another branch point (a root of ``P**2 - L**2``).
    """
    if not isinstance(P, RealPolynomial):
        P = RealPolynomial(P)
    L = float(L)
    if not L > 0:
        raise InputError("L must be positive")
    z = complex(z)
    branch = _branch_points(P, L)
    real_branch = np.sort(branch[np.abs(np.imag(branch)) == 0].real)
    if real_branch.size == 0:
        raise InputError("P**2 - L**2 has no real roots")
    anchor = float(real_branch[-1])
    if path is None:
        top = max(1.0, z.imag)
        path = [anchor, complex(anchor, top), complex(z.real, top), z]
    path = [complex(v) for v in path]
    scale = max(1.0, abs(anchor))
    if abs(path[0] - anchor) > 1e-12 * scale:
        raise InputError(f"path must start at the anchor {anchor!r}")
    if abs(path[-1] - z) > 1e-12 * max(1.0, abs(z)):
        raise InputError("path must end at z")
    if any(v.imag < 0 for v in path):
        raise InputError("path must stay in the closed upper half-plane")

    others = branch[np.abs(branch - anchor) > 1e-8 * scale]
    for k, (z0, z1) in enumerate(zip(path, path[1:])):
        if others.size and np.min(_segment_distance(z0, z1, others)) < 1e-8:
            raise InputError("path passes within 1e-8 of a branch point")
        if k > 0 and abs(z0 - anchor) < 1e-8 * scale:
            raise InputError("path returns to the anchor branch point")

    dP = P.deriv() if P.degree >= 1 else None
    w = lambda u: P(u) / L
    dw = lambda u: dP(u) / L

    theta0 = float(np.arccos(np.clip(w(anchor), -1.0, 1.0)))
    theta = complex(theta0)
    current = path[0]
    started = False
    for z1 in path[1:]:
        remaining = z1 - current
        while abs(remaining) > 0:
            step = remaining
            while True:
                target = current + step
                if not started:
                    cand = _start_branch(w(target), dw(target), theta0)
                    ok = abs(cand - theta) < 0.5
                else:
                    pred = theta - dw(current) / np.sin(theta) * step
                    cand, ok = _nearest_branch(w(target), pred)
                if ok or abs(step) < 1e-14 * max(1.0, abs(target)):
                    break
                step = step / 2
            theta = _polish(cand, w(target))
            current = target
            started = True
            remaining = z1 - current
            if abs(remaining) <= 1e-15 * max(1.0, abs(z1)):
                break
    return complex(theta)


def _candidates(wt: complex, centre: complex) -> np.ndarray:
    base = np.arccos(complex(wt))
    k = np.round(centre.real / (2 * np.pi))
    shifts = 2 * np.pi * np.arange(k - 1, k + 2)
    return np.concatenate([base + shifts, -base + shifts])


def _start_branch(wt: complex, dwt: complex, theta0: float) -> complex:
    cands = _candidates(wt, complex(theta0))
    # theta maps the upper half-plane upwards: require Im theta > 0, or for
    # real values Re theta' > 0 so that a small upward move raises Im theta
    good = []
    for c in cands:
        if abs(c.imag) > 1e-12:
            if c.imag > 0:
                good.append(c)
        else:
            s = np.sin(c)
            if s != 0 and (-dwt / s).real > 0:
                good.append(c)
    pool = np.array(good) if good else cands
    return complex(pool[np.argmin(np.abs(pool - theta0))])


def _nearest_branch(wt: complex, pred: complex):
    cands = _candidates(wt, pred)
    d = np.abs(cands - pred)
    order = np.argsort(d)
    best, second = d[order[0]], d[order[1]]
    ok = best < 0.25 and best < 0.25 * second
    return complex(cands[order[0]]), bool(ok)


def _polish(theta: complex, wt: complex) -> complex:
    for _ in range(3):
        s = np.sin(theta)
        if s == 0:
            break
        theta = theta + (np.cos(theta) - wt) / s
    return complex(theta)
