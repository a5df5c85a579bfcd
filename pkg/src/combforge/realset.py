"""Finite unions of closed real intervals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._errors import InputError

__all__ = ["IntervalUnion", "normalize", "gaps", "homogeneity_eta"]


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, pairwise disjoint closed bands ``[a_i, b_i]``.

    Construct through :func:`normalize` unless the bands are already
    canonical; the constructor only validates.
    """

    bands: tuple[tuple[float, float], ...]

    def __post_init__(self):
        bands = tuple((float(a), float(b)) for a, b in self.bands)
        if not bands:
            raise InputError("an interval union needs at least one band")
        for a, b in bands:
            if not (np.isfinite(a) and np.isfinite(b)):
                raise InputError(f"band ({a}, {b}) is not finite")
            if not a < b:
                raise InputError(f"degenerate or reversed band ({a}, {b})")
        for (_, b0), (a1, _) in zip(bands, bands[1:]):
            if not b0 < a1:
                raise InputError("bands must be sorted and disjoint")
        object.__setattr__(self, "bands", bands)

    @property
    def n_bands(self) -> int:
        return len(self.bands)

    @property
    def inf(self) -> float:
        return self.bands[0][0]

    @property
    def sup(self) -> float:
        return self.bands[-1][1]

    @property
    def diam(self) -> float:
        return self.sup - self.inf

    @property
    def edges(self) -> np.ndarray:
        """All band endpoints in increasing order, length ``2k``."""
        return np.array([x for band in self.bands for x in band])

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.bands))

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for a, b in self.bands:
            out |= (x >= a) & (x <= b)
        return out

    def band_index(self, x: float) -> int | None:
        """Index of the band containing ``x``, or None."""
        for i, (a, b) in enumerate(self.bands):
            if a <= x <= b:
                return i
        return None

    def affine(self, scale: float, shift: float) -> "IntervalUnion":
        """Image of the set under ``x -> scale * x + shift`` (scale != 0)."""
        if scale == 0 or not np.isfinite(scale):
            raise InputError("affine scale must be finite and nonzero")
        ends = ((scale * a + shift, scale * b + shift) for a, b in self.bands)
        return IntervalUnion(tuple(sorted((min(u, v), max(u, v)) for u, v in ends)))

    def to_json(self) -> dict:
        return {"bands": [[a, b] for a, b in self.bands]}

    @classmethod
    def from_json(cls, obj) -> "IntervalUnion":
        try:
            raw = obj["bands"]
        except (TypeError, KeyError):
            raise InputError('set JSON must be an object with a "bands" list') from None
        try:
            pairs = [(float(a), float(b)) for a, b in raw]
        except (TypeError, ValueError):
            raise InputError("each band must be a pair of numbers") from None
        return normalize(pairs)


def normalize(raw: Iterable[Sequence[float]]) -> IntervalUnion:
    """Sort and merge overlapping or touching intervals.

    >>> normalize([(0.5, 1), (-1, -0.5)]).bands
    ((-1.0, -0.5), (0.5, 1.0))
    >>> normalize([(0, 1), (0.5, 2)]).bands
    ((0.0, 2.0),)
    """
    pairs = []
    for pair in raw:
        try:
            a, b = (float(v) for v in pair)
        except (TypeError, ValueError):
            raise InputError(f"not a real pair: {pair!r}") from None
        if not a < b:
            raise InputError(f"interval ({a}, {b}) must satisfy a < b")
        pairs.append((a, b))
    if not pairs:
        raise InputError("empty interval list")
    pairs.sort()
    merged = [list(pairs[0])]
    for a, b in pairs[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return IntervalUnion(tuple((a, b) for a, b in merged))


def gaps(E: IntervalUnion) -> list[tuple[float, float]]:
    """Open gaps ``(b_i, a_{i+1})`` between consecutive bands."""
    return [(b0, a1) for (_, b0), (a1, _) in zip(E.bands, E.bands[1:])]


def _window_measure(E: IntervalUnion, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    total = np.zeros(np.broadcast(lo, hi).shape)
    for a, b in E.bands:
        total += np.clip(np.minimum(hi, b) - np.maximum(lo, a), 0.0, None)
    return total


def homogeneity_eta(E: IntervalUnion, delta_samples: int, x_per_band: int = 9) -> float:
    """Lower estimate of the homogeneity constant of a compact set.

    Returns the minimum of ``|(x - d, x + d) ∩ E| / d`` over a fixed grid of
    points ``x`` in ``E`` (every band endpoint plus ``x_per_band`` evenly
    spaced interior points) and ``delta_samples`` geometrically spaced window
    radii from ``diam(E) * 2**-30`` to ``diam(E)``.

    Going from ``N`` to ``2N - 1`` radii refines the grid (it is a superset),
    so the estimate can only decrease.
    """
    if int(delta_samples) != delta_samples or delta_samples < 1:
        raise InputError("delta_samples must be a positive integer")
    delta_samples = int(delta_samples)
    diam = E.diam
    if delta_samples == 1:
        deltas = np.array([diam])
    else:
        deltas = diam * np.logspace(-30, 0, delta_samples, base=2.0)
    xs = [E.edges]
    for a, b in E.bands:
        xs.append(np.linspace(a, b, x_per_band + 2)[1:-1])
    xs = np.concatenate(xs)
    d = deltas[None, :]
    x = xs[:, None]
    ratio = _window_measure(E, x - d, x + d) / d
    return float(np.clip(ratio.min(), 0.0, 2.0))
