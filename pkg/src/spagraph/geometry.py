"""Torus geometry: wrapped distances and ball volume/radius conversions.

All positions live on the unit hypercube [0,1)^m with periodic boundaries.
Distances come from either the L2 or the L-infinity norm applied to the
per-coordinate wrapped separations.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import ParameterError, UsageError


class Norm(enum.Enum):
    """Which norm the torus metric (and hence ball shapes) is built from."""

    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, text: str) -> "Norm":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ParameterError(f"unknown norm {text!r}; expected 'l2' or 'linf'") from None


def unit_ball_volume(m: int, norm: Norm) -> float:
    """Volume of the radius-1 ball in R^m (no wraparound)."""
    if m < 1:
        raise ParameterError(f"dimension must be >= 1, got {m}")
    if norm is Norm.LINF:
        return 2.0 ** m
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


def torus_diffs(x, y) -> np.ndarray:
    """Per-coordinate wrapped separations min(|dx|, 1-|dx|); broadcasts."""
    d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    return np.minimum(d, 1.0 - d)


def torus_distance(x, y, norm: Norm = Norm.LINF):
    """Torus metric between points (or arrays of points) on [0,1)^m.

    Equals the minimum of ||x - y + u|| over all integer shift vectors
    u in {-1,0,1}^m; computed coordinate-wise, which is exactly equivalent.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise UsageError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    d = torus_diffs(x, y)
    if norm is Norm.LINF:
        return d.max(axis=-1)
    return np.sqrt((d * d).sum(axis=-1))


def volume_to_radius(v: float, m: int, norm: Norm) -> float:
    """Radius of the m-ball of volume v (ignoring torus wraparound)."""
    if not 0.0 < v <= 1.0:
        raise ParameterError(f"volume must be in (0, 1], got {v}")
    return float((v / unit_ball_volume(m, norm)) ** (1.0 / m))


def radius_to_volume(r: float, m: int, norm: Norm) -> float:
    """Nominal volume of the radius-r m-ball, capped at 1."""
    if r < 0:
        raise ParameterError(f"radius must be >= 0, got {r}")
    return float(min(unit_ball_volume(m, norm) * r ** m, 1.0))


def ball_contains(centers, volumes, x, norm: Norm) -> np.ndarray:
    """Closed-ball membership test: is x inside the ball at each center?

    `centers` is (k, m) (or (m,)), `volumes` the nominal ball volume per
    center (scalar broadcasts). The comparison is done in volume space,
    using only correctly-rounded float operations, so every caller
    (grid index, linear scan, test oracles) sees bit-identical decisions.
    """
    centers = np.asarray(centers, dtype=float)
    x = np.asarray(x, dtype=float)
    if centers.shape[-1] != x.shape[-1]:
        raise UsageError(f"dimension mismatch: {centers.shape[-1]} vs {x.shape[-1]}")
    m = x.shape[-1]
    d = torus_diffs(centers, x)
    if norm is Norm.LINF:
        q = 2.0 * d.max(axis=-1)
        return q ** m <= volumes
    s = (d * d).sum(axis=-1)
    if m % 2 == 0:
        powered = s ** (m // 2)
    else:
        powered = s ** (m // 2) * np.sqrt(s)
    return unit_ball_volume(m, Norm.L2) * powered <= volumes
