"""Piecewise-linear localization trade-off curve in the (u, v) = (1/r, 1/s) plane.

For each q in [2, inf] the curve is the pointwise minimum of two lines,

    L1: ((3q-2)/(q+2)) u + v = 1      (active where u + 3v <= 1)
    L2: u + v = q/(2(q-1))            (active where u + 3v > 1)

restricted to the sector 0 <= v <= u <= 1. Points strictly above the curve
are constructible; points strictly below are obstructed; points on the curve
are left open and never feed a construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfSectorError, ParameterError

__all__ = [
    "TradeoffPoint",
    "branch_coefficients",
    "curve_u_range",
    "gamma_q",
    "classify",
]

ON_TOL = 1e-12


def _check_q(q: float) -> float:
    if q != math.inf and not q >= 2.0:
        raise ParameterError(f"q must be >= 2 (or inf), got {q}")
    return q


def branch_coefficients(q: float) -> tuple[float, float]:
    """(slope c of the steep branch, level d of the diagonal branch).

    c = (3q-2)/(q+2) and d = q/(2(q-1)); for q = inf, (3, 1/2).
    """
    _check_q(q)
    if q == math.inf:
        return 3.0, 0.5
    return (3.0 * q - 2.0) / (q + 2.0), q / (2.0 * (q - 1.0))


def curve_u_range(q: float) -> tuple[float, float]:
    """u-interval on which the curve stays inside the sector.

    Left endpoint is the symmetric point u = v = d/2; right endpoint is the
    v = 0 intercept u = 1/c.
    """
    c, d = branch_coefficients(q)
    return d / 2.0, 1.0 / c


def gamma_q(u: float, q: float) -> float:
    """Curve height v at abscissa u, branch chosen deterministically.

    Returns v = d - u on the diagonal branch (u below the branch corner
    (q+2)/(4(q-1))) and v = 1 - c*u on the steep branch otherwise. Raises
    OutOfSectorError when the curve point would leave 0 <= v <= u <= 1.
    """
    _check_q(q)
    if not 0.0 <= u <= 1.0:
        raise OutOfSectorError(f"u must lie in [0, 1], got {u}")
    c, d = branch_coefficients(q)
    lo, hi = curve_u_range(q)
    if u < lo - ON_TOL or u > hi + ON_TOL:
        raise OutOfSectorError(
            f"curve at u={u} leaves the sector (admissible u in [{lo}, {hi}])")
    v = min(1.0 - c * u, d - u)
    return max(v, 0.0)


@dataclass(frozen=True)
class TradeoffPoint:
    """A point (u, v) = (1/r, 1/s) with its position relative to the curve."""

    u: float
    v: float
    q: float
    classification: str  # "Below" | "On" | "Above"


def classify(u: float, v: float, q: float) -> TradeoffPoint:
    """Locate (u, v) relative to the q-curve: Below, On, or Above.

    The curve is min(L1, L2), so Above means v exceeds at least one line and
    Below means v is under both; |v - curve| <= 1e-12 reads On.
    """
    _check_q(q)
    if not (0.0 <= v <= u <= 1.0):
        raise OutOfSectorError(
            f"(u, v) = ({u}, {v}) violates the sector 0 <= v <= u <= 1")
    c, d = branch_coefficients(q)
    curve = min(1.0 - c * u, d - u)
    if abs(v - curve) <= ON_TOL:
        label = "On"
    elif v > curve:
        label = "Above"
    else:
        label = "Below"
    return TradeoffPoint(u, v, q, label)
