"""Error taxonomy shared across the package.

All parameter-level failures derive from :class:`ParameterError` so the CLI can
map them to a single exit code; numeric failures (NaN/Inf in results) raise
:class:`NumericError`.
"""

from __future__ import annotations

__all__ = [
    "ParameterError",
    "SingularPointError",
    "NyquistError",
    "GridAlignmentError",
    "TruncationLossError",
    "ParameterRegionError",
    "OutOfSectorError",
    "NumericError",
]


class ParameterError(ValueError):
    """Invalid argument or configuration value."""


class SingularPointError(ParameterError):
    """Evaluation requested exactly at a singular point of the function."""


class NyquistError(ParameterError):
    """Grid resolution too small for the requested half-support (2K > N)."""


class GridAlignmentError(ParameterError):
    """Coordinate does not lie on the sampling lattice."""


class TruncationLossError(ParameterError):
    """Operation would lose sample mass beyond the truncated support."""


class ParameterRegionError(ParameterError):
    """(1/r, 1/s) does not lie strictly in the region the construction needs."""


class OutOfSectorError(ParameterError):
    """Point outside the admissible sector 0 <= v <= u <= 1."""


class NumericError(RuntimeError):
    """A computation produced NaN/Inf or an otherwise unusable result."""
