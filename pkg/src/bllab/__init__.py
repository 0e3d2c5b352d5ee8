"""bllab: Zak-transform toolkit for time-frequency localization trade-offs.

Modules
-------
special       smooth profiles and closed-form building blocks
zak           discrete Zak transform: forward, inverse, extension, atoms
tradeoff      the piecewise-linear localization trade-off curve and the
              Below/On/Above region classifier
windows       window synthesis (two lattice-zero constructions, a compactly
              supported variant, Gaussian/box references)
localization  time/frequency moments, difference operators, Stein-type sums
diagnostics   lattice-system probes, zero detection, coefficient divergence
              tests, the full analyze pipeline
acceptance    release acceptance checks shared by tests and the CLI
cli           deterministic command-line front end
"""

from __future__ import annotations

__version__ = "0.1.0"

from . import errors  # noqa: F401
