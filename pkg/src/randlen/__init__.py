"""
randlen: Monte Carlo checks of tail and extremal indices for weighted
maxima and sums of a random number of heavy-tailed terms.

Submodules
----------
rv_core      closed-form regular-variation formulas
columns      ground-truth column generators and array couplings
lengths      random term counts and random ``d``
aggregate    weighted maxima, sums and running maxima
estimators   Hill and extremal-index estimators
harness      scenario runs, theorem verification, CLI and file I/O
"""

from . import aggregate, columns, estimators, lengths, rv_core
from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["aggregate", "columns", "estimators", "lengths", "rv_core", "BACKEND", "__version__"]
