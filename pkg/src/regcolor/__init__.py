"""Laboratory for the k-colorability threshold of random d-regular graphs:
configuration-model samplers and exact enumeration, coloring predicates and
counting oracles, moment rate functions, Birkhoff-polytope optimization,
core/cluster geometry, threshold numerology, and a seeded experiment harness.
"""

from . import (graphs, colorings, moments, birkhoff, clustergeo, threshold,
               experiments, rng)
from .errors import GuardError, RegcolorError, ValidationError

__all__ = [
    "graphs", "colorings", "moments", "birkhoff", "clustergeo", "threshold",
    "experiments", "rng", "GuardError", "RegcolorError", "ValidationError",
]

__version__ = "0.1.0"
