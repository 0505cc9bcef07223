"""Surrogate-assisted optimization of mmWave antenna array parameters.

The toolkit pairs a slow Monte Carlo network simulator (the ground-truth
oracle) with fast regression emulators trained on a small simulated dataset,
and runs constrained gradient-free global optimization over the emulator.
"""

__version__ = "0.1.0"

from .antenna import ArrayConfig, Direction
from .simulator import MetricVector, SimParams, simulate

__all__ = [
    "ArrayConfig",
    "Direction",
    "MetricVector",
    "SimParams",
    "simulate",
    "__version__",
]
