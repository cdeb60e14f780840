"""Thermal entanglement in mixed-spin (S, 1/2) Heisenberg chains."""

from ._core import *  # noqa: F401,F403
from ._core import ComputationError, SpinQuantum, ValidationError  # noqa: F401

__version__ = "0.1.0"
