"""Simulation of the quantum scissors: optical truncation of a coherent state
to a vacuum / one-photon superposition with realistic sources and detectors."""

__version__ = "0.1.0"

from .baselines import *  # noqa: F401,F403
from .detectors import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .fock import *  # noqa: F401,F403
from .optics import *  # noqa: F401,F403
from .pipeline import *  # noqa: F401,F403
from .wigner import *  # noqa: F401,F403
