"""Exact computations with finite-dimensional 3-Bihom-Lie algebras."""

from .algebra import *  # noqa: F401,F403
from .constructions import *  # noqa: F401,F403
from .derivations import *  # noqa: F401,F403
from .linalg import DimensionMismatch, SingularMatrix  # noqa: F401
from .quadratic import *  # noqa: F401,F403
from .representations import *  # noqa: F401,F403

__version__ = "0.1.0"
