"""Two-phase Bezier-simplex interpolation for expensive bi-objective optimization.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._tpb import *  # noqa: F401,F403
from ._tpb import __doc__  # noqa: F401

__version__ = "0.1.0"
