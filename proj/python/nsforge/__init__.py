"""Spectral force-synthesis laboratory for small-data Navier-Stokes flows.

The heavy lifting lives in the _nsforge extension module; this package
re-exports its surface.
"""

from ._nsforge import *  # noqa: F401,F403
from ._nsforge import __version__, __doc__  # noqa: F401
