"""Nonunitary split-step walk toolkit.

Thin wrapper over the C++ core: Floquet construction, quasienergy
spectra, Bloch / non-Bloch winding numbers, analytic edge modes, and
edge-state transfer diagnostics.
"""

from ._qwalk import *  # noqa: F401,F403
from ._qwalk import __version__  # noqa: F401
