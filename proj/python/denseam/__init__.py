"""Shallow tied-weight associative memory laboratory.

Thin wrapper around the compiled extension; everything substantive lives in
the C++ core.
"""

from ._denseam import *  # noqa: F401,F403
from ._denseam import __version__  # noqa: F401
