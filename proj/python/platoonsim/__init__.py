"""Simulation and certification toolkit for 1-D multi-agent platoons under
deadzone-based decentralized control.

Everything lives in the compiled extension; this package re-exports it.
"""

from platoonsim._core import *  # noqa: F401,F403
from platoonsim._core import __version__  # noqa: F401
