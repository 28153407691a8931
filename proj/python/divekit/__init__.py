"""Diversity-evolution toolkit for protograph LDPC codes on block-fading channels.

Thin wrapper over the C++ core module; see the project README for the file
formats and the command-line interface.
"""

from ._divekit import *  # noqa: F401,F403
from ._divekit import __doc__ as _core_doc  # noqa: F401
