"""Sparse code multiple access: codebook design, detection and simulation."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
