"""Migration-overhead-aware VM consolidation simulator."""

from ._vmc import *  # noqa: F401,F403
from ._vmc import __doc__  # noqa: F401
