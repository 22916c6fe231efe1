"""Short-interval exponential sums of cusp form coefficients."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
