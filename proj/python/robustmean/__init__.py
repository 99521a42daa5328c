"""Robust multivariate mean estimation."""

from ._robustmean import *  # noqa: F401,F403
from ._robustmean import __version__  # noqa: F401
