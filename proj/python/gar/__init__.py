"""Tail-risk forecasting for growth-at-risk: python bindings."""

from ._gar import *  # noqa: F401,F403
from ._gar import __doc__  # noqa: F401
