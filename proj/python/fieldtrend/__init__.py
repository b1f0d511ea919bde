"""Trend analysis of annual publication counts per research field."""

from ._core import *  # noqa: F401,F403
from ._core import FieldtrendError, __doc__  # noqa: F401
