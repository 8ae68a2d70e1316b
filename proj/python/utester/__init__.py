"""Unitary testers, entropic bounds, MUUB checks and two-way QKD simulation."""

from ._utester import *  # noqa: F401,F403
from ._utester import __doc__  # noqa: F401

__version__ = "0.1.0"
