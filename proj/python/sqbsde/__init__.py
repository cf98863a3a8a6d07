# SPDX-License-Identifier: MIT
"""Superquadratic BSDE solver, dual Monte Carlo bounds and counterexample checks."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
