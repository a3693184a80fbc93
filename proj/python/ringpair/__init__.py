"""Microring photon-pair source toolkit: spectra, pair statistics,
coincidence-counting simulation and heater tuning."""

from ._core import *  # noqa: F401,F403
from ._core import presets  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
