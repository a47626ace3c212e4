"""Uniform-grid field snapshots for export and discontinuity detection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import reflection, wavestate
from .wavestate import ModeSpec

__all__ = ["Snapshot", "reflection_snapshot", "free_snapshot", "eigenmode_snapshot"]


@dataclass(frozen=True)
class Snapshot:
    """Sampled (x, E, B, rho) arrays at a fixed time parameter."""

    param_name: str  # "t" or "s"
    param: float
    x: np.ndarray
    E: np.ndarray
    B: np.ndarray
    rho: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.x)
        if not (len(self.E) == len(self.B) == len(self.rho) == n):
            raise ValueError("snapshot arrays must have equal length")


def _build(param_name: str, param: float, x: np.ndarray, e: np.ndarray, b: np.ndarray) -> Snapshot:
    return Snapshot(param_name=param_name, param=param, x=x, E=e, B=b, rho=e * e + b * b)


def reflection_snapshot(mode: ModeSpec, s: float, n_points: int = 1024) -> Snapshot:
    """Snapshot of the reflecting pulse on [-a, 0]."""
    x = np.linspace(-mode.a, 0.0, n_points)
    e, b = reflection.reflect_field(mode, s, x)
    return _build("s", s, x, e, b)


def free_snapshot(mode: ModeSpec, t: float, n_points: int = 1024) -> Snapshot:
    """Snapshot of the free split state over its support [-ct, a + ct]."""
    x = np.linspace(-mode.c * t, mode.a + mode.c * t, n_points)
    e, b = wavestate.split_state(mode, x, t)
    return _build("t", t, x, e, b)


def eigenmode_snapshot(mode: ModeSpec, t: float, n_points: int = 1024) -> Snapshot:
    """Snapshot of the trapped cavity mode on [0, a]."""
    x = np.linspace(0.0, mode.a, n_points)
    e, b = wavestate.eigenmode(mode, x, t)
    return _build("t", t, x, e, b)
