"""Normal-incidence reflection of a single length-a pulse from an ideal mirror.

The mirror sits at x = 0 and the incident pulse arrives from the left; the
field vanishes for x > 0.  The process is parameterized by s, the distance
propagated by the trailing edge since first contact (t = s/c), running from
0 to a.  During the first stage (s <= a/2) a standing-wave region grows
next to the mirror while the trailing part keeps running; in the second
stage (s >= a/2) the running region holds the already-reflected front.

Field values carry the 1/sqrt(a) prefactor so that E^2 + B^2 integrates
to 1 over the instantaneous support.  The energy ledger is reported in
the bare (pre-normalization) convention, where the grand total equals a.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .wavestate import FieldSample, ModeSpec

__all__ = [
    "Stage",
    "ReflectionPhase",
    "DomainSplit",
    "Quantity",
    "JumpKind",
    "DiscontinuityRecord",
    "EnergyLedger",
    "reflect_field",
    "density",
    "domains",
    "discontinuities",
    "energy_ledger",
    "inner_discontinuity_position",
]

ArrayLike = Union[float, np.ndarray]


class Stage(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class ReflectionPhase:
    """Moment of the reflection, s in [0, a] with its stage."""

    s: float
    stage: Stage

    @classmethod
    def at(cls, mode: ModeSpec, s: float) -> "ReflectionPhase":
        _check_s(mode, s)
        return cls(s=s, stage=Stage.FIRST if s <= mode.a / 2 else Stage.SECOND)


@dataclass(frozen=True)
class DomainSplit:
    """Instantaneous RW/SW intervals; a zero-length interval marks a point."""

    rw: tuple[float, float]
    sw: tuple[float, float]


class Quantity(str, Enum):
    E_VALUE = "E_value"
    B_VALUE = "B_value"
    DE_DX = "dE_dx"
    DB_DX = "dB_dx"


class JumpKind(str, Enum):
    EDGE = "edge"
    INNER = "inner"
    MIRROR_SURFACE = "mirror_surface"


@dataclass(frozen=True)
class DiscontinuityRecord:
    location: float
    quantity: Quantity
    jump: float  # right-side minus left-side limit, prefactor included
    kind: JumpKind


@dataclass(frozen=True)
class EnergyLedger:
    """Domain energies in the bare convention; e_rw + e_sw = a."""

    e_rw: float
    e_E_sw: float
    e_B_sw: float
    e_sw: float

    @property
    def total(self) -> float:
        return self.e_rw + self.e_sw

    def normalized(self) -> "EnergyLedger":
        """Same ledger scaled so the grand total is 1."""
        a = self.total
        return EnergyLedger(self.e_rw / a, self.e_E_sw / a, self.e_B_sw / a, self.e_sw / a)


def _check_s(mode: ModeSpec, s: float) -> None:
    if not 0.0 <= s <= mode.a:
        raise ValueError(f"s must lie in [0, {mode.a}], got {s}")


def domains(a: float, s: float) -> DomainSplit:
    """RW/SW intervals at moment s; degenerate intervals collapse to points."""
    if a <= 0:
        raise ValueError("a must be positive")
    if not 0.0 <= s <= a:
        raise ValueError(f"s must lie in [0, {a}], got {s}")
    if s <= a / 2:
        return DomainSplit(rw=(-a + s, -s), sw=(-s, 0.0))
    return DomainSplit(rw=(-s, s - a), sw=(s - a, 0.0))


def inner_discontinuity_position(a: float, s: float) -> float:
    """Location of the co-moving inner derivative discontinuities, -min(s, a-s)."""
    return -min(s, a - s)


def reflect_field(mode: ModeSpec, s: float, x: ArrayLike) -> FieldSample:
    """Instantaneous (E, B) of the reflecting pulse; zero past the mirror.

    The second-stage running-wave signs are E = -sin k(x+s), B = +sin k(x+s),
    which keeps both fields continuous at the RW/SW border for every mode.
    """
    _check_s(mode, s)
    x = np.asarray(x, dtype=float)
    a, k = mode.a, mode.k
    pref = 1.0 / np.sqrt(a)
    dom = domains(a, s)
    rw_lo, rw_hi = dom.rw
    sw_lo, _ = dom.sw

    in_sw = (x >= sw_lo) & (x <= 0.0)
    in_rw = (x >= rw_lo) & (x < sw_lo)

    e_sw = -2.0 * np.sin(k * x) * np.cos(k * s)
    b_sw = 2.0 * np.cos(k * x) * np.sin(k * s)
    if s <= a / 2:
        e_rw = -np.sin(k * (x - s))
        b_rw = -np.sin(k * (x - s))
    else:
        e_rw = -np.sin(k * (x + s))
        b_rw = np.sin(k * (x + s))

    e = pref * np.select([in_sw, in_rw], [e_sw, e_rw], default=0.0)
    b = pref * np.select([in_sw, in_rw], [b_sw, b_rw], default=0.0)
    if e.ndim == 0:
        return FieldSample(float(e), float(b))
    return FieldSample(e, b)


def density(mode: ModeSpec, s: float, x: ArrayLike) -> ArrayLike:
    """Probability density E^2 + B^2 of the reflecting pulse, in closed form."""
    _check_s(mode, s)
    x = np.asarray(x, dtype=float)
    a, k = mode.a, mode.k
    dom = domains(a, s)
    rw_lo, _ = dom.rw
    sw_lo, _ = dom.sw

    in_sw = (x >= sw_lo) & (x <= 0.0)
    in_rw = (x >= rw_lo) & (x < sw_lo)

    shift = -s if s <= a / 2 else s
    rho_rw = (2.0 / a) * np.sin(k * (x + shift)) ** 2
    rho_sw = (4.0 / a) * (
        np.sin(k * x) ** 2 * np.cos(k * s) ** 2 + np.cos(k * x) ** 2 * np.sin(k * s) ** 2
    )
    rho = np.select([in_sw, in_rw], [rho_sw, rho_rw], default=0.0)
    if rho.ndim == 0:
        return float(rho)
    return rho


def _one_sided_derivatives(mode: ModeSpec, s: float, x: float, side: str) -> tuple[float, float]:
    # Analytic dE/dx and dB/dx from the branch occupying the given side of x.
    a, k = mode.a, mode.k
    pref = 1.0 / np.sqrt(a)
    dom = domains(a, s)
    rw_lo, rw_hi = dom.rw
    sw_lo, _ = dom.sw
    probe = x - 1e-12 if side == "left" else x + 1e-12
    if probe > 0.0 or probe < rw_lo:
        return 0.0, 0.0
    if probe >= sw_lo:
        de = -2.0 * k * np.cos(k * x) * np.cos(k * s)
        db = -2.0 * k * np.sin(k * x) * np.sin(k * s)
    elif s <= a / 2:
        de = -k * np.cos(k * (x - s))
        db = -k * np.cos(k * (x - s))
    else:
        de = -k * np.cos(k * (x + s))
        db = k * np.cos(k * (x + s))
    return pref * de, pref * db


def discontinuities(mode: ModeSpec, s: float) -> list[DiscontinuityRecord]:
    """All instantaneous discontinuity records at moment s.

    For 0 < s < a there are the two co-located inner derivative jumps at
    -min(s, a-s), derivative kinks at the far (moving) edge, and the
    B-value jump at the mirror surface.  At s in {0, a} only the edge and
    mirror records remain.
    """
    _check_s(mode, s)
    a, k = mode.a, mode.k
    pref = 1.0 / np.sqrt(a)
    records: list[DiscontinuityRecord] = []

    if 0.0 < s < a:
        x_d = inner_discontinuity_position(a, s)
        de_l, db_l = _one_sided_derivatives(mode, s, x_d, "left")
        de_r, db_r = _one_sided_derivatives(mode, s, x_d, "right")
        records.append(DiscontinuityRecord(x_d, Quantity.DE_DX, de_r - de_l, JumpKind.INNER))
        records.append(DiscontinuityRecord(x_d, Quantity.DB_DX, db_r - db_l, JumpKind.INNER))

    x_edge = domains(a, s).rw[0]
    de_in, db_in = _one_sided_derivatives(mode, s, x_edge, "right")
    records.append(DiscontinuityRecord(x_edge, Quantity.DE_DX, de_in, JumpKind.EDGE))
    records.append(DiscontinuityRecord(x_edge, Quantity.DB_DX, db_in, JumpKind.EDGE))

    # Surface current on the mirror: B jumps from its x -> 0- value to zero.
    b_surface = pref * 2.0 * np.sin(k * s)
    records.append(DiscontinuityRecord(0.0, Quantity.B_VALUE, -b_surface, JumpKind.MIRROR_SURFACE))
    return records


def energy_ledger(mode: ModeSpec, s: float) -> EnergyLedger:
    """Closed-form domain energies at moment s (bare convention, total = a)."""
    _check_s(mode, s)
    a, k = mode.a, mode.k
    sin4 = np.sin(4.0 * k * s) / (2.0 * k)
    sin2 = np.sin(2.0 * k * s) / (2.0 * k)
    cos2ks = np.cos(k * s) ** 2
    sin2ks = np.sin(k * s) ** 2
    if s <= a / 2:
        e_rw = a - 2.0 * s + sin4
        e_e = 2.0 * (s - sin2) * cos2ks
        e_b = 2.0 * (s + sin2) * sin2ks
        e_sw = 2.0 * s - sin4
    else:
        e_rw = 2.0 * s - a - sin4
        e_e = (2.0 * (a - s) + 2.0 * sin2) * cos2ks
        e_b = (2.0 * (a - s) - 2.0 * sin2) * sin2ks
        e_sw = 2.0 * (a - s) + sin4
    return EnergyLedger(e_rw=float(e_rw), e_E_sw=float(e_e), e_B_sw=float(e_b), e_sw=float(e_sw))
