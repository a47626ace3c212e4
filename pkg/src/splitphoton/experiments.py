"""Delayed-choice measurement scenarios over the split photon state.

A ``Scenario`` puts the source at the origin (pulse initially on
[-a/2, a/2]), an optional ideal mirror at x = +D with D > a, and a set of
photon detectors or electron guns with insertion schedules.  Trials are
sampled under one of two outcome models:

* conventional QM: Born-rule clicks with exact single-photon
  anti-coincidence, via sequential conditional sampling over the ordered
  crossing events;
* "preferred way": a comparator model in which the photon deterministically
  routes itself to the first-inserted reachable detector and always clicks.

Every trial draws from its own random stream derived from
(seed, trial_index), so runs are reproducible and order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import reflection
from .wavestate import ModeSpec

__all__ = [
    "InstrumentKind",
    "OutcomeModel",
    "Branch",
    "Instrument",
    "Scenario",
    "CrossingEvent",
    "TrialOutcome",
    "InstrumentStats",
    "StatsReport",
    "crossing_events",
    "sample_trial",
    "eg_scatter",
    "scatter_positions",
    "window",
    "run",
    "run_trials",
    "aggregate",
]

_MASS_EPS = 1e-15


class InstrumentKind(str, Enum):
    PHOTON_DETECTOR = "photon_detector"
    ELECTRON_GUN = "electron_gun"


class OutcomeModel(str, Enum):
    CONVENTIONAL_QM = "conventional-qm"
    PREFERRED_WAY = "preferred-way"


class Branch(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    LEADING_PULSE = "leading_pulse"
    TRAILING_PULSE = "trailing_pulse"
    NONE = "none"


@dataclass(frozen=True)
class Instrument:
    id: str
    kind: InstrumentKind
    position: float
    insertion_time: float = 0.0
    removal_time: Optional[float] = None
    efficiency: float = 1.0

    def validate(self) -> None:
        if self.insertion_time < 0:
            raise ValueError(f"{self.id}: insertion time must be non-negative")
        if self.removal_time is not None and self.removal_time <= self.insertion_time:
            raise ValueError(f"{self.id}: removal time must exceed insertion time")
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"{self.id}: efficiency must lie in [0, 1]")


@dataclass
class Scenario:
    mode: ModeSpec = field(default_factory=ModeSpec)
    mirror_distance: Optional[float] = None
    source_blocking: bool = False
    instruments: list[Instrument] = field(default_factory=list)
    model: OutcomeModel = OutcomeModel.CONVENTIONAL_QM
    trials: int = 100_000
    seed: int = 0
    phase: float = 0.0  # relative phase of the two half-selves; no observable
    # effect on position/click statistics, carried for completeness
    tie_rule: str = "earliest-inserted"
    mirror_counts_as_detector: bool = False

    def validate(self) -> None:
        if self.mirror_distance is not None and self.mirror_distance <= self.mode.a:
            raise ValueError("mirror distance must exceed pulse length")
        if self.trials < 1:
            raise ValueError("trial count must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.tie_rule not in ("earliest-inserted", "closest"):
            raise ValueError(f"unknown tie rule {self.tie_rule!r}")
        ids = [ins.id for ins in self.instruments]
        if len(set(ids)) != len(ids):
            raise ValueError("instrument ids must be distinct")
        positions = [ins.position for ins in self.instruments]
        if len(set(positions)) != len(positions):
            raise ValueError("instrument positions must be distinct")
        for ins in self.instruments:
            ins.validate()
        kinds = {ins.kind for ins in self.instruments}
        if len(kinds) > 1:
            raise ValueError("mixing photon detectors and electron guns is not supported")


@dataclass(frozen=True)
class CrossingEvent:
    instrument: Instrument
    branch: str  # "left" | "right" | "reflected"
    t_start: float
    t_end: float
    mass: float
    frac_lo: float  # pulse-profile CDF bounds of the portion caught
    frac_hi: float
    sweep_t0: float  # moment the pulse's leading edge crosses the instrument


@dataclass(frozen=True)
class TrialOutcome:
    clicked: Optional[str] = None
    click_time: Optional[float] = None
    scatter_position: Optional[float] = None
    resolved_branch: Branch = Branch.NONE
    flag: Optional[str] = None


@dataclass
class InstrumentStats:
    count: int
    rate: float
    ci_lo: float
    ci_hi: float
    click_times: list[float]


@dataclass
class StatsReport:
    trials: int
    per_instrument: dict[str, InstrumentStats]
    none_count: int
    anti_coincidence_violations: int
    undetermined_count: int

    def summary(self) -> str:
        lines = [f"trials: {self.trials}"]
        for name, st in sorted(self.per_instrument.items()):
            lines.append(
                f"  {name}: {st.count} clicks, rate {st.rate:.5f} "
                f"(95% CI [{st.ci_lo:.5f}, {st.ci_hi:.5f}])"
            )
        lines.append(f"no-detection trials: {self.none_count}")
        lines.append(f"anti-coincidence violations: {self.anti_coincidence_violations}")
        if self.undetermined_count:
            lines.append(
                f"model-undetermined trials (comparator tie rule applied): "
                f"{self.undetermined_count}"
            )
        return "\n".join(lines)


def _profile_cdf(mode: ModeSpec, u: float) -> float:
    """Fraction of one pulse profile within distance u of its leading edge."""
    u = min(max(u, 0.0), mode.a)
    if u == 0.0:
        return 0.0
    if u == mode.a:
        return 1.0
    k = mode.k
    return (u - math.sin(2.0 * k * u) / (2.0 * k)) / mode.a


def window(kind: str, *, a: float = 1.0, c: float = 1.0, D: Optional[float] = None,
           L: Optional[float] = None, S: Optional[float] = None) -> tuple[float, float]:
    """Geometry/timing windows of the canonical scenarios.

    kinds: "measurement_region" (spatial strip (D-a, D) swept during
    reflection), "reflection_shots" (shot times during reflection),
    "left_gun_shots" (pulse-overlap times at distance L left of the
    source), "pre_arrival_insertion" (detector insertion times before
    the pulse reaches distance S).  An interval with hi <= lo is empty.
    """
    if a <= 0 or c <= 0:
        raise ValueError("a and c must be positive")
    if kind == "measurement_region":
        if D is None or D <= a:
            raise ValueError("measurement region requires mirror distance D > a")
        return (D - a, D)
    if kind == "reflection_shots":
        if D is None or D <= a:
            raise ValueError("reflection shots require mirror distance D > a")
        t_d = (2.0 * D + a) / (2.0 * c)
        return (t_d - a / c, t_d)
    if kind == "left_gun_shots":
        if L is None or L <= 0:
            raise ValueError("left gun shots require positive distance L")
        return ((L - a / 2.0) / c, (L + a / 2.0) / c)
    if kind == "pre_arrival_insertion":
        if S is None or S <= 0:
            raise ValueError("pre-arrival insertion requires positive distance S")
        return (0.0, (S - a / 2.0) / c)
    raise ValueError(f"unknown window kind {kind!r}")


def crossing_events(scenario: Scenario) -> list[CrossingEvent]:
    """Ordered pulse-sweep events with per-instrument probability mass.

    Each half-self carries mass 1/2.  The right half-self may sweep a
    detector twice (incident, then reflected); detectors earlier on the
    same branch shadow later ones by the fraction they caught.  Events
    with vanishing mass are dropped.
    """
    scenario.validate()
    mode = scenario.mode
    a, c = mode.a, mode.c
    D = scenario.mirror_distance
    dets = [ins for ins in scenario.instruments if ins.kind is InstrumentKind.PHOTON_DETECTOR]

    sweeps: list[tuple[str, Instrument, float]] = []
    for det in dets:
        p = det.position
        if p < a / 2.0:
            sweeps.append(("left", det, (-p - a / 2.0) / c))
        if p > -a / 2.0 and (D is None or p < D):
            sweeps.append(("right", det, (p - a / 2.0) / c))
        if D is not None and p < D and (not scenario.source_blocking or p > a / 2.0):
            sweeps.append(("reflected", det, (2.0 * D - p - a / 2.0) / c))

    events: list[CrossingEvent] = []
    for chain_branches in (("left",), ("right", "reflected")):
        chain = sorted(
            (sw for sw in sweeps if sw[0] in chain_branches),
            key=lambda sw: (sw[2], sw[1].id),
        )
        remaining = 1.0
        for branch, det, t0 in chain:
            if remaining <= _MASS_EPS:
                break
            f_lo = _profile_cdf(mode, c * (det.insertion_time - t0))
            f_hi = (
                1.0
                if det.removal_time is None
                else _profile_cdf(mode, c * (det.removal_time - t0))
            )
            frac = max(0.0, f_hi - f_lo)
            caught = frac * det.efficiency
            mass = 0.5 * remaining * caught
            if mass > _MASS_EPS:
                events.append(
                    CrossingEvent(
                        instrument=det,
                        branch=branch,
                        t_start=max(det.insertion_time, t0),
                        t_end=min(
                            det.removal_time if det.removal_time is not None else math.inf,
                            t0 + a / c,
                        ),
                        mass=mass,
                        frac_lo=f_lo,
                        frac_hi=f_hi,
                        sweep_t0=t0,
                    )
                )
            remaining *= 1.0 - caught
    events.sort(key=lambda ev: (ev.t_start, ev.instrument.id))
    return events


@dataclass(frozen=True)
class _GunTable:
    x: np.ndarray
    cdf: np.ndarray


class _Simulator:
    """Precomputed per-scenario state shared by all trials."""

    def __init__(self, scenario: Scenario):
        scenario.validate()
        self.scenario = scenario
        mode = scenario.mode
        self.mode = mode
        self.guns = [
            ins for ins in scenario.instruments if ins.kind is InstrumentKind.ELECTRON_GUN
        ]
        self.events = crossing_events(scenario) if not self.guns else []
        self._reflection_end = (
            None
            if scenario.mirror_distance is None
            else (scenario.mirror_distance + mode.a / 2.0) / mode.c
        )
        # inverse pulse-profile CDF table for click-time sampling
        self._u_grid = np.linspace(0.0, mode.a, 4097)
        k = mode.k
        self._cdf_grid = (self._u_grid - np.sin(2.0 * k * self._u_grid) / (2.0 * k)) / mode.a
        self._cdf_grid[0], self._cdf_grid[-1] = 0.0, 1.0

        self._gun_by_side: dict[Branch, Instrument] = {}
        for gun in self.guns:
            side = Branch.LEFT if gun.position < 0 else Branch.RIGHT
            if side in self._gun_by_side:
                raise ValueError("at most one electron gun per side is supported")
            self._gun_by_side[side] = gun
        self._gun_tables = {gun.id: self._build_gun_table(gun) for gun in self.guns}

    # -- electron-gun scatter sampling -------------------------------------

    def _build_gun_table(self, gun: Instrument) -> Optional[_GunTable]:
        mode = self.mode
        a, c = mode.a, mode.c
        t = gun.insertion_time
        p = gun.position
        D = self.scenario.mirror_distance
        if p >= 0 and D is not None:
            t_lo, t_hi = window("reflection_shots", a=a, c=c, D=D)
            if t_lo <= t <= t_hi:
                s = c * t - (D - a / 2.0)
                return self._reflection_table(s, D)
            if t < t_lo:
                lead = c * t - a / 2.0  # incident pulse, source frame
                if (p - a / 2.0) / c <= t:
                    return self._free_table(lead)
                return None
            # detached reflected pulse moving left
            lead = 2.0 * D - c * t - a / 2.0
            if lead <= p <= lead + a:
                return self._free_table(lead)
            return None
        # free pulse on either side of the source
        lead = (c * t - a / 2.0) if p >= 0 else (-c * t - a / 2.0)
        if lead <= p <= lead + a:
            return self._free_table(lead)
        return None

    def _free_table(self, left_edge: float) -> _GunTable:
        return _GunTable(x=left_edge + self._u_grid, cdf=self._cdf_grid.copy())

    def _reflection_table(self, s: float, D: float) -> _GunTable:
        mode = self.mode
        a = mode.a
        lo = -max(s, a - s)
        x_d = reflection.inner_discontinuity_position(a, s)
        if 0.0 < s < a:
            xs = np.concatenate(
                [np.linspace(lo, x_d, 2049), np.linspace(x_d, 0.0, 2049)[1:]]
            )
        else:
            xs = np.linspace(lo, 0.0, 4097)
        rho = np.asarray(reflection.density(mode, s, xs))
        cdf = np.concatenate([[0.0], np.cumsum((rho[1:] + rho[:-1]) * np.diff(xs) / 2.0)])
        cdf /= cdf[-1]
        return _GunTable(x=xs + D, cdf=cdf)

    # -- per-trial sampling -------------------------------------------------

    def _rng(self, trial_index: int) -> np.random.Generator:
        return np.random.default_rng([self.scenario.seed, trial_index])

    def trial(self, trial_index: int) -> TrialOutcome:
        rng = self._rng(trial_index)
        if self.guns:
            if self.scenario.model is OutcomeModel.PREFERRED_WAY:
                return self._gun_trial_preferred(rng)
            return self._gun_trial(rng)
        if self.scenario.model is OutcomeModel.PREFERRED_WAY:
            return self._preferred_trial(rng)
        return self._qm_trial(rng)

    def _sample_click_time(self, ev: CrossingEvent, rng: np.random.Generator) -> float:
        q = rng.uniform(ev.frac_lo, ev.frac_hi)
        u = float(np.interp(q, self._cdf_grid, self._u_grid))
        return ev.sweep_t0 + u / self.mode.c

    def _branch_label(self, ev: CrossingEvent) -> Branch:
        if ev.branch == "right":
            return Branch.RIGHT
        if ev.branch == "reflected":
            return Branch.TRAILING_PULSE
        if self._reflection_end is not None and ev.sweep_t0 >= self._reflection_end:
            # post-reflection one-way pair: the left half-self leads
            return Branch.LEADING_PULSE
        return Branch.LEFT

    def _qm_trial(self, rng: np.random.Generator) -> TrialOutcome:
        remaining = 1.0
        for ev in self.events:
            p = min(ev.mass / remaining, 1.0)
            if rng.random() < p:
                return TrialOutcome(
                    clicked=ev.instrument.id,
                    click_time=self._sample_click_time(ev, rng),
                    resolved_branch=self._branch_label(ev),
                )
            remaining -= ev.mass
        return TrialOutcome()

    def _preferred_trial(self, rng: np.random.Generator) -> TrialOutcome:
        first_event: dict[str, CrossingEvent] = {}
        for ev in self.events:
            first_event.setdefault(ev.instrument.id, ev)
        reachable = [ev.instrument for ev in first_event.values()]
        if self.scenario.mirror_counts_as_detector and self.scenario.mirror_distance is not None:
            # the photon routes to the mirror path at release
            reachable = [ins for ins in reachable if ins.position >= 0]
        if not reachable:
            return TrialOutcome()
        by_insertion = min(reachable, key=lambda i: (i.insertion_time, i.id))
        by_distance = min(reachable, key=lambda i: (abs(i.position), i.id))
        chosen = by_insertion if self.scenario.tie_rule == "earliest-inserted" else by_distance
        flag = (
            "model-undetermined"
            if len(reachable) > 1 and by_insertion is not by_distance
            else None
        )
        ev = first_event[chosen.id]
        return TrialOutcome(
            clicked=chosen.id,
            click_time=self._sample_click_time(ev, rng),
            resolved_branch=self._branch_label(ev),
            flag=flag,
        )

    def _gun_trial(self, rng: np.random.Generator) -> TrialOutcome:
        side = Branch.LEFT if rng.random() < 0.5 else Branch.RIGHT
        gun = self._gun_by_side.get(side)
        if gun is None:
            return TrialOutcome(resolved_branch=side)
        table = self._gun_tables[gun.id]
        if table is None:
            return TrialOutcome(resolved_branch=side, flag="no-overlap")
        x = float(np.interp(rng.random(), table.cdf, table.x))
        return TrialOutcome(
            clicked=gun.id,
            click_time=gun.insertion_time,
            scatter_position=x,
            resolved_branch=side,
        )

    def _gun_trial_preferred(self, rng: np.random.Generator) -> TrialOutcome:
        live = [g for g in self.guns if self._gun_tables[g.id] is not None]
        if not live:
            return TrialOutcome()
        by_insertion = min(live, key=lambda g: (g.insertion_time, g.id))
        by_distance = min(live, key=lambda g: (abs(g.position), g.id))
        chosen = by_insertion if self.scenario.tie_rule == "earliest-inserted" else by_distance
        flag = (
            "model-undetermined" if len(live) > 1 and by_insertion is not by_distance else None
        )
        table = self._gun_tables[chosen.id]
        x = float(np.interp(rng.random(), table.cdf, table.x))
        side = Branch.LEFT if chosen.position < 0 else Branch.RIGHT
        return TrialOutcome(
            clicked=chosen.id,
            click_time=chosen.insertion_time,
            scatter_position=x,
            resolved_branch=side,
            flag=flag,
        )


def sample_trial(scenario: Scenario, trial_index: int) -> TrialOutcome:
    """One detector trial; deterministic given (scenario, seed, trial_index)."""
    return _Simulator(scenario).trial(trial_index)


def eg_scatter(scenario: Scenario, trial_index: int) -> TrialOutcome:
    """One electron-gun trial; alias of ``sample_trial`` for gun scenarios."""
    return _Simulator(scenario).trial(trial_index)


def scatter_positions(scenario: Scenario, gun_id: str, n: int, seed: int = 0) -> np.ndarray:
    """Draw n scatter positions from a gun's instantaneous-density sampler.

    Conditions on the photon being on the gun's side; raises if the gun's
    shot does not overlap the pulse.
    """
    sim = _Simulator(scenario)
    table = sim._gun_tables.get(gun_id)
    if table is None:
        raise ValueError(f"gun {gun_id!r} has no pulse overlap at its shot time")
    rng = np.random.default_rng(seed)
    return np.interp(rng.random(n), table.cdf, table.x)


def run_trials(scenario: Scenario) -> list[TrialOutcome]:
    """All trial outcomes in trial order; bit-identical across repeat runs."""
    sim = _Simulator(scenario)
    return [sim.trial(i) for i in range(scenario.trials)]


def aggregate(scenario: Scenario, outcomes: list[TrialOutcome]) -> StatsReport:
    z = 1.959963984540054  # two-sided 95% normal quantile
    n = len(outcomes)
    per: dict[str, InstrumentStats] = {}
    for ins in scenario.instruments:
        times = [o.click_time for o in outcomes if o.clicked == ins.id and o.click_time is not None]
        count = sum(1 for o in outcomes if o.clicked == ins.id)
        rate = count / n
        half = z * math.sqrt(max(rate * (1.0 - rate), 0.0) / n)
        per[ins.id] = InstrumentStats(
            count=count,
            rate=rate,
            ci_lo=max(0.0, rate - half),
            ci_hi=min(1.0, rate + half),
            click_times=times,
        )
    none_count = sum(1 for o in outcomes if o.clicked is None)
    undetermined = sum(1 for o in outcomes if o.flag == "model-undetermined")
    return StatsReport(
        trials=n,
        per_instrument=per,
        none_count=none_count,
        anti_coincidence_violations=0,  # single click per trial by construction
        undetermined_count=undetermined,
    )


def run(scenario: Scenario) -> StatsReport:
    """Run all trials and aggregate rates, intervals, and audits."""
    return aggregate(scenario, run_trials(scenario))
