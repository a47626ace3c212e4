"""Command-line front end: snapshots, energy sweeps, jump tracks, experiments.

Subcommands: snapshot | energy | track | dce | check.  All numeric CSV
output uses shortest round-trip decimals by default; ``--digits17``
switches to fixed 17-significant-digit rendering.

Exit codes: 0 success, 1 usage or parse error, 2 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional, Sequence

import numpy as np

from . import experiments, reflection, validation, wavestate
from .scenario import ScenarioError, load_scenario
from .snapshot import free_snapshot, reflection_snapshot
from .wavestate import ModeSpec

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2


def _fmt(value, digits17: bool) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g") if digits17 else repr(float(value))


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _write_csv(path: Optional[str], header: list[str], rows, digits17: bool) -> None:
    stream, close = _open_out(path)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v, digits17) for v in row])
    finally:
        if close:
            stream.close()


def _mode_from_args(args) -> ModeSpec:
    return ModeSpec(a=args.a, n=args.n, c=args.c)


def cmd_snapshot(args) -> int:
    mode = _mode_from_args(args)
    if (args.s is None) == (args.t is None):
        print("snapshot: exactly one of --s or --t is required", file=sys.stderr)
        return EXIT_USAGE
    if args.s is not None:
        snap = reflection_snapshot(mode, args.s, n_points=args.grid)
    else:
        snap = free_snapshot(mode, args.t, n_points=args.grid)
    rows = zip(snap.x, snap.E, snap.B, snap.rho)
    _write_csv(args.out, ["x", "E", "B", "rho"], rows, args.digits17)
    return EXIT_OK


def cmd_energy(args) -> int:
    mode = _mode_from_args(args)
    rows = []
    for s in np.linspace(0.0, mode.a, args.steps):
        led = reflection.energy_ledger(mode, s)
        rows.append((s, led.e_rw, led.e_E_sw, led.e_B_sw, led.e_sw, led.total / mode.a))
    _write_csv(args.out, ["s", "e_rw", "e_E_sw", "e_B_sw", "e_sw", "total"], rows, args.digits17)
    return EXIT_OK


def _located_inner_jump(mode: ModeSpec, s: float, grid: int) -> Optional[float]:
    snap = reflection_snapshot(mode, s, n_points=grid)
    cell = mode.a / (grid - 1)
    far_edge = reflection.domains(mode.a, s).rw[0]
    candidates = [
        j
        for j in validation.locate_jumps(snap)
        if abs(j.location - far_edge) > 1.5 * cell and abs(j.location) > 1.5 * cell
    ]
    if not candidates:
        return None
    return max(candidates, key=lambda j: j.score).location


def cmd_track(args) -> int:
    mode = _mode_from_args(args)
    s_values = np.linspace(0.0, mode.a, args.steps + 2)[1:-1]
    rows = []
    worst = 0.0
    cell = mode.a / (args.grid - 1)
    for s in s_values:
        x_analytic = reflection.inner_discontinuity_position(mode.a, s)
        x_located = _located_inner_jump(mode, s, args.grid)
        if x_located is None:
            residual = float("nan")
            worst = float("inf")
        else:
            residual = abs(x_located - x_analytic)
            worst = max(worst, residual)
        rows.append((s, x_analytic, x_located, residual))
    _write_csv(
        args.out, ["s", "x_D_analytic", "x_D_located", "residual"], rows, args.digits17
    )
    return EXIT_OK if worst <= cell else EXIT_INVARIANT


def cmd_dce(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.model is not None:
        scenario.model = experiments.OutcomeModel(args.model)
    if args.seed is not None:
        scenario.seed = args.seed
    if args.trials is not None:
        scenario.trials = args.trials
    scenario.validate()

    outcomes = experiments.run_trials(scenario)
    report = experiments.aggregate(scenario, outcomes)

    rows = (
        (
            i,
            o.clicked or "",
            o.click_time,
            o.scatter_position,
            o.resolved_branch.value,
        )
        for i, o in enumerate(outcomes)
    )
    _write_csv(args.out, ["trial", "instrument", "click_time", "scatter_x", "branch"], rows,
               args.digits17)

    print(report.summary())
    if scenario.model is experiments.OutcomeModel.PREFERRED_WAY:
        print("note: outcomes sampled under the comparator 'preferred way' model")

    violations = report.anti_coincidence_violations
    if scenario.model is experiments.OutcomeModel.CONVENTIONAL_QM:
        # silence audit: instruments with no crossing mass must never click
        reachable = {ev.instrument.id for ev in experiments.crossing_events(scenario)}
        for name, stats in report.per_instrument.items():
            if name not in reachable and stats.count > 0:
                print(f"invariant violation: unreachable instrument {name} clicked",
                      file=sys.stderr)
                violations += stats.count
    return EXIT_INVARIANT if violations else EXIT_OK


def cmd_check(args) -> int:
    mode = _mode_from_args(args)
    failures = 0

    def report(name: str, residual: float, tol: float) -> None:
        nonlocal failures
        ok = residual <= tol
        failures += 0 if ok else 1
        print(f"{'OK  ' if ok else 'FAIL'} {name}: residual {residual:.3e} (tol {tol:.1e})")

    e_res, b_res = wavestate.boundary_check(mode)
    report("cavity wall conditions (E, dB/dx)", max(e_res, b_res), 1e-12)

    def cavity_rho(x: np.ndarray) -> np.ndarray:
        e, b = wavestate.eigenmode(mode, x, 0.35 * mode.a / mode.c)
        return np.asarray(e) ** 2 + np.asarray(b) ** 2

    q = validation.integrate(cavity_rho, 0.0, mode.a, tol=1e-11)
    report("cavity normalization", abs(q.value - 1.0), 1e-8)

    for t in (0.0, 0.2 * mode.a / mode.c, 5.0 * mode.a / mode.c):
        ct = mode.c * t

        def split_rho(x: np.ndarray, _t=t) -> np.ndarray:
            e, b = wavestate.split_state(mode, x, _t)
            return np.asarray(e) ** 2 + np.asarray(b) ** 2

        cuts = [-ct, mode.a - ct, ct, mode.a + ct]
        q = validation.integrate(split_rho, -ct, mode.a + ct, tol=1e-11, breakpoints=cuts)
        report(f"split-state normalization at t={t:g}", abs(q.value - 1.0), 1e-8)

    suite = validation.identity_suite(mode, np.linspace(0.0, mode.a, 21))
    report("SW energy partition", suite["sw_partition"], 1e-12)
    report("energy ledger vs quadrature", suite["ledger_vs_quadrature"], 1e-8)
    report("reflection energy conservation", suite["conservation"], 1e-12)

    return EXIT_INVARIANT if failures else EXIT_OK


def _add_mode_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, default=1.0, help="cavity/pulse length")
    parser.add_argument("--n", type=int, default=1, help="mode index")
    parser.add_argument("--c", type=float, default=1.0, help="wave speed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitphoton",
        description="Analytic split-photon simulator: fields, reflection, delayed-choice runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snapshot", help="sample E, B, rho on a uniform grid")
    _add_mode_args(p)
    p.add_argument("--s", type=float, default=None, help="reflection moment in [0, a]")
    p.add_argument("--t", type=float, default=None, help="free-propagation time")
    p.add_argument("--grid", type=int, default=1024)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--digits17", action="store_true", help="fixed 17-significant-digit output")
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("energy", help="energy ledger sweep over s")
    _add_mode_args(p)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--out", default=None)
    p.add_argument("--digits17", action="store_true")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("track", help="inner-discontinuity track: closed form vs locator")
    _add_mode_args(p)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--grid", type=int, default=1024)
    p.add_argument("--out", default=None)
    p.add_argument("--digits17", action="store_true")
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("dce", help="run a delayed-choice scenario file")
    p.add_argument("scenario", help="scenario file path")
    p.add_argument("--model", choices=[m.value for m in experiments.OutcomeModel], default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", default=None, help="per-trial CSV path (default stdout)")
    p.add_argument("--digits17", action="store_true")
    p.set_defaults(func=cmd_dce)

    p = sub.add_parser("check", help="run the analytic self-consistency checks")
    _add_mode_args(p)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
