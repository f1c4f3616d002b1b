"""Command-line front end.

    photondfs run --scenario s.json --out traj.csv
    photondfs dfs-check --scenario s.json --weights=1,-1
    photondfs compare --scenario s.json
    photondfs run --scenario s.json --print-config

Exit codes: 0 success, 2 scenario/schema error, 3 numerical failure
(integration blow-up or a trajectory failing the validity checks).
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .dfs import dark_state_check, decay_rate_probe, subspace_check
from .lindblad import build_generator
from .observables import (
    X_DECAY_RATES,
    InsufficientDataError,
    concurrence,
    fidelity,
    fit_rate,
    purity,
    trace_distance,
    x_transform,
)
from .propagate import (
    IntegrationError,
    Trajectory,
    propagate_closed_form,
    propagate_expm,
    propagate_rk4,
)
from .scenario import Scenario, ScenarioError, load_scenario

__all__ = ["main", "simulate", "observable_table", "compare_methods", "dfs_report"]

EXIT_SCHEMA = 2
EXIT_NUMERIC = 3

_CANONICAL_ANTI = np.array([[1.0, -1.0], [-1.0, 1.0]])


class NumericalFailure(RuntimeError):
    pass


def simulate(scenario: Scenario, integrator: str | None = None) -> Trajectory:
    integrator = integrator or scenario.integrator
    rho0 = scenario.initial_density()
    grid = scenario.grid()
    if integrator == "closed_form":
        gamma = scenario.closed_form_gamma()
        if gamma is None:
            raise ScenarioError("integrator", "no closed form for this coupling")
        return propagate_closed_form(rho0, gamma, grid, scenario.n_photons)
    g = build_generator(scenario.coupling_model())
    if integrator == "rk4":
        return propagate_rk4(rho0, g, grid)
    if integrator == "expm":
        return propagate_expm(rho0, g, grid)
    raise ScenarioError("integrator", f"unknown integrator {integrator!r}")


def _columns(observables) -> list[str]:
    cols = ["t"]
    for obs in observables:
        if obs == "x_variables":
            cols += [f"x{k}" for k in range(1, 6)]
            cols += [f"x{k}_{part}" for k in range(6, 11) for part in ("re", "im")]
        elif obs == "trace_distance":
            cols.append("trace_distance_maxmix")
        else:
            cols.append(obs)
    return cols


def observable_table(scenario: Scenario, traj: Trajectory) -> tuple[list[str], list[list[float]]]:
    """One row per snapshot: t followed by the requested observables in order."""
    psi = scenario.reference_ket() if "fidelity" in scenario.observables else None
    maxmix = np.eye(scenario.dim) / scenario.dim
    rows = []
    for t, rho in zip(traj.times, traj.states):
        row = [float(t)]
        for obs in scenario.observables:
            if obs == "fidelity":
                row.append(fidelity(rho, psi))
            elif obs == "purity":
                row.append(purity(rho))
            elif obs == "trace_distance":
                row.append(trace_distance(rho, maxmix))
            elif obs == "concurrence":
                row.append(concurrence(rho))
            elif obs == "x_variables":
                x = x_transform(rho).values()
                row += [float(v) for v in x[:5]]
                for z in x[5:]:
                    row += [z.real, z.imag]
        rows.append(row)
    return _columns(scenario.observables), rows


def _format(v: float) -> str:
    # round-trip exact and locale independent; adding 0.0 folds -0.0 into 0.0
    return format(float(v) + 0.0, ".16e")


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(v) for v in row])
    return buf.getvalue()


def _write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_valid(traj: Trajectory, label: str) -> None:
    if not traj.is_valid():
        herm, trace, min_eig = traj.max_defects()
        raise NumericalFailure(
            f"{label} trajectory failed validity checks: hermiticity {herm:.3e}, "
            f"trace {trace:.3e}, min eigenvalue {min_eig:.3e}"
        )


def run_scenario(scenario: Scenario, out: str | Path) -> None:
    traj = simulate(scenario)
    _check_valid(traj, scenario.integrator)
    columns, rows = observable_table(scenario, traj)
    _write_atomic(out, _csv_text(columns, rows))


def _anticorrelated_scale(scenario: Scenario) -> float | None:
    if scenario.n_photons != 2:
        return None
    c = scenario.correlation()
    scale = c[0, 0]
    if scale > 0 and np.abs(c - scale * _CANONICAL_ANTI).max() <= 1e-12 * scale:
        return scale
    return None


def compare_methods(scenario: Scenario) -> dict:
    """Cross-check every available integrator and fit the x-variable decay rates."""
    if scenario.n_photons != 2:
        raise ScenarioError("n_photons", "compare needs a two-photon scenario")
    methods = ["rk4", "expm"]
    if scenario.closed_form_gamma() is not None:
        methods.append("closed_form")
    trajectories = {m: simulate(scenario, m) for m in methods}
    for m, traj in trajectories.items():
        _check_valid(traj, m)

    diffs = {}
    for a, b in itertools.combinations(methods, 2):
        diffs[f"{a}-{b}"] = float(np.abs(trajectories[a].states - trajectories[b].states).max())

    rk4 = trajectories["rk4"]
    xs = np.array([x_transform(rho).as_array() for rho in rk4.states])
    fitted = {}
    for k in range(10):
        try:
            fitted[f"x{k + 1}"] = fit_rate(rk4.times, xs[:, k])
        except InsufficientDataError:
            fitted[f"x{k + 1}"] = None  # identically zero for this initial state

    scale = _anticorrelated_scale(scenario)
    expected = None
    if scale is not None:
        expected = {f"x{k + 1}": r * scenario.gamma * scale for k, r in enumerate(X_DECAY_RATES)}
    return {
        "methods": methods,
        "max_entry_diff": diffs,
        "fitted_rates": fitted,
        "fitted_from": "rk4",
        "expected_rates": expected,
    }


def dfs_report(scenario: Scenario, weights) -> dict:
    w = [float(v) for v in weights]
    if len(w) != scenario.n_photons:
        raise ScenarioError("weights", f"got {len(w)} weights for {scenario.n_photons} photons")
    kets = scenario.initial_kets()
    try:
        report = dark_state_check(kets[0], w) if len(kets) == 1 else subspace_check(kets, w)
    except ValueError as exc:
        raise ScenarioError("initial_state", str(exc)) from None
    rates = [decay_rate_probe(psi, w, scenario.gamma) for psi in kets]
    return {
        "weights": w,
        "gamma": scenario.gamma,
        "states": len(kets),
        "report": report.to_dict(),
        "decay_rates": rates,
    }


def _parse_weights(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be a comma-separated list of numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photondfs",
        description="Polarization decoherence of photons under weighted collective noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_arg(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument(
            "--print-config",
            action="store_true",
            help="print the normalized scenario (defaults filled in) and exit",
        )

    p_run = sub.add_parser("run", help="propagate a scenario and write observables as CSV")
    scenario_arg(p_run)
    p_run.add_argument("--out", help="output CSV path")

    p_dfs = sub.add_parser("dfs-check", help="decoherence-free check of the initial state(s)")
    scenario_arg(p_dfs)
    p_dfs.add_argument(
        "--weights",
        type=_parse_weights,
        help="comma-separated coupling weights, e.g. --weights=1,-1",
    )

    p_cmp = sub.add_parser("compare", help="cross-check integrators and fit x-variable rates")
    scenario_arg(p_cmp)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
        if args.print_config:
            print(scenario.to_json())
            return 0
        if args.command == "run":
            if not args.out:
                raise ScenarioError("--out", "an output path is required")
            run_scenario(scenario, args.out)
        elif args.command == "dfs-check":
            if args.weights is None:
                raise ScenarioError("--weights", "weights are required")
            print(json.dumps(dfs_report(scenario, args.weights), indent=2))
        elif args.command == "compare":
            print(json.dumps(compare_methods(scenario), indent=2))
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (IntegrationError, NumericalFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
