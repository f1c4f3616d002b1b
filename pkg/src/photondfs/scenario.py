"""Scenario files: a versioned JSON description of one simulation run.

Example::

    {
      "version": 1,
      "n_photons": 2,
      "gamma": 1.0,
      "coupling": "anticorrelated_pair",
      "initial_state": "singlet",
      "time": {"t_max": 1.0, "dt": 0.001, "snapshot_stride": 10},
      "integrator": "rk4",
      "observables": ["fidelity", "purity", "concurrence"],
      "seed": 0
    }

``coupling`` is either a preset name (``single_depolarizing``,
``anticorrelated_pair``, ``collective_equal``) or a correlation model object
such as ``{"kind": "anticorrelated_pair", "delta": 1.0}`` or
``{"kind": "custom", "matrix": [[1, 0], [0, 1]]}``.

``initial_state`` is a catalog tag, ``"random"`` (seeded by ``seed``),
``{"matrix": [[[re, im], ...], ...]}``, ``{"vector": [[re, im], ...]}``, or
``{"basis": [state, ...]}`` (accepted by ``dfs-check`` only).
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .lindblad import PRESETS, CouplingModel, preset_correlation
from .propagate import TimeGrid
from .spectra import CORRELATION_KINDS, CorrelationError, CorrelationModel, correlation_matrix
from .states import (
    NAMED_STATES,
    density_from_json,
    named_state,
    named_state_qubits,
    random_density,
    vector_from_json,
)

__all__ = [
    "Scenario",
    "ScenarioError",
    "load_scenario",
    "parse_scenario",
    "INTEGRATORS",
    "OBSERVABLES",
]

SCHEMA_VERSION = 1
INTEGRATORS = ("rk4", "expm", "closed_form")
OBSERVABLES = ("fidelity", "purity", "trace_distance", "concurrence", "x_variables")

_CANONICAL = {1: np.array([[1.0]]), 2: np.array([[1.0, -1.0], [-1.0, 1.0]])}


class ScenarioError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"scenario field {field_name!r}: {message}")
        self.field = field_name


@dataclass
class Scenario:
    n_photons: int
    gamma: float
    coupling: Any
    initial_state: Any
    time: dict
    integrator: str = "rk4"
    observables: list = field(default_factory=lambda: ["purity", "trace_distance"])
    seed: int = 0
    reference_state: Any = None
    version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return copy.deepcopy(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    # resolved objects

    @property
    def dim(self) -> int:
        return 2**self.n_photons

    def grid(self) -> TimeGrid:
        return TimeGrid(self.time["t_max"], self.time["dt"], self.time["snapshot_stride"])

    def correlation(self) -> np.ndarray:
        if isinstance(self.coupling, str):
            return preset_correlation(self.coupling, self.n_photons)
        c = self.coupling
        model = CorrelationModel(
            kind=c["kind"],
            n=self.n_photons,
            width=c.get("delta", 1.0),
            custom_matrix=c.get("matrix"),
        )
        return correlation_matrix(model)

    def coupling_model(self) -> CouplingModel:
        return CouplingModel(self.n_photons, self.correlation(), self.gamma)

    def closed_form_gamma(self) -> float | None:
        """Effective rate for the analytic solution, or None if none applies.

        Applies when the correlation is a positive multiple of the one-photon
        ``[[1]]`` or two-photon anticorrelated matrix.
        """
        canon = _CANONICAL.get(self.n_photons)
        if canon is None:
            return None
        c = self.correlation()
        scale = c[0, 0]
        if scale <= 0 or np.abs(c - scale * canon).max() > 1e-12 * scale:
            return None
        return self.gamma * scale

    def initial_density(self) -> np.ndarray:
        return _resolve_density(self.initial_state, self.n_photons, self.seed, "initial_state")

    def initial_kets(self) -> list[np.ndarray]:
        """Pure states named by ``initial_state`` (one, or a basis list)."""
        spec = self.initial_state
        items = spec["basis"] if isinstance(spec, dict) and "basis" in spec else [spec]
        return [_resolve_ket(item, self.n_photons, "initial_state") for item in items]

    def reference_ket(self) -> np.ndarray | None:
        spec = self.reference_state if self.reference_state is not None else self.initial_state
        try:
            return _resolve_ket(spec, self.n_photons, "reference_state")
        except ScenarioError:
            if self.reference_state is not None:
                raise
            return None


def _resolve_ket(spec, n: int, where: str) -> np.ndarray:
    if isinstance(spec, str):
        if spec in ("maximally_mixed", "random"):
            raise ScenarioError(where, f"{spec!r} is not a pure state")
        psi = named_state(spec)
    elif isinstance(spec, dict) and "vector" in spec:
        try:
            psi = vector_from_json(spec["vector"])
        except ValueError as exc:
            raise ScenarioError(where, str(exc)) from None
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-10:
            raise ScenarioError(where, f"vector is not normalized (norm {norm:.12g})")
    else:
        raise ScenarioError(where, "expected a pure state (catalog tag or {'vector': ...})")
    if psi.size != 2**n:
        raise ScenarioError(where, f"state has dimension {psi.size}, register has {2**n}")
    return psi


def _resolve_density(spec, n: int, seed: int, where: str) -> np.ndarray:
    if spec == "random":
        return random_density(seed, 2**n)
    if spec == "maximally_mixed":
        return named_state("maximally_mixed", n)
    if isinstance(spec, dict) and "matrix" in spec:
        try:
            rho = density_from_json(spec["matrix"])
        except ValueError as exc:
            raise ScenarioError(where, str(exc)) from None
        if rho.shape != (2**n, 2**n):
            raise ScenarioError(where, f"matrix is {rho.shape}, register needs {2**n}x{2**n}")
        return rho
    if isinstance(spec, dict) and "basis" in spec:
        raise ScenarioError(where, "a basis list can only be used with dfs-check")
    psi = _resolve_ket(spec, n, where)
    return np.outer(psi, psi.conj())


def _require(raw: dict, key: str):
    if key not in raw:
        raise ScenarioError(key, "missing required field")
    return raw[key]


def _number(value, key: str, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ScenarioError(key, f"expected a finite number, got {value!r}")
    if positive and value <= 0:
        raise ScenarioError(key, f"must be positive, got {value!r}")
    return float(value)


def _integer(value, key: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ScenarioError(key, f"expected an integer >= {minimum}, got {value!r}")
    return value


def _check_state_spec(spec, n: int, key: str, allow_basis: bool = True) -> None:
    if isinstance(spec, str):
        if spec == "random":
            return
        if spec not in NAMED_STATES:
            raise ScenarioError(key, f"unknown state tag {spec!r}")
        fixed = named_state_qubits(spec)
        if fixed is not None and fixed != n:
            raise ScenarioError(key, f"{spec!r} is a {fixed}-photon state but n_photons={n}")
        return
    if isinstance(spec, dict):
        keys = set(spec)
        if keys == {"matrix"}:
            _resolve_density(spec, n, 0, key)
            return
        if keys == {"vector"}:
            _resolve_ket(spec, n, key)
            return
        if keys == {"basis"} and allow_basis:
            if not isinstance(spec["basis"], list) or not spec["basis"]:
                raise ScenarioError(key, "basis must be a nonempty list")
            for item in spec["basis"]:
                _resolve_ket(item, n, key)
            return
    raise ScenarioError(key, f"unrecognized state description {spec!r}")


def _check_coupling(spec, n: int) -> None:
    if isinstance(spec, str):
        if spec not in PRESETS:
            raise ScenarioError("coupling", f"unknown preset {spec!r}; expected one of {PRESETS}")
        try:
            preset_correlation(spec, n)
        except ValueError as exc:
            raise ScenarioError("coupling", str(exc)) from None
        return
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScenarioError("coupling", "expected a preset name or an object with a 'kind'")
    extra = set(spec) - {"kind", "delta", "matrix"}
    if extra:
        raise ScenarioError("coupling", f"unexpected keys {sorted(extra)}")
    if spec["kind"] not in CORRELATION_KINDS:
        raise ScenarioError("coupling", f"unknown correlation kind {spec['kind']!r}")
    if "delta" in spec:
        _number(spec["delta"], "coupling.delta", positive=True)
    try:
        correlation_matrix(
            CorrelationModel(spec["kind"], n, spec.get("delta", 1.0), spec.get("matrix"))
        )
    except (ValueError, CorrelationError) as exc:
        raise ScenarioError("coupling", str(exc)) from None


def parse_scenario(raw: Any) -> Scenario:
    """Validate a decoded JSON object and fill in defaults."""
    if not isinstance(raw, dict):
        raise ScenarioError("<root>", "scenario must be a JSON object")
    known = {
        "version", "n_photons", "gamma", "coupling", "initial_state", "time",
        "integrator", "observables", "seed", "reference_state",
    }
    extra = set(raw) - known
    if extra:
        raise ScenarioError(sorted(extra)[0], "unknown field")

    version = _require(raw, "version")
    if version != SCHEMA_VERSION:
        raise ScenarioError("version", f"unsupported version {version!r}; expected {SCHEMA_VERSION}")
    n = _integer(_require(raw, "n_photons"), "n_photons", 1)
    if n > 6:
        raise ScenarioError("n_photons", "at most 6 photons are supported")
    gamma = _number(_require(raw, "gamma"), "gamma", positive=True)

    coupling = copy.deepcopy(_require(raw, "coupling"))
    _check_coupling(coupling, n)

    initial = copy.deepcopy(_require(raw, "initial_state"))
    _check_state_spec(initial, n, "initial_state")

    reference = copy.deepcopy(raw.get("reference_state"))
    if reference is not None:
        _check_state_spec(reference, n, "reference_state", allow_basis=False)
        _resolve_ket(reference, n, "reference_state")

    time_raw = raw.get("time", {})
    if not isinstance(time_raw, dict):
        raise ScenarioError("time", "expected an object")
    extra = set(time_raw) - {"t_max", "dt", "snapshot_stride"}
    if extra:
        raise ScenarioError("time", f"unexpected keys {sorted(extra)}")
    time = {
        "t_max": _number(time_raw.get("t_max", 10.0 / gamma), "time.t_max", positive=True),
        "dt": _number(time_raw.get("dt", 1e-3 / gamma), "time.dt", positive=True),
        "snapshot_stride": _integer(time_raw.get("snapshot_stride", 1), "time.snapshot_stride", 1),
    }
    if time["dt"] > time["t_max"]:
        raise ScenarioError("time.dt", "dt must not exceed t_max")

    integrator = raw.get("integrator", "rk4")
    if integrator not in INTEGRATORS:
        raise ScenarioError("integrator", f"expected one of {INTEGRATORS}, got {integrator!r}")

    observables = raw.get("observables", ["purity", "trace_distance"])
    if not isinstance(observables, list) or not observables:
        raise ScenarioError("observables", "expected a nonempty list")
    for obs in observables:
        if obs not in OBSERVABLES:
            raise ScenarioError("observables", f"unknown observable {obs!r}")
    if len(set(observables)) != len(observables):
        raise ScenarioError("observables", "duplicate entries")
    if n != 2 and ({"concurrence", "x_variables"} & set(observables)):
        raise ScenarioError("observables", "concurrence and x_variables need n_photons = 2")

    seed = _integer(raw.get("seed", 0), "seed", 0)

    scenario = Scenario(
        n_photons=n,
        gamma=gamma,
        coupling=coupling,
        initial_state=initial,
        time=time,
        integrator=integrator,
        observables=list(observables),
        seed=seed,
        reference_state=reference,
        version=version,
    )
    if "fidelity" in observables and scenario.reference_ket() is None:
        raise ScenarioError("reference_state", "fidelity needs a pure initial_state or a reference_state")
    if integrator == "closed_form" and scenario.closed_form_gamma() is None:
        raise ScenarioError(
            "integrator",
            "closed_form needs n_photons in {1, 2} with the single_depolarizing or anticorrelated_pair coupling",
        )
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError("<file>", f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("<file>", f"invalid JSON: {exc}") from None
    return parse_scenario(raw)
