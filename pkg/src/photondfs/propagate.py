"""Time evolution of density matrices.

Three interchangeable routes share one ``TimeGrid``:

* :func:`propagate_rk4` -- classical fixed-step RK4 on ``d rho/dt = D[rho]``;
* :func:`propagate_expm` -- exponentiated dense superoperator;
* :func:`propagate_closed_form` -- the analytic one- and two-photon solutions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lindblad import LindbladGenerator, apply, superoperator, unvec, vec
from .observables import X_DECAY_RATES, XVariables, x_inverse, x_transform
from .operators import matrix_exp
from .states import as_density, validate

__all__ = [
    "TimeGrid",
    "Trajectory",
    "IntegrationError",
    "propagate_rk4",
    "propagate_expm",
    "closed_form_single",
    "closed_form_pair",
    "propagate_closed_form",
    "TRAJECTORY_TOL",
]

# (hermiticity, trace, negative-eigenvalue) tolerances for trajectory snapshots
TRAJECTORY_TOL = (1e-9, 1e-9, 1e-8)


class IntegrationError(RuntimeError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on ``[0, t_max]``.

    ``dt`` is an upper bound: the step is shrunk to ``t_max / n_steps`` with
    ``n_steps = round(t_max / dt)`` so the grid ends exactly on ``t_max``.
    Snapshots are kept every ``snapshot_stride`` steps, always including t=0.
    """

    t_max: float
    dt: float = 1e-3
    snapshot_stride: int = 1

    def __post_init__(self):
        if not (self.dt > 0 and self.t_max > 0 and self.dt <= self.t_max * (1 + 1e-12)):
            raise ValueError(f"need 0 < dt <= t_max, got dt={self.dt}, t_max={self.t_max}")
        if int(self.snapshot_stride) != self.snapshot_stride or self.snapshot_stride < 1:
            raise ValueError(f"snapshot_stride must be a positive integer, got {self.snapshot_stride}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_max / self.dt)))

    @property
    def step(self) -> float:
        return self.t_max / self.n_steps

    def snapshot_indices(self) -> np.ndarray:
        return np.arange(0, self.n_steps + 1, self.snapshot_stride)

    def times(self) -> np.ndarray:
        return self.snapshot_indices() * self.step


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (snapshots, dim, dim)

    def __len__(self):
        return len(self.times)

    def final(self) -> np.ndarray:
        return self.states[-1]

    def max_defects(self) -> tuple[float, float, float]:
        """Worst hermiticity defect, trace defect and min eigenvalue over all snapshots."""
        reports = [validate(s) for s in self.states]
        return (
            max(r.hermiticity_defect for r in reports),
            max(r.trace_defect for r in reports),
            min(r.min_eigenvalue for r in reports),
        )

    def is_valid(self, tol=TRAJECTORY_TOL) -> bool:
        herm, trace, min_eig = self.max_defects()
        return herm <= tol[0] and trace <= tol[1] and min_eig >= -tol[2]


def _initial(rho0, dim: int) -> np.ndarray:
    rho = as_density(rho0)
    if rho.shape != (dim, dim):
        raise ValueError(f"initial state shape {rho.shape} does not match generator dim {dim}")
    return rho.astype(np.complex128, copy=True)


def propagate_rk4(rho0, g: LindbladGenerator, grid: TimeGrid) -> Trajectory:
    """Fixed-step RK4. The state is re-Hermitized after every step; trace and
    positivity are left alone so any violation stays visible."""
    rho = _initial(rho0, g.dim)
    h = grid.step
    stride = grid.snapshot_stride
    snaps = [rho.copy()]
    with np.errstate(over="ignore", invalid="ignore"):  # blow-up is reported below
        for n in range(1, grid.n_steps + 1):
            k1 = apply(g, rho)
            k2 = apply(g, rho + 0.5 * h * k1)
            k3 = apply(g, rho + 0.5 * h * k2)
            k4 = apply(g, rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            rho = 0.5 * (rho + rho.conj().T)
            if not np.all(np.isfinite(rho)):
                raise IntegrationError("non-finite state during RK4 integration", step=n)
            if n % stride == 0:
                snaps.append(rho.copy())
    return Trajectory(grid.times(), np.array(snaps))


def propagate_expm(rho0, g: LindbladGenerator, grid: TimeGrid) -> Trajectory:
    """Propagate with ``exp(t S)``: one exponential per snapshot interval, applied repeatedly."""
    rho = _initial(rho0, g.dim)
    s = superoperator(g)
    step_map = matrix_exp(grid.step * grid.snapshot_stride * s)
    v = vec(rho)
    snaps = [rho]
    for n in range(1, len(grid.snapshot_indices())):
        v = step_map @ v
        if not np.all(np.isfinite(v)):
            raise IntegrationError("non-finite state during propagation", step=n * grid.snapshot_stride)
        snaps.append(unvec(v, g.dim))
    return Trajectory(grid.times(), np.array(snaps))


def closed_form_single(rho0, gamma: float, t: float) -> np.ndarray:
    """Single-photon depolarizing solution rho0 e^{-2 gamma t} + (I/2)(1 - e^{-2 gamma t})."""
    rho0 = as_density(rho0)
    if rho0.shape != (2, 2):
        raise ValueError("closed_form_single needs a 2x2 state")
    p = math.exp(-2.0 * gamma * t)
    return rho0 * p + 0.5 * np.eye(2) * (1.0 - p)


def closed_form_pair(rho0, gamma: float, t: float) -> np.ndarray:
    """Anticorrelated two-photon solution via the decoupled x-variables."""
    rho0 = as_density(rho0)
    if rho0.shape != (4, 4):
        raise ValueError("closed_form_pair needs a 4x4 state")
    x0 = x_transform(rho0).values()
    decayed = [xk * math.exp(-r * gamma * t) for xk, r in zip(x0, X_DECAY_RATES)]
    return x_inverse(XVariables(*decayed))


def propagate_closed_form(rho0, gamma: float, grid: TimeGrid, n: int) -> Trajectory:
    if n == 1:
        solution = closed_form_single
    elif n == 2:
        solution = closed_form_pair
    else:
        raise ValueError(f"no closed form for {n} photons")
    times = grid.times()
    return Trajectory(times, np.array([solution(rho0, gamma, t) for t in times]))
