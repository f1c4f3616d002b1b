"""Decoherence-free state and subspace checks under weighted collective coupling.

A subspace is decoherence free when each collective operator
``L_i = sum_j w_j s_ij`` acts on it as a scalar. For a single state that is
``L_i psi = <L_i> psi``; a strictly annihilating ``L_i`` is not required.

With equal deterministic weights the singlet is dark for any nonzero common
deviation, not only for zero deviation. Anticorrelated weights ``(1, -1)``
are what destroy the protection.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .lindblad import CouplingModel, apply, build_generator, superoperator, unvec, vec
from .observables import fidelity, fit_rate
from .operators import PauliAxis, weighted_collective
from .propagate import TimeGrid, propagate_expm
from .states import density_from_pure

__all__ = [
    "DfsReport",
    "DEFAULT_TOL",
    "dark_state_check",
    "subspace_check",
    "decay_rate_probe",
    "stationary_limit",
]

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class DfsReport:
    residuals: tuple  # one per Pauli axis, in x, y, z order
    max_residual: float
    total_residual: float  # Euclidean norm over axes
    is_df: bool
    tolerance: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["residuals"] = list(self.residuals)
        return d


def _report(residuals, tol) -> DfsReport:
    res = tuple(float(r) for r in residuals)
    mx = max(res)
    return DfsReport(res, mx, float(np.sqrt(np.sum(np.square(res)))), mx <= tol, tol)


def _ket(psi, dim_expected: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.size != dim_expected:
        raise ValueError(f"state of length {psi.size} does not match {dim_expected}-dim register")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("state must be normalized")
    return psi


def dark_state_check(psi, weights: Sequence[float], tol: float = DEFAULT_TOL) -> DfsReport:
    """Residual ``||L_i psi - <L_i> psi||`` for each axis."""
    w = np.asarray(weights, dtype=float)
    psi = _ket(psi, 2**w.size)
    residuals = []
    for axis in PauliAxis:
        lpsi = weighted_collective(axis, w) @ psi
        mean = np.vdot(psi, lpsi)
        residuals.append(np.linalg.norm(lpsi - mean * psi))
    return _report(residuals, tol)


def subspace_check(basis: Sequence, weights: Sequence[float], tol: float = DEFAULT_TOL) -> DfsReport:
    """Residual ``||(I - P) L_i P|| + ||P L_i P - c_i P||`` in spectral norm, per axis."""
    w = np.asarray(weights, dtype=float)
    dim = 2**w.size
    if len(basis) == 0:
        raise ValueError("empty basis")
    b = np.column_stack([np.asarray(v, dtype=np.complex128).ravel() for v in basis])
    if b.shape[0] != dim:
        raise ValueError(f"basis vectors have length {b.shape[0]}, expected {dim}")
    gram = b.conj().T @ b
    if np.abs(gram - np.eye(b.shape[1])).max() > 1e-10:
        raise ValueError("basis is not orthonormal")
    proj = b @ b.conj().T
    comp = np.eye(dim) - proj
    residuals = []
    for axis in PauliAxis:
        l = weighted_collective(axis, w)
        inside = proj @ l @ proj
        c = np.trace(inside) / b.shape[1]
        leak = np.linalg.norm(comp @ l @ proj, 2)
        spread = np.linalg.norm(inside - c * proj, 2)
        residuals.append(leak + spread)
    return _report(residuals, tol)


def stationary_limit(rho0: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Long-time limit of ``exp(t S) rho0`` for a Hermitian, negative semidefinite ``S``.

    Generators built from Hermitian collapse operators are self-adjoint, so
    the limit is the orthogonal projection of vec(rho0) onto ker S.
    """
    lam, v = np.linalg.eigh((s + s.conj().T) / 2)
    scale = max(1.0, np.abs(lam).max())
    kernel = v[:, np.abs(lam) <= 1e-10 * scale]
    dim = rho0.shape[0]
    return unvec(kernel @ (kernel.conj().T @ vec(rho0)), dim)


def decay_rate_probe(psi, weights: Sequence[float], gamma: float = 1.0, n_samples: int = 200) -> float:
    """Fitted decay rate of the fidelity of ``psi`` toward its stationary value.

    Two passes: the initial log-slope gives a first window ``[0, 2 / r0]``;
    the rate fitted there sets the final window ``[0, 2 / r1]``.
    Returns 0 for (numerically) stationary states.
    """
    w = np.asarray(weights, dtype=float)
    psi = _ket(psi, 2**w.size)
    g = build_generator(CouplingModel.from_weights(w, gamma))
    rho0 = density_from_pure(psi)
    f_inf = fidelity(stationary_limit(rho0, superoperator(g)), psi)
    gap0 = 1.0 - f_inf
    if gap0 <= 1e-12:
        return 0.0
    rate = -fidelity(apply(g, rho0), psi) / gap0
    if rate < 1e-6 * gamma:
        return 0.0
    for _ in range(2):
        t_max = 2.0 / rate
        grid = TimeGrid(t_max, t_max / n_samples)
        traj = propagate_expm(rho0, g, grid)
        gap = [fidelity(r, psi) - f_inf for r in traj.states]
        rate = fit_rate(traj.times, gap)
        if rate < 1e-6 * gamma:
            return 0.0
    return rate
