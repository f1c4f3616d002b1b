"""Scalar diagnostics for density matrices and trajectories."""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from .operators import pauli

__all__ = [
    "XVariables",
    "X_DECAY_RATES",
    "InsufficientDataError",
    "fidelity",
    "purity",
    "trace_distance",
    "concurrence",
    "x_transform",
    "x_inverse",
    "fit_rate",
]

# Decay rates of x1..x10 in units of gamma for the anticorrelated pair.
X_DECAY_RATES = (2.0, 2.0, 8.0, 2.0, 6.0, 2.0, 2.0, 6.0, 2.0, 2.0)


class InsufficientDataError(ValueError):
    pass


def _check_dims(rho: np.ndarray, psi: np.ndarray) -> None:
    if rho.shape != (psi.size, psi.size):
        raise ValueError(f"state shape {rho.shape} does not match reference of length {psi.size}")


def fidelity(rho: np.ndarray, psi_ref: np.ndarray) -> float:
    """Overlap <psi|rho|psi> with a pure reference state."""
    rho = np.asarray(rho)
    psi = np.asarray(psi_ref).ravel()
    _check_dims(rho, psi)
    return float(np.real(np.vdot(psi, rho @ psi)))


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    diff = np.asarray(rho) - np.asarray(sigma)
    if diff.ndim != 2 or diff.shape[0] != diff.shape[1]:
        raise ValueError("trace_distance needs two square matrices of equal shape")
    diff = (diff + diff.conj().T) / 2
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


_YY = np.kron(pauli("y"), pauli("y"))


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    The lambda_i (square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y))
    are taken as the singular values of sqrt(rho) (Y x Y) sqrt(rho)*. This
    avoids square roots of near-zero eigenvalues, which cost ~1e-8 accuracy
    on pure states.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence is defined for 4x4 states, got {rho.shape}")
    rho = (rho + rho.conj().T) / 2
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam = np.linalg.svd(sqrt_rho @ _YY @ sqrt_rho.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


@dataclass(frozen=True)
class XVariables:
    """The ten two-photon decay coordinates.

    ``x5 = rho23 - rho32`` is purely imaginary and is stored as its imaginary
    coefficient ``2 Im(rho23)``. ``x6``..``x10`` are complex.
    """

    x1: float
    x2: float
    x3: float
    x4: float
    x5: float
    x6: complex
    x7: complex
    x8: complex
    x9: complex
    x10: complex

    def values(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def as_array(self) -> np.ndarray:
        """All ten values as a complex array (x5 as the real coefficient of i)."""
        return np.array(self.values(), dtype=np.complex128)


def x_transform(rho: np.ndarray) -> XVariables:
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"x-variables are defined for 4x4 states, got {rho.shape}")
    r = lambda i, j: rho[i - 1, j - 1]  # noqa: E731
    x1 = r(1, 1) - r(4, 4)
    x2 = r(2, 2) - r(3, 3)
    x3 = r(1, 1) - r(2, 2) - r(3, 3) + r(4, 4) + 2 * r(2, 3) + 2 * r(3, 2)
    x4 = r(1, 1) - r(2, 2) - r(3, 3) + r(4, 4) - r(2, 3) - r(3, 2)
    x5 = r(2, 3) - r(3, 2)
    x6 = r(1, 2) + r(1, 3)
    x7 = r(2, 4) + r(3, 4)
    x8 = r(1, 2) - r(1, 3) + r(2, 4) - r(3, 4)
    x9 = r(1, 2) - r(1, 3) - r(2, 4) + r(3, 4)
    x10 = r(1, 4)
    return XVariables(
        float(np.real(x1)),
        float(np.real(x2)),
        float(np.real(x3)),
        float(np.real(x4)),
        float(np.imag(x5)),
        complex(x6),
        complex(x7),
        complex(x8),
        complex(x9),
        complex(x10),
    )


def x_inverse(x: XVariables) -> np.ndarray:
    """Rebuild rho from its x-variables using unit trace and Hermiticity."""
    diag_contrast = (x.x3 + 2 * x.x4) / 3  # rho11 + rho44 - rho22 - rho33
    re_sum_23 = (x.x3 - x.x4) / 3  # rho23 + rho32
    outer = (1 + diag_contrast) / 2  # rho11 + rho44
    inner = (1 - diag_contrast) / 2  # rho22 + rho33
    a = (x.x8 + x.x9) / 2  # rho12 - rho13
    b = (x.x8 - x.x9) / 2  # rho24 - rho34

    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = (outer + x.x1) / 2
    rho[3, 3] = (outer - x.x1) / 2
    rho[1, 1] = (inner + x.x2) / 2
    rho[2, 2] = (inner - x.x2) / 2
    rho[1, 2] = (re_sum_23 + 1j * x.x5) / 2
    rho[0, 1] = (x.x6 + a) / 2
    rho[0, 2] = (x.x6 - a) / 2
    rho[1, 3] = (x.x7 + b) / 2
    rho[2, 3] = (x.x7 - b) / 2
    rho[0, 3] = x.x10
    upper = np.triu_indices(4, 1)
    rho[upper[1], upper[0]] = np.conj(rho[upper])
    return rho


def fit_rate(times: Sequence[float], values: Sequence[complex], floor: float | None = None) -> float:
    """Decay rate from a least-squares line through log|value| against time.

    Samples with ``|value| <= floor`` are dropped; ``floor`` defaults to
    ``1e-8 * max|value|`` so integrator noise in the tail is not fitted.
    """
    t = np.asarray(times, dtype=float)
    mag = np.abs(np.asarray(values))
    if t.shape != mag.shape:
        raise ValueError("times and values must have the same length")
    if floor is None:
        floor = 1e-8 * (mag.max() if mag.size else 0.0)
    keep = mag > floor
    if keep.sum() < 10:
        raise InsufficientDataError(f"only {int(keep.sum())} samples above floor {floor:.3e}; need 10")
    slope, _ = np.polyfit(t[keep], np.log(mag[keep]), 1)
    return float(-slope)
