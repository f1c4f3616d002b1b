"""Gaussian photon spectra and the frequency-deviation correlation matrix.

Only deviations from the centre frequency enter the dynamics, so every model
reduces to the second-moment matrix ``C[j, k] = E[D_j D_k]`` of the photon
frequency deviations ``D_j``. Averages are taken with the Born-rule density
``|B(w)|**2`` of the Gaussian amplitude, which has variance ``width**2 / 2``.
The pump linewidth is taken to be zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "SpectrumModel",
    "CorrelationModel",
    "CorrelationError",
    "CORRELATION_KINDS",
    "correlation_matrix",
]

CORRELATION_KINDS = (
    "anticorrelated_pair",
    "correlated_pair",
    "independent",
    "equal_deterministic",
    "custom",
)


class CorrelationError(ValueError):
    """Correlation matrix is not symmetric positive semidefinite."""


@dataclass(frozen=True)
class SpectrumModel:
    """Gaussian single-photon spectrum centred on ``center`` with width ``width``."""

    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"spectral width must be positive, got {self.width}")

    def amplitude(self, omega):
        """pi^(-1/4) width^(-1/2) exp(-(omega - center)^2 / (2 width^2))."""
        x = (np.asarray(omega, dtype=float) - self.center) / self.width
        return math.pi**-0.25 / math.sqrt(self.width) * np.exp(-0.5 * x**2)

    def density(self, omega):
        return self.amplitude(omega) ** 2

    def deviation_variance(self) -> float:
        return 0.5 * self.width**2


@dataclass(frozen=True)
class CorrelationModel:
    kind: str
    n: int = 2
    width: float = 1.0
    custom_matrix: Optional[Sequence[Sequence[float]]] = None

    def __post_init__(self):
        if self.kind not in CORRELATION_KINDS:
            raise ValueError(f"unknown correlation kind {self.kind!r}")
        if self.kind in ("anticorrelated_pair", "correlated_pair") and self.n != 2:
            raise ValueError(f"{self.kind} describes exactly two photons, got n={self.n}")
        if self.n < 1:
            raise ValueError("photon count must be >= 1")
        if self.kind != "custom" and not self.width > 0:
            raise ValueError(f"spectral width must be positive, got {self.width}")
        if self.kind == "custom" and self.custom_matrix is None:
            raise ValueError("custom correlation needs a matrix")


def _check_psd(c: np.ndarray, tol: float = 1e-8) -> None:
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise CorrelationError(f"correlation matrix must be square, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise CorrelationError("correlation matrix has non-finite entries")
    if np.abs(c - c.T).max() > 1e-12:
        raise CorrelationError("correlation matrix is not symmetric")
    lam = np.linalg.eigvalsh(c)
    if lam.min() < -tol:
        raise CorrelationError(f"correlation matrix is not PSD (min eigenvalue {lam.min():.3e})")


def correlation_matrix(model: CorrelationModel) -> np.ndarray:
    """Second-moment matrix of the photon frequency deviations, in units of width**2."""
    var = SpectrumModel(width=model.width).deviation_variance() if model.kind != "custom" else None
    if model.kind == "anticorrelated_pair":
        # D_1 = w, D_2 = -w
        return var * np.array([[1.0, -1.0], [-1.0, 1.0]])
    if model.kind == "correlated_pair":
        return var * np.ones((2, 2))
    if model.kind == "independent":
        return var * np.eye(model.n)
    if model.kind == "equal_deterministic":
        # every photon carries the same fixed deviation D = width
        return model.width**2 * np.ones((model.n, model.n))
    c = np.array(model.custom_matrix, dtype=float)
    _check_psd(c)
    if c.shape[0] != model.n:
        raise CorrelationError(f"custom matrix is {c.shape[0]}x{c.shape[0]} but n={model.n}")
    return (c + c.T) / 2
