"""Dissipative generators for weighted collective polarization noise.

For a correlation matrix ``C`` over N photons and an overall rate ``gamma``
the generator is

    D[rho] = (gamma / 2) sum_{i in x,y,z} sum_{j,k} C_jk
             (s_ij rho s_ik - 1/2 {s_ik s_ij, rho})

which is trace preserving. Diagonalizing ``C = sum_m lam_m v_m v_m^T`` turns
it into ordinary Lindblad form with Hermitian collapse operators
``L_im = sum_j v_m[j] s_ij`` and rates ``(gamma / 2) lam_m``.

With this normalization ``C = [[1]]`` gives the single-photon depolarizing
equation (coherences decay at ``2 gamma``) and ``C = [[1, -1], [-1, 1]]``
reproduces the explicit two-photon rate table entry by entry.

Superoperators use column-stacking: ``vec(A rho B) = (B^T kron A) vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .operators import PauliAxis, weighted_collective
from .spectra import CorrelationError

__all__ = [
    "CouplingModel",
    "Channel",
    "LindbladGenerator",
    "build_generator",
    "apply",
    "superoperator",
    "vec",
    "unvec",
    "a1_table_generator",
    "choi_matrix",
    "PRESETS",
    "preset_correlation",
]

CLIP_TOL = 1e-12
PSD_ERROR_TOL = 1e-8

PRESETS = ("single_depolarizing", "anticorrelated_pair", "collective_equal")


def preset_correlation(name: str, n: int) -> np.ndarray:
    """Unit-normalized correlation matrices for the named coupling presets.

    ``single_depolarizing`` and ``anticorrelated_pair`` are scaled so that the
    printed decay rates (2 gamma and 8 gamma) come out with no extra factor.
    """
    if name == "single_depolarizing":
        if n != 1:
            raise ValueError("single_depolarizing is a one-photon preset")
        return np.array([[1.0]])
    if name == "anticorrelated_pair":
        if n != 2:
            raise ValueError("anticorrelated_pair is a two-photon preset")
        return np.array([[1.0, -1.0], [-1.0, 1.0]])
    if name == "collective_equal":
        return np.ones((n, n))
    raise ValueError(f"unknown coupling preset {name!r}; expected one of {PRESETS}")


@dataclass(frozen=True)
class CouplingModel:
    n: int
    correlation: np.ndarray
    gamma: float = 1.0

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.correlation, dtype=float))
        if c.shape != (self.n, self.n):
            raise ValueError(f"correlation must be {self.n}x{self.n}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise CorrelationError("correlation has non-finite entries")
        if np.abs(c - c.T).max() > 1e-12:
            raise CorrelationError("correlation is not symmetric")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        object.__setattr__(self, "correlation", c)

    @classmethod
    def from_weights(cls, weights: Sequence[float], gamma: float = 1.0) -> "CouplingModel":
        """Rank-one coupling where every photon has a fixed deviation ``weights[j]``."""
        w = np.asarray(weights, dtype=float)
        return cls(w.size, np.outer(w, w), gamma)


@dataclass(frozen=True)
class Channel:
    op: np.ndarray
    rate: float


@dataclass(frozen=True)
class LindbladGenerator:
    dim: int
    channels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        for ch in self.channels:
            if ch.op.shape != (self.dim, self.dim):
                raise ValueError(f"collapse operator shape {ch.op.shape} does not match dim {self.dim}")
            if ch.rate < 0:
                raise ValueError(f"negative channel rate {ch.rate}")

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply(self, rho)


def build_generator(model: CouplingModel) -> LindbladGenerator:
    """Diagonalize the correlation matrix into Hermitian collapse channels."""
    lam, vecs = np.linalg.eigh(model.correlation)
    if lam.min() < -PSD_ERROR_TOL:
        raise CorrelationError(f"correlation is not PSD (min eigenvalue {lam.min():.3e})")
    channels = []
    for m in range(model.n):
        if lam[m] <= CLIP_TOL:
            continue
        rate = 0.5 * model.gamma * lam[m]
        for axis in PauliAxis:
            op = weighted_collective(axis, vecs[:, m])
            channels.append(Channel(op, float(rate)))
    return LindbladGenerator(2**model.n, tuple(channels))


def apply(g: LindbladGenerator, rho: np.ndarray) -> np.ndarray:
    """Return D[rho] = sum rate * (L rho L^dag - 1/2 {L^dag L, rho})."""
    rho = np.asarray(rho)
    if rho.shape != (g.dim, g.dim):
        raise ValueError(f"state shape {rho.shape} does not match generator dim {g.dim}")
    out = np.zeros((g.dim, g.dim), dtype=np.complex128)
    for ch in g.channels:
        l = ch.op
        ldag = l.conj().T
        ll = ldag @ l
        out += ch.rate * (l @ rho @ ldag - 0.5 * (ll @ rho + rho @ ll))
    return out


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    return v.reshape((dim, dim), order="F")


def superoperator(g: LindbladGenerator) -> np.ndarray:
    d = g.dim
    ident = np.eye(d, dtype=np.complex128)
    s = np.zeros((d * d, d * d), dtype=np.complex128)
    for ch in g.channels:
        l = ch.op
        ll = l.conj().T @ l
        s += ch.rate * (np.kron(l.conj(), l) - 0.5 * np.kron(ident, ll) - 0.5 * np.kron(ll.T, ident))
    return s


def a1_table_generator(gamma: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Two-photon generator written out entry by entry from the explicit rate table.

    Only the diagonal and upper-triangle derivatives are listed; the lower
    triangle follows from Hermiticity. Kept deliberately independent of
    :func:`build_generator` so the two can be checked against each other.
    """

    def action(rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        if rho.shape != (4, 4):
            raise ValueError("the explicit rate table is a two-photon (4x4) generator")
        r = lambda i, j: rho[i - 1, j - 1]  # noqa: E731
        d = np.zeros((4, 4), dtype=np.complex128)
        d[0, 0] = -2 * r(1, 1) + r(2, 2) + r(3, 3) - r(2, 3) - r(3, 2)
        d[0, 1] = -3 * r(1, 2) + r(1, 3) - r(2, 4) + r(3, 4)
        d[0, 2] = -3 * r(1, 3) + r(1, 2) + r(2, 4) - r(3, 4)
        d[0, 3] = -2 * r(1, 4)
        d[1, 1] = -2 * r(2, 2) + r(1, 1) + r(4, 4) + r(2, 3) + r(3, 2)
        d[1, 2] = -r(1, 1) + r(2, 2) + r(3, 3) - 6 * r(2, 3) - r(4, 4)
        d[1, 3] = -r(1, 2) + r(1, 3) - 3 * r(2, 4) + r(3, 4)
        d[2, 2] = -2 * r(3, 3) + r(1, 1) + r(4, 4) + r(2, 3) + r(3, 2)
        d[2, 3] = r(1, 2) - r(1, 3) + r(2, 4) - 3 * r(3, 4)
        d[3, 3] = -2 * r(4, 4) + r(2, 2) + r(3, 3) - r(2, 3) - r(3, 2)
        for i in range(4):
            for j in range(i):
                d[i, j] = np.conj(d[j, i])
        return gamma * d

    return action


def choi_matrix(superop: np.ndarray) -> np.ndarray:
    """Choi matrix sum_ij |i><j| kron E(|i><j|) of a column-stacked superoperator."""
    superop = np.asarray(superop)
    d = int(round(np.sqrt(superop.shape[0])))
    choi = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            block = unvec(superop[:, i + j * d], d)
            choi[i * d : (i + 1) * d, j * d : (j + 1) * d] = block
    return choi
