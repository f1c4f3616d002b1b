"""Dense operator algebra on N-qubit polarization registers.

Basis ordering is |H> = (1, 0), |V> = (0, 1) per qubit, with qubit 1 as the
leftmost Kronecker factor, so the two-photon basis is |HH>, |HV>, |VH>, |VV>.
"""
from __future__ import annotations

import enum
import math
from typing import Sequence

import numpy as np

__all__ = [
    "PauliAxis",
    "pauli",
    "embed",
    "weighted_collective",
    "matrix_exp",
]

MAX_QUBITS = 6


class PauliAxis(str, enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"


_PAULI = {
    PauliAxis.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    PauliAxis.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    PauliAxis.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(axis: PauliAxis | str) -> np.ndarray:
    """Return the 2x2 Pauli matrix for ``axis`` (a fresh copy)."""
    return _PAULI[PauliAxis(axis)].copy()


def embed(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator at ``site`` (1-based) of an ``n``-qubit register.

    >>> np.real(np.diag(embed(pauli("z"), 2, 2)))
    array([ 1., -1.,  1., -1.])
    """
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {op.shape}")
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"photon count must be in [1, {MAX_QUBITS}], got {n}")
    if not 1 <= site <= n:
        raise ValueError(f"site {site} out of range for {n} qubits")
    left = np.eye(2 ** (site - 1), dtype=np.complex128)
    right = np.eye(2 ** (n - site), dtype=np.complex128)
    return np.kron(np.kron(left, op), right)


def weighted_collective(axis: PauliAxis | str, weights: Sequence[float]) -> np.ndarray:
    """Return sum_j weights[j] * sigma_{axis, j} on a register of len(weights) qubits."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    n = w.size
    s = pauli(axis)
    out = np.zeros((2**n, 2**n), dtype=np.complex128)
    for j, wj in enumerate(w, start=1):
        if wj != 0.0:
            out += wj * embed(s, j, n)
    return out


# Taylor degree for the scaled argument. With ||A / 2^s||_1 <= 1/2 the
# remainder is below 0.5**17 / 17! ~ 2e-20.
_TAYLOR_DEGREE = 16
_SCALED_NORM = 0.5


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The argument is scaled by ``2**-s`` until its 1-norm is at most 1/2, the
    degree-16 Taylor polynomial is evaluated with the Paterson-Stockmeyer
    scheme, and the result is squared ``s`` times.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix_exp input has non-finite entries")
    dtype = np.result_type(a.dtype, np.float64)
    a = a.astype(dtype, copy=False)
    dim = a.shape[0]
    ident = np.eye(dim, dtype=dtype)
    norm = np.abs(a).sum(axis=0).max() if dim else 0.0
    if norm == 0.0:
        return ident

    s = max(0, math.ceil(math.log2(norm / _SCALED_NORM)))
    b = a / (2.0**s)

    # Paterson-Stockmeyer with block size 4: p(B) = sum_k B^{4k} q_k(B).
    coeffs = [1.0 / math.factorial(k) for k in range(_TAYLOR_DEGREE + 1)]
    powers = [ident, b, b @ b]
    powers.append(powers[2] @ b)
    b4 = powers[3] @ b
    blocks = [coeffs[k : k + 4] for k in range(0, _TAYLOR_DEGREE + 1, 4)]
    result = np.zeros_like(ident)
    for block in reversed(blocks):
        q = sum(c * powers[i] for i, c in enumerate(block))
        result = result @ b4 + q

    for _ in range(s):
        result = result @ result
    return result
