"""Pure states, density matrices, the named polarization states, and validation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

__all__ = [
    "NAMED_STATES",
    "StateValidationError",
    "ValidationReport",
    "named_state",
    "density_from_pure",
    "validate",
    "random_density",
    "density_to_json",
    "density_from_json",
    "vector_from_json",
    "as_density",
    "named_state_qubits",
]

NORM_TOL = 1e-12


class StateValidationError(ValueError):
    """Raised when an input is not a normalized state."""


def _ket(bits: str) -> np.ndarray:
    # "HV" -> |HV>, H = 0, V = 1
    idx = int(bits.replace("H", "0").replace("V", "1"), 2)
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[idx] = 1.0
    return v


def _singlet() -> np.ndarray:
    return (_ket("HV") - _ket("VH")) / math.sqrt(2)


def _logical0() -> np.ndarray:
    s = _ket("HV") - _ket("VH")
    return 0.5 * np.kron(s, s)


def _logical1() -> np.ndarray:
    t0 = _ket("HV") + _ket("VH")
    psi = (_ket("HHVV") + _ket("VVHH")) / math.sqrt(3) - np.kron(t0, t0) / (2 * math.sqrt(3))
    norm = np.linalg.norm(psi)
    # The printed coefficients are already normalized: 2/3 + 4/12 = 1.
    assert abs(norm - 1.0) < NORM_TOL
    return psi / norm


NAMED_STATES = {
    "singlet": (2, _singlet),
    "product_H": (1, lambda: _ket("H")),
    "product_HH": (2, lambda: _ket("HH")),
    "logical0_4q": (4, _logical0),
    "logical1_4q": (4, _logical1),
    "maximally_mixed": (None, None),
}


def named_state(tag: str, n: int = 2) -> np.ndarray:
    """Return a catalog state.

    Pure states come back as amplitude vectors; ``maximally_mixed`` comes back
    as the density matrix ``I / 2**n`` (the only tag that uses ``n``).
    """
    if tag not in NAMED_STATES:
        raise ValueError(f"unknown state tag {tag!r}; expected one of {sorted(NAMED_STATES)}")
    if tag == "maximally_mixed":
        if n < 1:
            raise ValueError("maximally_mixed needs n >= 1")
        d = 2**n
        return np.eye(d, dtype=np.complex128) / d
    return NAMED_STATES[tag][1]()


def named_state_qubits(tag: str) -> int | None:
    """Qubit count fixed by a catalog tag, or None if it adapts to the register."""
    if tag not in NAMED_STATES:
        raise ValueError(f"unknown state tag {tag!r}")
    return NAMED_STATES[tag][0]


def density_from_pure(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise StateValidationError(f"state is not normalized (norm {norm!r})")
    return np.outer(psi, psi.conj())


def as_density(state: np.ndarray) -> np.ndarray:
    """Promote a ket to a density matrix; pass square matrices through."""
    state = np.asarray(state, dtype=np.complex128)
    if state.ndim == 1:
        return density_from_pure(state)
    return state


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    def ok(self, herm_tol: float = 1e-12, trace_tol: float = 1e-12, eig_tol: float = 1e-10) -> bool:
        return (
            self.hermiticity_defect <= herm_tol
            and self.trace_defect <= trace_tol
            and self.min_eigenvalue >= -eig_tol
        )


def _check_square_pow2(rho: np.ndarray) -> None:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    d = rho.shape[0]
    if d < 2 or d & (d - 1):
        raise ValueError(f"dimension {d} is not a power of 2")


def validate(rho: np.ndarray) -> ValidationReport:
    """Hermiticity defect, trace defect and smallest eigenvalue of ``rho``.

    Pass/fail is left to the caller. The eigenvalue is taken from the
    Hermitian part so it is always real.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    _check_square_pow2(rho)
    herm = float(np.abs(rho - rho.conj().T).max())
    trace = float(abs(np.trace(rho) - 1.0))
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
    return ValidationReport(herm, trace, min_eig)


def random_density(seed: int, dim: int) -> np.ndarray:
    """Seeded full-rank random density matrix ``G G^dag / tr(G G^dag)``."""
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of 2")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


# JSON form: row-major array of [re, im] pairs.

def density_to_json(rho: np.ndarray) -> list[list[list[float]]]:
    rho = np.asarray(rho, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho]


def _complex_array(obj: Any, ndim: int) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def density_from_json(obj: Any) -> np.ndarray:
    rho = _complex_array(obj, 2)
    _check_square_pow2(rho)
    return rho


def vector_from_json(obj: Any) -> np.ndarray:
    psi = _complex_array(obj, 1)
    d = psi.size
    if d < 2 or d & (d - 1):
        raise ValueError(f"vector length {d} is not a power of 2")
    return psi
