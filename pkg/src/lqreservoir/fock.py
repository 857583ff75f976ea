"""Truncated Fock-space linear algebra.

Operators are plain dense ``numpy`` arrays of shape ``(dim, dim)``; states and
density matrices are thin immutable wrappers that carry the truncation along
with the amplitudes.  Quadratures follow ``x = (b + b†)/√2``,
``p = -i(b - b†)/√2`` so that the vacuum has ``<x²> = 1/2``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InvalidDimensionError, InvalidParametersError

INTERIOR_FRACTION = 0.8


def _check_dim(dim: int, minimum: int = 2) -> int:
    if int(dim) != dim or dim < minimum:
        raise InvalidDimensionError(f"dim must be an integer >= {minimum}, got {dim!r}")
    return int(dim)


@dataclass(frozen=True, eq=False)
class FockState:
    """Pure state in an ``N``-level truncated Fock space."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex).reshape(-1)
        if a.size < 1:
            raise InvalidDimensionError("a FockState needs at least one amplitude")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "FockState":
        n = self.norm
        if n == 0:
            raise InvalidParametersError("cannot normalize the zero vector")
        return FockState(self.amps / n)

    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def tail_population(self, fraction: float = 0.9) -> float:
        """Population in the top ``1 - fraction`` of the levels (the top decile by default)."""
        start = int(np.floor(fraction * self.dim))
        return float(self.populations()[start:].sum())

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.vdot(self.amps, op @ self.amps))

    def overlap(self, other: "FockState") -> complex:
        _same_dim(self.dim, other.dim)
        return complex(np.vdot(self.amps, other.amps))

    def resized(self, dim: int) -> "FockState":
        """Zero-pad or crop to ``dim`` levels (no renormalization)."""
        out = np.zeros(dim, dtype=complex)
        k = min(dim, self.dim)
        out[:k] = self.amps[:k]
        return FockState(out)

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amps, self.amps.conj()))

    def to_json(self) -> str:
        return json.dumps(state_to_dict(self))

    @classmethod
    def from_json(cls, text: str) -> "FockState":
        return state_from_dict(json.loads(text))


def state_to_dict(state: FockState) -> dict:
    return {"dim": state.dim, "amps": [[float(z.real), float(z.imag)] for z in state.amps]}


def state_from_dict(data: dict) -> FockState:
    amps = np.array([complex(re, im) for re, im in data["amps"]])
    if len(amps) != int(data["dim"]):
        raise InvalidDimensionError("'dim' does not match the number of amplitudes")
    return FockState(amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDimensionError("density matrix must be square")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.entries + self.entries.conj().T))

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.entries @ op))

    def tail_population(self, fraction: float = 0.9) -> float:
        start = int(np.floor(fraction * self.dim))
        return float(np.real(np.diag(self.entries)[start:]).sum())

    def check(self, herm_tol: float = 1e-10, trace_tol: float = 1e-10, pos_tol: float = 1e-8) -> None:
        """Raise ``InvalidParametersError`` unless Hermitian, unit-trace and positive."""
        m = self.entries
        if np.max(np.abs(m - m.conj().T)) > herm_tol:
            raise InvalidParametersError("density matrix is not Hermitian")
        if abs(self.trace - 1) > trace_tol:
            raise InvalidParametersError(f"trace is {self.trace}")
        if self.eigenvalues().min() < -pos_tol:
            raise InvalidParametersError("density matrix has negative eigenvalues")


def _same_dim(a: int, b: int) -> None:
    if a != b:
        raise InvalidDimensionError(f"dimension mismatch: {a} vs {b}")


def basis_state(k: int, dim: int) -> FockState:
    if not 0 <= k < dim:
        raise InvalidDimensionError(f"|{k}> does not fit in dim={dim}")
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return FockState(v)


def annihilation_op(dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def creation_op(dim: int) -> np.ndarray:
    return annihilation_op(dim).T.copy()


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(_check_dim(dim, 1), dtype=float)).astype(complex)


def parity_op(dim: int) -> np.ndarray:
    return np.diag((-1.0) ** np.arange(_check_dim(dim, 1))).astype(complex)


def quadrature_ops(dim: int) -> tuple[np.ndarray, np.ndarray]:
    b = annihilation_op(dim)
    bd = b.conj().T
    return (b + bd) / np.sqrt(2), -1j * (b - bd) / np.sqrt(2)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_dim(a.shape[0], b.shape[0])
    return a @ b - b @ a


def interior(m: np.ndarray, fraction: float = INTERIOR_FRACTION) -> np.ndarray:
    """Upper-left block covering rows/cols ``0..floor(fraction*N)``, free of truncation-edge error."""
    k = int(np.floor(fraction * m.shape[0])) + 1
    return m[:k, :k]


def unitarity_defect(u: np.ndarray, fraction: float = INTERIOR_FRACTION) -> float:
    """Max-norm of ``U†U - I`` on the interior block."""
    blk = interior(u.conj().T @ u, fraction)
    return float(np.max(np.abs(blk - np.eye(blk.shape[0]))))


def _crop(m: np.ndarray, dim: int) -> np.ndarray:
    return np.ascontiguousarray(m[:dim, :dim])


def displacement_op(beta: complex, dim: int, work_dim: int | None = None) -> np.ndarray:
    """``D(β) = exp(β b† - β* b)`` by scaling-and-squaring.

    With ``work_dim > dim`` the exponential is taken in the larger space and
    cropped, which pushes truncation-edge error out of the returned block.
    """
    dim = _check_dim(dim)
    m = max(dim, work_dim or dim)
    b = annihilation_op(m)
    gen = beta * b.conj().T - np.conj(beta) * b
    return _crop(sla.expm(gen), dim)


def squeeze_op(xi: complex, dim: int, work_dim: int | None = None) -> np.ndarray:
    """``S(ξ) = exp((ξ*/2) b² - (ξ/2) b†²)``; real ``ξ = r > 0`` squeezes ``x``."""
    dim = _check_dim(dim)
    m = max(dim, work_dim or dim)
    b = annihilation_op(m)
    b2 = b @ b
    gen = 0.5 * np.conj(xi) * b2 - 0.5 * xi * b2.conj().T
    return _crop(sla.expm(gen), dim)


def rotation_op(phi: float, dim: int) -> np.ndarray:
    """``R(φ) = exp(i φ b†b)``."""
    return np.diag(np.exp(1j * phi * np.arange(_check_dim(dim, 1)))).astype(complex)


def quadrature_function(func, dim: int, work_dim: int | None = None) -> np.ndarray:
    """``func(x̂)`` via the eigendecomposition of the truncated position operator.

    The eigenvalues of the truncated ``x̂`` are Gauss-Hermite nodes, so matrix
    elements between low-lying levels are Gauss-Hermite quadratures of
    ``func`` and converge quickly in ``work_dim``.
    """
    dim = _check_dim(dim)
    m = max(dim, work_dim or dim)
    x, _ = quadrature_ops(m)
    w, v = np.linalg.eigh(x.real)
    full = (v * func(w)) @ v.T
    return _crop(full, dim)
