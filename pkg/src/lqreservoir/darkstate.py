"""Numerical dark states: the truncation-honest nullspace of the matrix of f."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .engineered import Coefficients, build_f
from .errors import InvalidDimensionError, InvalidParametersError
from .fock import FockState

DEFAULT_THRESHOLD = 1e-7
TAIL_TOL = 1e-8


@dataclass(frozen=True)
class DarkStateResult:
    states: list
    singular_values: np.ndarray
    dim_used: int
    converged: bool
    rejected: int = 0
    parity: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.states)

    @property
    def unique(self) -> bool:
        return self.count == 1

    @property
    def gap_ratio(self) -> float:
        """Second-smallest over smallest singular value."""
        s = self.singular_values
        return float(s[1] / s[0]) if s[0] > 0 else float("inf")


def _tail_start(dim: int) -> int:
    return int(np.floor(0.9 * dim))


def dark_state_solve(
    coeffs: Coefficients,
    dim: int,
    threshold: float = DEFAULT_THRESHOLD,
    tail_tol: float = TAIL_TOL,
) -> DarkStateResult:
    """Orthonormal basis of normalizable states annihilated by f at truncation ``dim``.

    Right-singular vectors with σ/σ_max below ``threshold`` span the numerical
    nullspace.  Inside that span, only directions whose top-decile population
    is below ``tail_tol`` are kept; the rest are truncation-edge artifacts.
    When f commutes with parity the kept basis is rotated to definite parity.
    """
    if dim < 8:
        raise InvalidDimensionError("dark_state_solve needs dim >= 8")
    if not threshold > 0:
        raise InvalidParametersError("threshold must be > 0")
    f = build_f(coeffs, dim)
    _, s, vh = np.linalg.svd(f)
    order = np.argsort(s)
    s = s[order]
    vecs = vh[order].conj().T  # columns, ascending singular value
    small = int(np.sum(s <= threshold * s[-1]))
    basis = vecs[:, :small]
    kept = np.zeros((dim, 0), dtype=complex)
    if small:
        tail = basis[_tail_start(dim):, :]
        tw, tv = np.linalg.eigh(tail.conj().T @ tail)
        kept = basis @ tv[:, tw < tail_tol]
    parities = []
    if kept.shape[1] and coeffs.is_quadratic_only:
        sign = (-1.0) ** np.arange(dim)
        pw, pv = np.linalg.eigh(kept.conj().T @ (sign[:, None] * kept))
        kept = kept @ pv
        parities = [int(np.sign(round(w))) for w in pw]
    states = [FockState(_fix_phase(kept[:, j])) for j in range(kept.shape[1])]
    return DarkStateResult(
        states=states,
        singular_values=s,
        dim_used=dim,
        converged=bool(states),
        rejected=small - len(states),
        parity=parities,
    )


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Normalize and make the largest amplitude real positive (deterministic output)."""
    v = v / np.linalg.norm(v)
    j = int(np.argmax(np.abs(v)))
    return v * np.exp(-1j * np.angle(v[j]))


class ConvergencePoint(NamedTuple):
    dim: int
    fidelity: float
    singular_gap: float
    count: int


def convergence_sweep(
    coeffs: Coefficients, dims: list, threshold: float = DEFAULT_THRESHOLD, tail_tol: float = TAIL_TOL
) -> list:
    """Solve at each dim and report fidelity of the leading dark state to the one at the last dim."""
    dims = list(dims)
    if dims != sorted(dims):
        raise InvalidParametersError("dims must be ascending")
    results = [dark_state_solve(coeffs, d, threshold, tail_tol) for d in dims]
    final = results[-1].states[0] if results[-1].states else None
    out = []
    for d, res in zip(dims, results):
        if res.states and final is not None:
            fid = abs(res.states[0].resized(final.dim).overlap(final))
        else:
            fid = float("nan")
        out.append(ConvergencePoint(d, float(fid), res.gap_ratio, res.count))
    return out


def sweep_converged(report: list, tol: float = 1e-9) -> bool:
    """True when the last two fidelities are finite and differ by less than tol."""
    if len(report) < 2:
        return False
    a, b = report[-2].fidelity, report[-1].fidelity
    return bool(np.isfinite(a) and np.isfinite(b) and abs(a - b) < tol)
