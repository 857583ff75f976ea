"""Wigner functions: numeric transform of Fock amplitudes and analytic forms.

W(x, p) = (1/π) ∫ dy e^{2ipy} ψ*(x+y) ψ(x-y), so the vacuum is e^{-x²-p²}/π.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InvalidParametersError, SingularParametersError
from .fock import DensityMatrix, FockState
from .special import airy_ai, hermite_all, laguerre_gen

MIN_POINTS = 8


@dataclass(frozen=True, eq=False)
class WignerGrid:
    x: np.ndarray
    p: np.ndarray
    values: np.ndarray  # shape (len(x), len(p)), values[i, j] = W(x[i], p[j])

    @property
    def x_min(self) -> float:
        return float(self.x[0])

    @property
    def x_max(self) -> float:
        return float(self.x[-1])

    @property
    def p_min(self) -> float:
        return float(self.p[0])

    @property
    def p_max(self) -> float:
        return float(self.p[-1])

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def np(self) -> int:
        return self.p.size

    @property
    def cell(self) -> float:
        return float((self.x[1] - self.x[0]) * (self.p[1] - self.p[0]))

    def integral(self) -> float:
        """Midpoint-rule integral, each node standing for its own cell."""
        return float(self.values.sum() * self.cell)

    def normalized(self) -> "WignerGrid":
        total = self.integral()
        if total == 0 or not np.isfinite(total):
            raise InvalidParametersError("grid integral is zero or not finite")
        return WignerGrid(self.x, self.p, self.values / total)

    def minimum(self) -> float:
        return float(self.values.min())

    def sup_diff(self, other: "WignerGrid") -> float:
        return float(np.max(np.abs(self.values - other.values)))

    def moments(self) -> dict:
        """Means and variances of x and p from the grid."""
        w = self.values * self.cell
        tot = w.sum()
        xx, pp = np.meshgrid(self.x, self.p, indexing="ij")
        mx, mp = (w * xx).sum() / tot, (w * pp).sum() / tot
        return {
            "mean_x": float(mx),
            "mean_p": float(mp),
            "var_x": float((w * (xx - mx) ** 2).sum() / tot),
            "var_p": float((w * (pp - mp) ** 2).sum() / tot),
        }


def grid_axes(x_range=(-5.0, 5.0), p_range=(-5.0, 5.0), nx: int = 81, np_: int = 81):
    if nx < MIN_POINTS or np_ < MIN_POINTS:
        raise InvalidParametersError(f"grids need at least {MIN_POINTS} points per axis")
    return np.linspace(*x_range, nx), np.linspace(*p_range, np_)


def _as_rho(state) -> np.ndarray:
    if isinstance(state, FockState):
        a = state.amps
        return np.ascontiguousarray(np.outer(a, a.conj()))
    if isinstance(state, DensityMatrix):
        return np.ascontiguousarray(state.entries)
    return np.ascontiguousarray(np.asarray(state, dtype=complex))


def _trim(rho: np.ndarray, tol: float = 1e-30) -> np.ndarray:
    """Drop trailing levels with negligible weight (exact for finite superpositions)."""
    diag = np.abs(np.diag(rho))
    nz = np.nonzero(diag > tol)[0]
    k = int(nz[-1]) + 1 if nz.size else 1
    return np.ascontiguousarray(rho[:k, :k])


def wigner_at(state, xs, ps) -> np.ndarray:
    """Numeric Wigner function at the points (xs[k], ps[k])."""
    xs = np.ascontiguousarray(np.asarray(xs, dtype=float).ravel())
    ps = np.ascontiguousarray(np.asarray(ps, dtype=float).ravel())
    return np.asarray(_backend.wigner_points(_trim(_as_rho(state)), xs, ps))


def wigner_numeric(state, x_range=(-5.0, 5.0), p_range=(-5.0, 5.0), nx: int = 81, np_: int = 81) -> WignerGrid:
    """Wigner grid of a FockState or DensityMatrix from its Fock-basis elements."""
    x, p = grid_axes(x_range, p_range, nx, np_)
    xx, pp = np.meshgrid(x, p, indexing="ij")
    vals = wigner_at(state, xx, pp).reshape(xx.shape)
    return WignerGrid(x, p, vals)


# ---------------------------------------------------------------- analytic


def cubic_norm(gamma: float, r: float) -> float:
    return math.exp(1.0 / (54.0 * gamma ** 2 * math.exp(6 * r))) * (4.0 / (3.0 * abs(gamma))) ** (1 / 3) / (
        math.sqrt(math.pi) * math.exp(r)
    )


def wigner_cubic_analytic(x, p, gamma: float, r: float):
    """Wigner function of Γ(γ) S(-r)|0>:
    M exp(-p/(3γe^{2r})) Ai[(4/(3γ))^{1/3} (3γx² - p + 1/(12γe^{4r}))]."""
    if gamma == 0:
        raise SingularParametersError("gamma = 0 is the Gaussian limit; use the squeezed-vacuum Wigner function")
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    arg = np.cbrt(4.0 / (3.0 * gamma)) * (3 * gamma * x ** 2 - p + 1.0 / (12 * gamma * math.exp(4 * r)))
    return cubic_norm(gamma, r) * np.exp(-p / (3 * gamma * math.exp(2 * r))) * airy_ai(arg)


def family1_wigner_norm(n: int, lam: float) -> float:
    return 1.0 / (math.pi * laguerre_gen(n, -0.5, -lam * lam))


def wigner_family1_analytic(x, p, n: int, lam: float):
    """Wigner function of |Φ_n(λ)>:
    M e^{-x²-p²} Σ_k (-1)^k (x+λ)^{2(n-k)}/(n-k)! L_k^{(-1/2)}(p²)."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    total = np.zeros(np.broadcast(x, p).shape)
    for k in range(n + 1):
        total = total + (-1) ** k * (x + lam) ** (2 * (n - k)) / math.factorial(n - k) * laguerre_gen(k, -0.5, p ** 2)
    return family1_wigner_norm(n, lam) * np.exp(-x ** 2 - p ** 2) * total


def wigner_family2_analytic(x, p, n: int, s: float, u: float):
    """Wigner function of |Ψ_n(s, u)>:
    M e^{-x²-p²} Σ_k C(n,k)² k! (-2s²)^k (1-s²)^{n-k} |H_{n-k}(s/√(1-s²) (x-u+ip))|².

    For s > 1, |H(z)|² is continued analytically as H(sξ/c) H(sξ̄/c) with
    ξ = x-u+ip and c = √(1-s²); the product with (1-s²)^{n-k} is real.
    """
    if abs(s * s - 1) < 1e-12:
        raise SingularParametersError("s² = 1: use wigner_numeric on family2_superposition")
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    q = 1 - s * s
    c = np.sqrt(complex(q))
    h_plus = hermite_all(n, s * (x - u + 1j * p) / c)
    h_minus = hermite_all(n, s * (x - u - 1j * p) / c)
    total = np.zeros(np.broadcast(x, p).shape)
    for k in range(n + 1):
        j = n - k
        prod = (q ** j * h_plus[j] * h_minus[j]).real
        total = total + math.comb(n, k) ** 2 * math.factorial(k) * (-2 * s * s) ** k * prod
    return family2_wigner_norm(n, s, u) * np.exp(-x ** 2 - p ** 2) * total


def family2_wigner_norm(n: int, s: float, u: float) -> float:
    """1/(π^{1/2} ‖Ψ‖²) with ‖Ψ‖² the closed-form squared norm of the family-2 sum."""
    from .states import family2_norm2

    return 1.0 / (math.sqrt(math.pi) * family2_norm2(n, s, u))


def analytic_grid(func, x_range=(-5.0, 5.0), p_range=(-5.0, 5.0), nx: int = 81, np_: int = 81, renormalize: bool = True, **params) -> WignerGrid:
    """Evaluate an analytic Wigner function on a grid, optionally rescaled to unit grid integral."""
    x, p = grid_axes(x_range, p_range, nx, np_)
    xx, pp = np.meshgrid(x, p, indexing="ij")
    g = WignerGrid(x, p, np.asarray(func(xx, pp, **params), dtype=float))
    return g.normalized() if renormalize else g


def negativity_volume(grid: WignerGrid) -> float:
    """∫|W| - ∫W by the midpoint rule; equals ∫|W| - 1 on a normalized grid."""
    v = grid.values
    return float((np.abs(v).sum() - v.sum()) * grid.cell)


def _fmt(v: float) -> str:
    return repr(float(v))


def grid_to_csv(grid: WignerGrid) -> str:
    """CSV with header x,p,w; x is the outer loop."""
    lines = ["x,p,w"]
    for i, xv in enumerate(grid.x):
        for j, pv in enumerate(grid.p):
            lines.append(f"{_fmt(xv)},{_fmt(pv)},{_fmt(grid.values[i, j])}")
    return "\n".join(lines) + "\n"
