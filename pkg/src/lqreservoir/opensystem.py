"""Lindblad steady states for the engineered reservoir and fidelity maps.

Superoperators act on column-stacked vec(ρ), so vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla
from scipy.optimize import minimize_scalar

from . import engineered as eng
from . import states as st
from .errors import (
    DegeneracyError,
    InvalidDimensionError,
    InvalidParametersError,
    TruncationError,
)
from .fock import DensityMatrix, FockState

RESIDUAL_TOL = 1e-9
STEADY_TAIL_TOL = 1e-6
COND_LIMIT = 1e12


@dataclass(frozen=True)
class AdiabaticParams:
    """Thermal single-mode model. coop may be math.inf (no mechanical bath)."""

    coop: float
    n_bar: float = 0.0
    gamma_m: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if not self.coop > 0:
            raise InvalidParametersError("coop must be > 0")
        if not (self.n_bar >= 0 and math.isfinite(self.n_bar)):
            raise InvalidParametersError("n_bar must be finite and >= 0")
        if not (self.gamma_m > 0 and self.kappa > 0):
            raise InvalidParametersError("gamma_m and kappa must be > 0")


@dataclass(frozen=True)
class TwoModeParams:
    """Joint auxiliary (a) plus target (b) model; gamma_m and n_bar add a target bath."""

    kappa_a: float
    dims: tuple = (4, 20)
    gamma_m: float = 0.0
    n_bar: float = 0.0

    def __post_init__(self):
        if not self.kappa_a > 0:
            raise InvalidParametersError("kappa_a must be > 0")
        if len(self.dims) != 2 or min(self.dims) < 2:
            raise InvalidDimensionError("dims must be a pair with both entries >= 2")
        if self.gamma_m < 0 or self.n_bar < 0:
            raise InvalidParametersError("gamma_m and n_bar must be >= 0")


def cooperativity(gain: float, gamma_m: float, kappa: float) -> float:
    return 4.0 * gain ** 2 / (gamma_m * kappa)


# ---------------------------------------------------------- superoperators


def _sparse(op) -> sp.csr_matrix:
    return sp.csr_matrix(op, dtype=complex)


def dissipator(op) -> sp.csr_matrix:
    """D[L]ρ = LρL† - ½{L†L, ρ} as a sparse superoperator."""
    L = _sparse(op)
    n = L.shape[0]
    eye = sp.identity(n, dtype=complex, format="csr")
    ld = (L.conj().T @ L).tocsr()
    return (sp.kron(L.conj(), L) - 0.5 * sp.kron(eye, ld) - 0.5 * sp.kron(ld.T, eye)).tocsr()


def hamiltonian_superop(h) -> sp.csr_matrix:
    """-i[H, ρ]."""
    H = _sparse(h)
    eye = sp.identity(H.shape[0], dtype=complex, format="csr")
    return (-1j * (sp.kron(eye, H) - sp.kron(H.T, eye))).tocsr()


def lindbladian(hamiltonian=None, jumps=()) -> sp.csr_matrix:
    """Sum of -i[H,·] and rate·D[L] for (rate, L) in jumps."""
    total = None
    if hamiltonian is not None:
        total = hamiltonian_superop(hamiltonian)
    for rate, op in jumps:
        if rate == 0:
            continue
        term = rate * dissipator(op)
        total = term if total is None else total + term
    if total is None:
        raise InvalidParametersError("empty Lindbladian")
    return total.tocsr()


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


def _f_sparse(coeffs: eng.Coefficients, dim: int) -> sp.csr_matrix:
    return _sparse(eng.build_f(coeffs, dim))


def _b_sparse(dim: int) -> sp.csr_matrix:
    return st.sparse_annihilation(dim)


def adiabatic_liouvillian(coeffs: eng.Coefficients, params: AdiabaticParams, dim: int) -> sp.csr_matrix:
    """γ_m𝒞 D[f/𝒢] + γ_m(n̄+1) D[b] + γ_m n̄ D[b†] in units of γ_m.

    With coop = inf only the engineered term is kept, at unit rate.
    """
    if dim < 3:
        raise InvalidDimensionError("dim must be >= 3")
    g2 = coeffs.gain2
    if not g2 > 0:
        raise InvalidParametersError("the adiabatic model needs 𝒢² = |c1|² - |c2|² > 0")
    f = _f_sparse(coeffs, dim) / math.sqrt(g2)
    if math.isinf(params.coop):
        return lindbladian(jumps=[(1.0, f)])
    b = _b_sparse(dim)
    return lindbladian(
        jumps=[(params.coop, f), (params.n_bar + 1.0, b), (params.n_bar, b.conj().T)]
    )


def two_mode_liouvillian(coeffs: eng.Coefficients, params: TwoModeParams) -> sp.csr_matrix:
    """-i[a†⊗f + a⊗f†, ρ] + κ_a D[a] (+ target thermal bath), operators ordered a ⊗ b."""
    na, nb = params.dims
    a = _b_sparse(na)
    f = _f_sparse(coeffs, nb)
    ia = sp.identity(na, dtype=complex, format="csr")
    ib = sp.identity(nb, dtype=complex, format="csr")
    h = sp.kron(a.conj().T, f) + sp.kron(a, f.conj().T)
    jumps = [(params.kappa_a, sp.kron(a, ib))]
    if params.gamma_m > 0:
        b = sp.kron(ia, _b_sparse(nb))
        jumps += [(params.gamma_m * (params.n_bar + 1.0), b), (params.gamma_m * params.n_bar, b.conj().T)]
    return lindbladian(h, jumps)


# ------------------------------------------------------------ steady state


def _cond_estimate(lu, a: sp.csc_matrix, iters: int = 6) -> float:
    """‖A‖_1 times a power-iteration estimate of ‖A⁻¹‖_2."""
    rng = np.random.default_rng(0)
    x = rng.standard_normal(a.shape[0])
    if np.iscomplexobj(a.data):
        x = x + 1j * rng.standard_normal(a.shape[0])
    x /= np.linalg.norm(x)
    growth = 0.0
    for _ in range(iters):
        y = lu.solve(x)
        z = lu.solve(y, trans="H" if np.iscomplexobj(a.data) else "T")
        growth = math.sqrt(np.linalg.norm(z))
        if not np.isfinite(growth) or growth == 0:
            return math.inf
        x = z / np.linalg.norm(z)
    return float(abs(a).sum(axis=0).max()) * growth


def _eig_fallback(liou: sp.csr_matrix, dim: int, scale: float) -> np.ndarray:
    """Kernel of the Liouvillian from shift-invert eigenvalues near zero."""
    vals, vecs = sla.eigs(liou.tocsc(), k=3, sigma=1e-9 * scale)
    order = np.argsort(np.abs(vals))
    vals, vecs = vals[order], vecs[:, order]
    if abs(vals[1]) <= 1e-9 * scale:
        raise DegeneracyError(
            f"steady state is not unique: Liouvillian eigenvalues {vals[0]:.3g}, {vals[1]:.3g}"
        )
    rho = unvec(vecs[:, 0], dim)
    return rho / np.trace(rho)


def steady_state(liou: sp.csr_matrix, dim: int) -> DensityMatrix:
    """Trace-one kernel vector of a Liouvillian acting on dim x dim matrices."""
    n2 = dim * dim
    if liou.shape != (n2, n2):
        raise InvalidDimensionError("Liouvillian shape does not match dim")
    scale = float(abs(liou).max())
    # real Liouvillians (real coefficients, no Hamiltonian) factor ~4x faster
    real = not np.any(liou.data.imag)
    dtype = float if real else complex
    a = (liou.real if real else liou).tolil()
    trace_row = np.zeros(n2, dtype=dtype)
    trace_row[:: dim + 1] = 1.0
    a[0, :] = trace_row
    a = a.tocsc()
    rhs = np.zeros(n2, dtype=dtype)
    rhs[0] = 1.0
    rho = None
    try:
        lu = sla.splu(a)
        if _cond_estimate(lu, a) < COND_LIMIT:
            rho = unvec(lu.solve(rhs), dim)
    except RuntimeError:
        pass
    if rho is None:
        rho = _eig_fallback(liou, dim, scale)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    resid = float(np.max(np.abs(liou @ vec(rho)))) / scale
    if resid > RESIDUAL_TOL:
        raise DegeneracyError(f"steady-state residual {resid:.3g} exceeds {RESIDUAL_TOL}")
    out = DensityMatrix(rho)
    out.check()
    return out


def adiabatic_steady_state(
    coeffs: eng.Coefficients, params: AdiabaticParams, dim: int, tail_tol: float | None = STEADY_TAIL_TOL
) -> DensityMatrix:
    """Unique steady state of the adiabatically eliminated thermal model."""
    rho = steady_state(adiabatic_liouvillian(coeffs, params, dim), dim)
    if tail_tol is not None and rho.tail_population() > tail_tol:
        raise TruncationError(
            f"top-decile population {rho.tail_population():.3g} exceeds {tail_tol}; increase dim"
        )
    return rho


def partial_trace(rho: np.ndarray, dims: tuple, keep: int) -> np.ndarray:
    """Reduced state of subsystem ``keep`` (0 = a, 1 = b) of a bipartite ρ on a ⊗ b."""
    na, nb = dims
    r = np.asarray(rho).reshape(na, nb, na, nb)
    if keep == 0:
        return np.einsum("ijkj->ik", r)
    if keep == 1:
        return np.einsum("ijik->jk", r)
    raise InvalidParametersError("keep must be 0 or 1")


class TwoModeResult(NamedTuple):
    joint: DensityMatrix
    auxiliary: DensityMatrix
    target: DensityMatrix


def two_mode_steady_state(coeffs: eng.Coefficients, params: TwoModeParams) -> TwoModeResult:
    """Joint steady state with both reduced states (validation-scale dims only)."""
    na, nb = params.dims
    if na * nb > 400:
        raise InvalidDimensionError("two-mode solver is limited to N_a·N_b <= 400")
    joint = steady_state(two_mode_liouvillian(coeffs, params), na * nb)
    return TwoModeResult(
        joint,
        DensityMatrix(partial_trace(joint.entries, params.dims, 0)),
        DensityMatrix(partial_trace(joint.entries, params.dims, 1)),
    )


def equivalent_adiabatic(coeffs: eng.Coefficients, params: TwoModeParams) -> AdiabaticParams:
    """Adiabatic parameters matching a two-mode model with unit coupling to f."""
    g2 = coeffs.gain2
    if params.gamma_m == 0:
        return AdiabaticParams(coop=math.inf, n_bar=params.n_bar, kappa=params.kappa_a)
    coop = cooperativity(math.sqrt(g2), params.gamma_m, params.kappa_a)
    return AdiabaticParams(coop=coop, n_bar=params.n_bar, gamma_m=params.gamma_m, kappa=params.kappa_a)


def evolve(liou: sp.csr_matrix, rho0: np.ndarray, t: float) -> DensityMatrix:
    """exp(L t) applied to rho0."""
    dim = np.asarray(rho0).shape[0]
    out = sla.expm_multiply(liou * t, vec(rho0))
    return DensityMatrix(unvec(out, dim))


# ---------------------------------------------------------------- fidelity


def fidelity(rho: DensityMatrix, psi: FockState, squared: bool = False) -> float:
    """Uhlmann fidelity √⟨ψ|ρ|ψ⟩ (or ⟨ψ|ρ|ψ⟩ with squared=True)."""
    if rho.dim != psi.dim:
        raise InvalidDimensionError(f"dimension mismatch: {rho.dim} vs {psi.dim}")
    v = psi.amps / psi.norm
    val = max(float(np.real(v.conj() @ rho.entries @ v)), 0.0)
    return val if squared else math.sqrt(val)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def fidelity_mixed(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """tr √(√ρ σ √ρ), clipped to [0, 1] against eigen-solver round-off."""
    if rho.dim != sigma.dim:
        raise InvalidDimensionError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    s = _psd_sqrt(rho.entries)
    w = np.linalg.eigvalsh(s @ sigma.entries @ s)
    return min(float(np.sqrt(np.clip(w, 0, None)).sum()), 1.0)


# ------------------------------------------------------- Fig. 3 style scans


class CatFidelity(NamedTuple):
    alpha: float
    fidelity: float


def _superposition(n: int, family: str, dim: int) -> FockState:
    if family == "phi":
        return st.cat_phi_state(n, dim)
    if family == "psi":
        return st.cat_psi_state(n, dim)
    raise InvalidParametersError("family must be 'phi' or 'psi'")


def max_cat_fidelity(n: int, family: str, alpha_bracket: tuple | None = None, tol: float = 1e-6, scan: int = 61) -> CatFidelity:
    """max over α of |⟨C^±_α|C_n⟩| with the cat parity matched to n.

    A coarse scan locates the best grid point; golden-section search refines it.
    """
    if n < 1:
        raise InvalidParametersError("n must be >= 1")
    parity = "even" if n % 2 == 0 else "odd"
    lo, hi = alpha_bracket if alpha_bracket is not None else (1e-3, math.sqrt(2 * n) + 2.0)
    if not 0 < lo < hi:
        raise InvalidParametersError("alpha bracket must satisfy 0 < lo < hi")
    dim = max(n + 1, int(math.ceil((hi + 7.0) ** 2)))
    target = _superposition(n, family, dim)

    def neg(alpha: float) -> float:
        return -abs(st.cat_state(float(alpha), parity, dim).overlap(target))

    grid = np.linspace(lo, hi, scan)
    vals = np.array([neg(a) for a in grid])
    i = int(np.argmin(vals))
    if i in (0, scan - 1):
        return CatFidelity(float(grid[i]), float(-vals[i]))
    res = minimize_scalar(neg, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden", tol=tol)
    return CatFidelity(float(res.x), float(-res.fun))


def fock_fidelity_curve(n: int, zeta_list) -> list:
    """[(ζ, |⟨n|F^Ψ_n(ζ)⟩|)] for each ζ in (0, 1)."""
    return [(float(z), float(abs(st.fock_like_state(n, z, n + 1).amps[n]))) for z in zeta_list]


# ------------------------------------------------------------------- maps


@dataclass(frozen=True, eq=False)
class FidelityMap:
    name1: str
    axis1: np.ndarray
    name2: str
    axis2: np.ndarray
    values: np.ndarray  # values[i, j] at (axis1[i], axis2[j])
    tails: np.ndarray  # top-decile population of each steady state

    def rows(self):
        for i, v1 in enumerate(self.axis1):
            for j, v2 in enumerate(self.axis2):
                yield float(v1), float(v2), float(self.values[i, j])


def _point_fidelity(task) -> tuple:
    coeffs, params, dim, target, squared, tail_tol = task
    rho = adiabatic_steady_state(coeffs, params, dim, tail_tol)
    return fidelity(rho, target, squared), rho.tail_population()


def _run(tasks: list, workers: int | None, shape: tuple) -> tuple:
    if workers is None or workers <= 1 or len(tasks) < 2:
        out = [_point_fidelity(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_point_fidelity, tasks))
    arr = np.array(out, dtype=float).reshape(shape + (2,))
    return arr[..., 0], arr[..., 1]


def thermal_fidelity_map(
    coeffs: eng.Coefficients,
    target: FockState,
    n_bar_grid,
    coop_grid,
    dim: int,
    workers: int | None = None,
    squared: bool = False,
    tail_tol: float | None = None,
) -> FidelityMap:
    """F(n̄, 𝒞) of the adiabatic steady state against ``target``.

    The tail check is off by default: at finite 𝒞 the non-bosonic recipes
    leave a slowly decaying high-Fock tail, which is reported in ``tails``.
    """
    nb = np.asarray(n_bar_grid, dtype=float)
    cg = np.asarray(coop_grid, dtype=float)
    if not (np.all(np.isfinite(nb)) and np.all(np.isfinite(cg))):
        raise InvalidParametersError("grids must be finite")
    target = target.resized(dim) if target.dim != dim else target
    tasks = [(coeffs, AdiabaticParams(coop=c, n_bar=n), dim, target, squared, tail_tol) for n in nb for c in cg]
    vals, tails = _run(tasks, workers, (nb.size, cg.size))
    return FidelityMap("n_bar", nb, "coop", cg, vals, tails)


def perturbed_cat_psi(n: int, delta1: float, delta2: float) -> eng.Coefficients:
    """cat_psi_recipe(n) with c4 → c4(1+δ1) and c5 → c5(1+δ2)."""
    c = eng.cat_psi_recipe(n)
    return c.replace(c4=c.c4 * (1 + delta1), c5=c.c5 * (1 + delta2))


def imprecision_map(
    n: int,
    delta1_grid,
    delta2_grid,
    params: AdiabaticParams | None = None,
    dim: int = 80,
    workers: int | None = None,
    squared: bool = False,
    tail_tol: float | None = None,
) -> FidelityMap:
    """F(δ1, δ2) of the perturbed cat_psi steady state against the ideal dark state.

    Without ``params`` the mechanical bath is switched off (𝒞 = ∞), isolating
    the effect of the coefficient errors.
    """
    params = params if params is not None else AdiabaticParams(coop=math.inf, n_bar=0.0)
    d1 = np.asarray(delta1_grid, dtype=float)
    d2 = np.asarray(delta2_grid, dtype=float)
    target = st.cat_psi_dark_state(n, dim)
    tasks = [(perturbed_cat_psi(n, a, b), params, dim, target, squared, tail_tol) for a in d1 for b in d2]
    vals, tails = _run(tasks, workers, (d1.size, d2.size))
    return FidelityMap("delta1", d1, "delta2", d2, vals, tails)
