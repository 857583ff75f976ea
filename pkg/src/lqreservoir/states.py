"""Closed-form target states in a truncated Fock basis.

Fidelity between pure states is |<a|b>| throughout.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from . import engineered as eng
from .errors import (
    InvalidDimensionError,
    InvalidParametersError,
    StabilityError,
    TruncationError,
    UnsupportedParametersError,
)
from .fock import FockState, quadrature_ops
from .special import double_factorial, hermite, hyp2f1_terminating, laguerre_gen, log_factorial

CUBIC_TAIL_TOL = 1e-10


def fidelity_pure(a: FockState, b: FockState) -> float:
    return abs(a.overlap(b))


def _check(n: int, dim: int) -> None:
    if int(n) != n or n < 0:
        raise InvalidParametersError(f"n must be a nonnegative integer, got {n!r}")
    if n >= dim:
        raise InvalidDimensionError(f"n={n} does not fit in dim={dim}")


def sparse_annihilation(dim: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, shape=(dim, dim), format="csr", dtype=complex)


def _pad(amps, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    out[: len(amps)] = amps
    return out


def _work_dim(dim: int, work_dim: int | None, extra: int = 60) -> int:
    return max(dim, work_dim or 0, dim + extra)


# ---------------------------------------------------------------- Gaussian


def squeezed_vacuum_amps(xi: complex, dim: int) -> np.ndarray:
    """Unnormalized-by-truncation amplitudes of S(ξ)|0>."""
    r, theta = abs(xi), cmath.phase(xi)
    out = np.zeros(dim, dtype=complex)
    m = np.arange((dim + 1) // 2)
    if r == 0:
        out[0] = 1.0
        return out
    t = math.tanh(r)
    mag = np.exp(0.5 * log_factorial(2 * m) - m * math.log(2) - log_factorial(m) + m * math.log(t))
    out[2 * m] = mag * (-cmath.exp(1j * theta)) ** m / math.sqrt(math.cosh(r))
    return out


def squeezed_vacuum(xi: complex, dim: int) -> FockState:
    if dim < 1:
        raise InvalidDimensionError("dim must be >= 1")
    return FockState(squeezed_vacuum_amps(xi, dim)).normalized()


def coherent_amps(beta: complex, dim: int) -> np.ndarray:
    k = np.arange(dim)
    if beta == 0:
        return _pad([1.0], dim)
    mag = np.exp(k * math.log(abs(beta)) - 0.5 * log_factorial(k) - 0.5 * abs(beta) ** 2)
    return mag * np.exp(1j * k * cmath.phase(beta))


def coherent_state(beta: complex, dim: int) -> FockState:
    return FockState(coherent_amps(beta, dim)).normalized()


def cat_state(alpha_c: float, parity: str, dim: int) -> FockState:
    """(|α> ± |-α>) normalized; parity 'even' takes +, 'odd' takes -."""
    if alpha_c < 0:
        raise InvalidParametersError("alpha_c must be >= 0")
    if parity not in ("even", "odd"):
        raise InvalidParametersError("parity must be 'even' or 'odd'")
    if parity == "odd" and alpha_c == 0:
        raise InvalidParametersError("the odd cat is undefined at alpha = 0")
    k = np.arange(dim)
    keep = (k % 2 == 0) if parity == "even" else (k % 2 == 1)
    amps = np.where(keep, 2.0 * coherent_amps(alpha_c, dim), 0.0)
    sign = 1.0 if parity == "even" else -1.0
    amps = amps / math.sqrt(2.0 * (1.0 + sign * math.exp(-2.0 * alpha_c ** 2)))
    return FockState(amps).normalized()


def apply_gaussian(state: FockState, beta: complex = 0.0, xi: complex = 0.0, work_dim: int | None = None) -> FockState:
    """D(β) S(ξ) |state>, evaluated in a larger space and cropped back."""
    dim = state.dim
    m = _work_dim(dim, work_dim, extra=max(60, int(20 * abs(beta) ** 2), int(20 * math.exp(2 * abs(xi)))))
    v = _pad(state.amps, m)
    b = sparse_annihilation(m)
    bd = b.conj().T
    if xi != 0:
        gen = 0.5 * np.conj(xi) * (b @ b) - 0.5 * xi * (bd @ bd)
        v = sla.expm_multiply(gen, v)
    if beta != 0:
        v = sla.expm_multiply(beta * bd - np.conj(beta) * b, v)
    return _crop_checked(v, dim)


def _crop_checked(v: np.ndarray, dim: int, tol: float | None = None) -> FockState:
    lost = float(np.sum(np.abs(v[dim:]) ** 2))
    if tol is not None and lost > tol:
        raise TruncationError(f"{lost:.3e} of the population lies beyond dim={dim}")
    return FockState(v[:dim]).normalized()


def rotate(state: FockState, phi: float) -> FockState:
    """exp(i φ n) |state>."""
    return FockState(state.amps * np.exp(1j * phi * np.arange(state.dim)))


# ------------------------------------------------------------------- cubic


def _cubic_gate(v: np.ndarray, gamma: float) -> np.ndarray:
    m = v.size
    x, _ = quadrature_ops(m)
    w, vecs = np.linalg.eigh(x.real)
    return vecs @ (np.exp(1j * gamma * w ** 3) * (vecs.T @ v))


def _cubic_work_dim(dim: int, r: float, work_dim: int | None) -> int:
    return max(dim, work_dim or 0, 4 * dim, 600, int(200 * math.exp(2 * abs(r))))


def cubic_phase_state(
    gamma: float,
    r: float,
    dim: int,
    tail_tol: float | None = CUBIC_TAIL_TOL,
    work_dim: int | None = None,
    order: str = "squeeze_first",
) -> FockState:
    """Γ(γ) S(-r)|0> with Γ(γ) = exp(iγ x³).

    The gate is applied in a large work space through the eigenbasis of the
    truncated x̂ (Gauss-Hermite nodes) and the result cropped to ``dim``.
    ``order='gate_first'`` evaluates the equal state S(-r) Γ(γ e^{3r})|0>.
    A TruncationError is raised when the top-decile population of the cropped
    state exceeds ``tail_tol`` (pass None to skip the check).
    """
    if dim < 2:
        raise InvalidDimensionError("dim must be >= 2")
    m = _cubic_work_dim(dim, r, work_dim)
    if order == "squeeze_first":
        v = squeezed_vacuum_amps(-r, m)
        if gamma != 0:
            v = _cubic_gate(v, gamma)
    elif order == "gate_first":
        v = _pad([1.0], m)
        if gamma != 0:
            v = _cubic_gate(v, gamma * math.exp(3 * r))
        b = sparse_annihilation(m)
        b2 = b @ b
        # S(-r) = exp(-(r/2) b² + (r/2) b†²)
        v = sla.expm_multiply(-0.5 * r * b2 + 0.5 * r * b2.conj().T, v)
    else:
        raise InvalidParametersError("order must be 'squeeze_first' or 'gate_first'")
    state = FockState(v[:dim]).normalized()
    if tail_tol is not None and state.tail_population() > tail_tol:
        raise TruncationError(
            f"cubic phase state (gamma={gamma}, r={r}) has top-decile population "
            f"{state.tail_population():.2e} at dim={dim}"
        )
    return state


def cubic_dark_state(
    r: float, theta: float, t: float, k: int = 0, ell: int = 0, dim: int = 100, tail_tol: float | None = CUBIC_TAIL_TOL
) -> FockState:
    """Dark state of cubic_recipe(r, θ, t, k, ℓ).

    It is R(φ) Γ(γ) R(-φ) S(r e^{iθ})|0> with φ = θ/2 + (ℓ+1)π/2 and
    R(φ) = exp(iφ n); for θ = -π, ℓ = 0 this is Γ(γ) S(-r)|0>.
    """
    gamma = eng.cubicity(t, r, k, ell, theta)
    m = _cubic_work_dim(dim, r, None)
    phi = 0.5 * theta + 0.5 * (int(ell) % 4 + 1) * math.pi
    rot = np.exp(1j * phi * np.arange(m))
    v = squeezed_vacuum_amps(r * cmath.exp(1j * theta), m)
    v = rot * _cubic_gate(rot.conj() * v, gamma)
    state = FockState(v[:dim]).normalized()
    if tail_tol is not None and state.tail_population() > tail_tol:
        raise TruncationError(f"cubic dark state has top-decile population {state.tail_population():.2e}")
    return state


# ---------------------------------------------------------------- family 1


def family1_amps(n: int, lam: complex) -> np.ndarray:
    """Unnormalized |Φ_n> amplitudes on |0>..|n> (π^{1/4} factor included)."""
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        lam_pow = 1.0 if n == k else lam ** (n - k)
        if lam_pow == 0:
            continue
        for m in range(k // 2 + 1):
            j = k - 2 * m
            logc = (
                log_factorial(n) - log_factorial(n - k)
                - (0.5 * k + m) * math.log(2) - log_factorial(m) - 0.5 * log_factorial(j)
            )
            out[j] += math.pi ** 0.25 * math.exp(logc) * lam_pow
    return out


def family1_norm(n: int, lam: float) -> float:
    """Normalization N_Φ = (n! √π L_n^{(-1/2)}(-λ²))^{-1/2}."""
    return (math.factorial(n) * math.sqrt(math.pi) * laguerre_gen(n, -0.5, -lam * lam)) ** -0.5


def family1_superposition(n: int, lam: float, dim: int) -> FockState:
    _check(n, dim)
    if abs(complex(lam).imag) > 0:
        raise InvalidParametersError("lambda must be real")
    lam = float(complex(lam).real)
    amps = family1_amps(n, lam) * family1_norm(n, lam)
    return FockState(_pad(amps, dim))


def family1_dark_state(n: int, lam: float, alpha: float, z1: float, dim: int, work_dim: int | None = None) -> FockState:
    """D(z1/√2) S(ln √(2α)) |Φ_n>."""
    if not alpha > 0:
        raise InvalidParametersError("alpha must be > 0 for a normalizable state")
    phi = family1_superposition(n, lam, dim)
    return apply_gaussian(phi, z1 / math.sqrt(2), 0.5 * math.log(2 * alpha), work_dim)


def family1_dark_state_from_coeffs(coeffs: eng.Coefficients, dim: int, work_dim: int | None = None) -> FockState:
    p = eng.family1_params(coeffs)
    if not p.physical:
        raise InvalidParametersError(f"family-1 parameters are not physical: {p}")
    return family1_dark_state(p.n, p.lam.real, p.alpha.real, p.z1.real, dim, work_dim)


# ---------------------------------------------------------------- family 2


def family2_amps(n: int, s: complex, u: complex) -> np.ndarray:
    """Unnormalized |Ψ_n> amplitudes: the Fock expansion of exp(-y²/2) H_n(s(y-u))."""
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n // 2 + 1):
        pre = s ** (n - 2 * k) * (s * s - 1) ** k if (s * s - 1) != 0 or k == 0 else 0.0
        if pre == 0:
            continue
        for m in range(n - 2 * k + 1):
            e = n - 2 * k - m
            upow = 1.0 if e == 0 else (-2 * u) ** e
            logc = log_factorial(n) - log_factorial(k) - 0.5 * log_factorial(m) - log_factorial(e) + 0.5 * m * math.log(2)
            out[m] += math.pi ** 0.25 * math.exp(logc) * pre * upow
    return out


def family2_norm2(n: int, s: complex, u: complex) -> float:
    """Squared norm of family2_amps: √π Σ_k C(n,k)² k! (2s²)^k (1-s²)^{n-k} H_{n-k}(isu/√(s²-1))².

    At s² = 1 the Hermite argument diverges; the finite vector is summed instead.
    """
    s = complex(s)
    u = complex(u)
    if abs(s * s - 1) < 1e-8:
        a = family2_amps(n, s, u)
        return float(np.vdot(a, a).real)
    z = 1j * s * u / cmath.sqrt(s * s - 1)
    total = 0j
    for k in range(n + 1):
        total += (
            math.comb(n, k) ** 2 * math.factorial(k) * (2 * s * s) ** k * (1 - s * s) ** (n - k)
            * complex(hermite(n - k, z)) ** 2
        )
    return float((math.sqrt(math.pi) * total).real)


def family2_superposition(n: int, s: complex, u: complex, dim: int) -> FockState:
    _check(n, dim)
    norm2 = family2_norm2(n, s, u)
    if not norm2 > 0:
        raise InvalidParametersError(f"normalization sum is {norm2} for n={n}, s={s}, u={u}")
    return FockState(_pad(family2_amps(n, s, u) / math.sqrt(norm2), dim))


def family2_dark_state(n: int, s: complex, u: complex, alpha_p: float, z2: float, dim: int, work_dim: int | None = None) -> FockState:
    """D(z2/√2) S(ln √(2α')) |Ψ_n(s, u)>."""
    if not alpha_p > 0:
        raise InvalidParametersError("alpha' must be > 0 for a normalizable state")
    psi = family2_superposition(n, s, u, dim)
    return apply_gaussian(psi, z2 / math.sqrt(2), 0.5 * math.log(2 * alpha_p), work_dim)


def family2_dark_state_from_coeffs(coeffs: eng.Coefficients, dim: int, work_dim: int | None = None) -> FockState:
    p = eng.family2_params(coeffs)
    if not p.physical:
        raise InvalidParametersError(f"family-2 parameters are not physical: {p}")
    return family2_dark_state(p.n, p.s, p.u.real, p.alpha_p.real, p.z2.real, dim, work_dim)


# -------------------------------------------------------- special members


def cat_phi_state(n: int, dim: int) -> FockState:
    _check(n, dim)
    pre = math.factorial(n) / math.sqrt(double_factorial(2 * n - 1))
    amps = np.zeros(dim, dtype=complex)
    for m in range(n // 2 + 1):
        amps[n - 2 * m] = pre * math.exp(-m * math.log(2) - log_factorial(m) - 0.5 * log_factorial(n - 2 * m))
    return FockState(amps)


def cat_psi_state(n: int, dim: int) -> FockState:
    _check(n, dim)
    pre = math.sqrt(math.factorial(n) / hyp2f1_terminating((1 - n) / 2, -n / 2, 1, 0.25))
    amps = np.zeros(dim, dtype=complex)
    for m in range(n // 2 + 1):
        amps[n - 2 * m] = pre * math.exp(-m * math.log(4) - log_factorial(m) - 0.5 * log_factorial(n - 2 * m))
    return FockState(amps)


def _check_zeta(zeta: float) -> None:
    if not 0 < zeta < 1:
        raise StabilityError("zeta must lie in (0, 1); zeta -> 1 means infinite squeezing")


def fock_like_state(n: int, zeta: float, dim: int) -> FockState:
    """Σ_k C(n,k) √(k!) (2√2 d_n)^{-k} |k>, normalized."""
    _check(n, dim)
    _check_zeta(zeta)
    d = eng.fock_like_d(n, zeta)
    k = np.arange(n + 1)
    logs = log_factorial(n) - log_factorial(n - k) - 0.5 * log_factorial(k) - k * math.log(2 * math.sqrt(2) * d)
    amps = np.exp(logs - logs.max())
    return FockState(_pad(amps, dim)).normalized()


def fock_like_state_binomial(n: int, zeta: float, dim: int) -> FockState:
    """The binomial form Σ_k C(n,k) d_n^{-k} |k> / √(2F1(-n,-n;1;d_n^{-2})).

    Kept for comparison only: it is not annihilated by fock_like_recipe.
    """
    _check(n, dim)
    _check_zeta(zeta)
    d = eng.fock_like_d(n, zeta)
    amps = np.array([math.comb(n, k) * d ** (-k) for k in range(n + 1)])
    return FockState(_pad(amps / math.sqrt(hyp2f1_terminating(-n, -n, 1, d ** -2)), dim))


def cat_phi_dark_state(n: int, dim: int) -> FockState:
    """D(-√(2n+1)/√2) S(-ln √2) |C^Φ_n>: the dark state of cat_phi_recipe(n)."""
    return apply_gaussian(cat_phi_state(n, dim), -math.sqrt(2 * n + 1) / math.sqrt(2), -0.5 * math.log(2))


def cat_psi_dark_state(n: int, dim: int) -> FockState:
    """D(-√(2n+1)) S(-ln √3) |C^Ψ_n>: the dark state of cat_psi_recipe(n)."""
    return apply_gaussian(cat_psi_state(n, dim), -math.sqrt(2 * n + 1), -0.5 * math.log(3))


def fock_like_dark_state(n: int, zeta: float, dim: int) -> FockState:
    """D(-√(ζ(n+1/2))) |F^Ψ_n>: the dark state of fock_like_recipe."""
    return apply_gaussian(fock_like_state(n, zeta, dim), -math.sqrt(zeta * (n + 0.5)))


def recipe_and_dark_state(kind: str, dim: int, **p) -> tuple[eng.Coefficients, FockState]:
    """Coefficients of a named recipe together with its analytic dark state."""
    if kind == "cat_phi":
        return eng.cat_phi_recipe(p["n"]), cat_phi_dark_state(p["n"], dim)
    if kind == "cat_psi":
        return eng.cat_psi_recipe(p["n"]), cat_psi_dark_state(p["n"], dim)
    if kind == "fock_like":
        return eng.fock_like_recipe_zeta(p["n"], p["zeta"]), fock_like_dark_state(p["n"], p["zeta"], dim)
    if kind == "squeezed":
        r, theta = p["r"], p.get("theta", 0.0)
        return eng.squeezing_recipe(r, theta), squeezed_vacuum(r * cmath.exp(1j * theta), dim)
    if kind == "cubic":
        r, theta, k, ell = p["r"], p.get("theta", -math.pi), p.get("k", 0), p.get("ell", 0)
        t = p["t"] if "t" in p else eng.t_for_cubicity(p["gamma"], r, k, ell)
        coeffs = eng.cubic_recipe(r, theta, t, k, ell)
        return coeffs, cubic_dark_state(r, theta, t, k, ell, dim, tail_tol=p.get("tail_tol", CUBIC_TAIL_TOL))
    raise UnsupportedParametersError(f"unknown recipe kind {kind!r}")
