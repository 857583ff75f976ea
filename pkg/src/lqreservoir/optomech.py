"""Optomechanical realization: drives to dressed couplings, RWA checks, mean fields.

ħ = 1; detunings and couplings may be given in any consistent unit.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

from .engineered import Coefficients
from .errors import (
    InfeasibleDesignError,
    InvalidParametersError,
    ParametricResonanceError,
    SchemeError,
)

RWA_THRESHOLD = 0.05
SCHEME = (-1.0, 1.0, -2.0, 2.0, 0.0)  # Δ_k / ω_m for c1..c5
DETUNING_TOL = 1e-9


class Drive(NamedTuple):
    eps: complex
    delta: float


@dataclass(frozen=True)
class OptomechParams:
    omega_m: float
    kappa: float
    g_lin: float
    g_quad: float
    drives: tuple = ()

    def __post_init__(self):
        if not (self.omega_m > 0 and self.kappa > 0):
            raise InvalidParametersError("omega_m and kappa must be > 0")
        object.__setattr__(self, "drives", tuple(Drive(complex(e), float(d)) for e, d in self.drives))

    @property
    def active_drives(self) -> list:
        return [d for d in self.drives if d.eps != 0]


@dataclass(frozen=True)
class CrystalParams:
    J: float
    g_L: float
    g_R: float
    X0: float
    x_zpf: float

    def __post_init__(self):
        if not self.J > 0:
            raise InvalidParametersError("J must be > 0")
        if not self.x_zpf > 0:
            raise InvalidParametersError("x_zpf must be > 0")


@dataclass(frozen=True)
class MeanFieldParams:
    kappa_p: float
    Omega: float
    g0_1: float
    g0_2: float

    def __post_init__(self):
        if not self.kappa_p > 0:
            raise InvalidParametersError("kappa_p must be > 0")


def scheme_detunings(omega_m: float) -> list:
    return [s * omega_m for s in SCHEME]


# ------------------------------------------------------------ dressed map


def stationary_cavity_amplitudes(params: OptomechParams, beta: complex = 0.0, mean_field: MeanFieldParams | None = None) -> list:
    """α_k = -iε_k / (κ/2 - iΔ_k'), with Δ_k' shifted by the mechanical mean field when given."""
    out = []
    shift = 0.0
    if mean_field is not None and beta != 0:
        q = 2.0 * complex(beta).real
        shift = mean_field.g0_1 * q + mean_field.g0_2 * q * q
    for d in params.drives:
        out.append(-1j * d.eps / (params.kappa / 2 - 1j * (d.delta - shift)))
    return out


def _check_scheme(params: OptomechParams) -> None:
    if len(params.drives) != 5:
        raise SchemeError("the sideband scheme needs five drive slots (zero amplitude allowed)")
    for d, want in zip(params.drives, scheme_detunings(params.omega_m)):
        if abs(d.delta - want) > DETUNING_TOL * params.omega_m:
            raise SchemeError(f"detuning {d.delta} where {want} is expected")


def dressed_couplings(params: OptomechParams) -> Coefficients:
    """c1, c2 = α_{1,2} g_lin and c3, c4, c5 = α_{3,4,5} g_quad."""
    _check_scheme(params)
    a = stationary_cavity_amplitudes(params)
    g = (params.g_lin, params.g_lin, params.g_quad, params.g_quad, params.g_quad)
    return Coefficients(*(ak * gk for ak, gk in zip(a, g)))


def drive_inverse_design(target: Coefficients, omega_m: float, kappa: float, g_lin: float, g_quad: float) -> OptomechParams:
    """Drives that reproduce ``target`` through dressed_couplings."""
    deltas = scheme_detunings(omega_m)
    couplings = (g_lin, g_lin, g_quad, g_quad, g_quad)
    drives = []
    for k, (c, g, delta) in enumerate(zip(target.as_array(), couplings, deltas), start=1):
        if c == 0:
            drives.append((0j, delta))
            continue
        if g == 0:
            kind = "linear" if k <= 2 else "quadratic"
            raise InfeasibleDesignError(f"c{k} != 0 needs a nonzero {kind} coupling")
        alpha = c / g
        drives.append((1j * alpha * (kappa / 2 - 1j * delta), delta))
    return OptomechParams(omega_m, kappa, g_lin, g_quad, tuple(drives))


def drive_count(params: OptomechParams) -> int:
    return len(params.active_drives)


# -------------------------------------------------------------------- RWA


class Margin(NamedTuple):
    label: str
    ratio: float


def rwa_margins(coeffs: Coefficients, R: float, omega_m: float) -> list:
    """|G_j|/ω_m, |R G_μ|/ω_m (μ = 3,4,5) and |G_ν|/(R ω_m) (ν = 1,2)."""
    if not (R > 0 and omega_m > 0):
        raise InvalidParametersError("R and omega_m must be > 0")
    g = coeffs.as_array()
    out = [Margin(f"G{j + 1}", abs(g[j]) / omega_m) for j in range(5)]
    out += [Margin(f"R*G{j + 1}", abs(R * g[j]) / omega_m) for j in (2, 3, 4)]
    out += [Margin(f"G{j + 1}/R", abs(g[j]) / (R * omega_m)) for j in (0, 1)]
    return out


def rwa_valid(margins: list, threshold: float = RWA_THRESHOLD) -> bool:
    return all(m.ratio <= threshold for m in margins)


class MeanFieldReport(NamedTuple):
    worst_ratio: float
    pair: tuple  # (k, l, j): drive indices (1-based) and coupling order
    valid: bool


def rwa_meanfield_validity(params: OptomechParams, threshold: float = RWA_THRESHOLD) -> MeanFieldReport:
    """Worst |g_j α_k α_l| / |ω_k - ω_l| over active drive pairs and j = lin, quad."""
    alphas = stationary_cavity_amplitudes(params)
    idx = [i for i, d in enumerate(params.drives) if d.eps != 0]
    if len(idx) < 2:
        raise InvalidParametersError("mean-field RWA check needs at least two active drives")
    worst, where = 0.0, None
    for k, l in itertools.combinations(idx, 2):
        gap = abs(params.drives[k].delta - params.drives[l].delta)
        for j, g in ((1, params.g_lin), (2, params.g_quad)):
            num = abs(g * alphas[k] * alphas[l])
            ratio = math.inf if gap == 0 and num > 0 else (num / gap if gap else 0.0)
            if where is None or ratio > worst:
                worst, where = ratio, (k + 1, l + 1, j)
    return MeanFieldReport(worst, where, worst <= threshold)


# ------------------------------------------------------------ crystal model


class CrystalCouplings(NamedTuple):
    g_lin: float
    g_quad: float
    R: float | None  # None when g_lin = 0 (purely quadratic)

    @property
    def purely_quadratic(self) -> bool:
        return self.g_lin == 0


def supermode_frequency(params: CrystalParams, X: float, branch: int = 1, omega: float = 0.0) -> float:
    """ω_±(X) = ω + g_± X ± √(J² + g_{+-}² X²) with constant self and cross couplings."""
    g_self = 0.5 * (params.g_L + params.g_R)
    g_cross = 0.5 * (params.g_L - params.g_R)
    return omega + g_self * X + branch * math.sqrt(params.J ** 2 + (g_cross * X) ** 2)


def crystal_couplings(params: CrystalParams) -> CrystalCouplings:
    """First and half-second derivative of ω_+ at X0, in units of x_zpf and x_zpf².

    g_quad = g_{+-}²/(2J) (Z²+1)^{-3/2} x_zpf² with the bare g_{+-} = (g_L - g_R)/2.
    """
    g_cross = 0.5 * (params.g_L - params.g_R)
    Z = g_cross * params.X0 / params.J
    g_plus = 0.5 * (params.g_L + params.g_R) + g_cross * Z / math.sqrt(Z * Z + 1)
    g_lin = g_plus * params.x_zpf
    g_quad = g_cross ** 2 / (2 * params.J) * (Z * Z + 1) ** -1.5 * params.x_zpf ** 2
    return CrystalCouplings(g_lin, g_quad, g_quad / g_lin if g_lin != 0 else None)


# -------------------------------------------------------------- mean field


def mean_field_beta(params: MeanFieldParams, alphas) -> complex:
    """Stationary mechanical mean field under the RWA drive average."""
    s = sum(abs(a) ** 2 for a in alphas)
    den = (params.kappa_p / 2) ** 2 + params.Omega * (params.Omega + 4 * params.g0_2 * s)
    if abs(den) <= 1e-15 * max(1.0, params.Omega ** 2, (params.kappa_p / 2) ** 2):
        raise ParametricResonanceError("mean-field denominator vanishes")
    return -params.g0_1 * s * (params.Omega + 0.5j * params.kappa_p) / den


def beta_dot(params: MeanFieldParams, alphas, beta: complex) -> complex:
    s = sum(abs(a) ** 2 for a in alphas)
    q = 2.0 * complex(beta).real
    return (-params.kappa_p / 2 - 1j * params.Omega) * beta - 1j * s * (params.g0_1 + 2 * params.g0_2 * q)


class SelfConsistent(NamedTuple):
    alphas: list
    beta: complex
    iterations: int
    converged: bool


def self_consistent_mean_field(
    params: OptomechParams, mean_field: MeanFieldParams, max_iter: int = 100, tol: float = 1e-12
) -> SelfConsistent:
    """Fixed-point iteration of β and the detuning-shifted cavity amplitudes."""
    beta = 0j
    alphas = stationary_cavity_amplitudes(params)
    for it in range(1, max_iter + 1):
        new_beta = mean_field_beta(mean_field, alphas)
        alphas = stationary_cavity_amplitudes(params, new_beta, mean_field)
        if abs(new_beta - beta) <= tol * max(1.0, abs(new_beta)):
            return SelfConsistent(alphas, new_beta, it, True)
        beta = new_beta
    return SelfConsistent(alphas, beta, max_iter, False)
