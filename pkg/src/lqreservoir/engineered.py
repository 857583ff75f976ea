"""Engineered jump operator f = c1 b + c2 b† + c3 b² + c4 b†² + c5 {b†, b}.

Coefficient recipes for the squeezed, cubic-phase, cat-like and Fock-like
targets, bosonicity residuals, and the parameter maps of the two
finite-superposition families.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFamilyError,
    InvalidDimensionError,
    InvalidParametersError,
    SingularParametersError,
    StabilityError,
    WrongFamilyError,
)
from .fock import annihilation_op

INTEGER_TOL = 1e-8
FAMILY_TOL = 1e-10

_KEYS = ("c1", "c2", "c3", "c4", "c5")


@dataclass(frozen=True)
class Coefficients:
    c1: complex = 0j
    c2: complex = 0j
    c3: complex = 0j
    c4: complex = 0j
    c5: complex = 0j

    def __post_init__(self):
        for k in _KEYS:
            object.__setattr__(self, k, complex(getattr(self, k)))
        if all(getattr(self, k) == 0 for k in _KEYS):
            raise InvalidParametersError("at least one coefficient must be nonzero")

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5], dtype=complex)

    @classmethod
    def from_array(cls, arr) -> "Coefficients":
        return cls(*[complex(v) for v in arr])

    def scaled(self, factor: complex) -> "Coefficients":
        return Coefficients.from_array(factor * self.as_array())

    def replace(self, **kw) -> "Coefficients":
        vals = {k: getattr(self, k) for k in _KEYS}
        vals.update(kw)
        return Coefficients(**vals)

    @property
    def gain2(self) -> float:
        return abs(self.c1) ** 2 - abs(self.c2) ** 2

    @property
    def is_quadratic_only(self) -> bool:
        return self.c1 == 0 and self.c2 == 0

    def to_toml_dict(self) -> dict:
        out = {}
        for k in _KEYS:
            v = getattr(self, k)
            out[f"{k}_re"] = float(v.real)
            out[f"{k}_im"] = float(v.imag)
        return out

    @classmethod
    def from_toml_dict(cls, table: dict) -> "Coefficients":
        unknown = set(table) - {f"{k}_{p}" for k in _KEYS for p in ("re", "im")}
        if unknown:
            raise InvalidParametersError(f"unknown coefficient keys: {sorted(unknown)}")
        vals = {k: complex(float(table.get(f"{k}_re", 0.0)), float(table.get(f"{k}_im", 0.0))) for k in _KEYS}
        return cls(**vals)


def build_f(coeffs: Coefficients, dim: int) -> np.ndarray:
    """Truncated matrix of f.  Needs dim >= 3."""
    if dim < 3:
        raise InvalidDimensionError("build_f needs dim >= 3")
    b = annihilation_op(dim)
    bd = b.conj().T
    anti = np.diag(2.0 * np.arange(dim) + 1.0).astype(complex)
    return coeffs.c1 * b + coeffs.c2 * bd + coeffs.c3 * (b @ b) + coeffs.c4 * (bd @ bd) + coeffs.c5 * anti


def bosonicity_defect(coeffs: Coefficients) -> tuple[np.ndarray, float]:
    """Residuals whose joint vanishing makes [f, f†] proportional to the identity."""
    c1, c2, c3, c4, c5 = coeffs.as_array()
    res = np.array(
        [
            abs(c3) - abs(c4),
            c3 * np.conj(c5) - np.conj(c4) * c5,
            c1 * np.conj(c5) + np.conj(c1) * c3 - c2 * np.conj(c4) - np.conj(c2) * c5,
        ],
        dtype=complex,
    )
    return res, coeffs.gain2


# ---------------------------------------------------------------- Gaussian


@dataclass(frozen=True)
class BogoliubovParams:
    r: float
    theta: float
    gain: float

    @property
    def mu(self) -> float:
        return math.cosh(self.r)

    @property
    def nu(self) -> complex:
        return cmath.exp(1j * self.theta) * math.sinh(self.r)

    @property
    def zeta(self) -> float:
        return math.tanh(self.r)


def bogoliubov_params(coeffs: Coefficients) -> BogoliubovParams:
    """Squeezing parameters of the linear part, with arg c1 gauged to zero."""
    c1, c2 = coeffs.c1, coeffs.c2
    if abs(c2) >= abs(c1):
        raise StabilityError("linear part needs |c2| < |c1| for a normalizable steady state")
    zeta = abs(c2) / abs(c1)
    theta = cmath.phase(c2) - cmath.phase(c1) if c2 != 0 else 0.0
    return BogoliubovParams(math.atanh(zeta), theta, math.sqrt(coeffs.gain2))


def squeezing_recipe(r: float, theta: float = 0.0, gain: float = 1.0) -> Coefficients:
    if r < 0:
        raise InvalidParametersError("r must be >= 0")
    return Coefficients(gain * math.cosh(r), gain * cmath.exp(1j * theta) * math.sinh(r))


# ------------------------------------------------------------------- cubic


@dataclass(frozen=True)
class CubicParams:
    r: float
    theta: float
    t: float
    k: int
    ell: int
    gamma: float


def _cubic_signs(k: int, ell: int) -> tuple[complex, int]:
    # (-1)^{l/2} is read as i^l; this is the choice for which all three
    # bosonicity residuals vanish identically.
    k, ell = int(k) % 2, int(ell) % 4
    return (-1) ** k * 1j ** ell, (-1) ** ell


def cubic_recipe(r: float, theta: float, t: float, k: int = 0, ell: int = 0, gain: float = 1.0) -> Coefficients:
    """Nonlinear Bogoliubov coefficients with |c3| = |c4| = |c5| = t·gain."""
    if r < 0 or t < 0:
        raise InvalidParametersError("need r >= 0 and t >= 0")
    sigma, s = _cubic_signs(k, ell)
    g = gain
    e = cmath.exp
    return Coefficients(
        g * math.cosh(r),
        g * e(1j * theta) * math.sinh(r),
        -sigma * t * g * e(-0.5j * theta),
        -sigma * t * g * e(1.5j * theta),
        sigma * s * t * g * e(0.5j * theta),
    )


def cubicity(t: float, r: float, k: int = 0, ell: int = 0, theta: float = -math.pi) -> float:
    """Cubicity γ of the dark state of cubic_recipe(r, θ, t, k, ℓ).

    θ only rotates the state in phase space and does not change γ.
    """
    k, ell = int(k) % 2, int(ell) % 4
    den = math.cosh(r) + (-1) ** ell * math.sinh(r)
    if abs(den) < 1e-300:
        raise SingularParametersError("mu + (-1)^l nu vanishes")
    return (-1) ** (k + ell) * math.sqrt(8.0) * t / (3.0 * den)


def t_for_cubicity(gamma: float, r: float, k: int = 0, ell: int = 0) -> float:
    """Inverse of cubicity: the t >= 0 giving cubicity γ, with k fixed up by sign."""
    den = math.cosh(r) + (-1) ** (int(ell) % 4) * math.sinh(r)
    return 3.0 * abs(gamma) * den / math.sqrt(8.0)


def cubic_params(r: float, theta: float, t: float, k: int = 0, ell: int = 0) -> CubicParams:
    return CubicParams(r, theta, t, int(k) % 2, int(ell) % 4, cubicity(t, r, k, ell, theta))


# ------------------------------------------------------------ finite sups


def _check_n(n: int) -> int:
    if int(n) != n or n < 0:
        raise InvalidParametersError(f"n must be a nonnegative integer, got {n!r}")
    return int(n)


def cat_phi_recipe(n: int, c1: complex = 1.0) -> Coefficients:
    n = _check_n(n)
    if c1 == 0:
        raise InvalidParametersError("c1 must be nonzero")
    a = c1 / (4.0 * math.sqrt(2.0 * (2 * n + 1)))
    return Coefficients(c1, 0, 3 * a, -a, a)


def cat_psi_recipe(n: int, c1: complex = 1.0) -> Coefficients:
    n = _check_n(n)
    if c1 == 0:
        raise InvalidParametersError("c1 must be nonzero")
    a = c1 / (2.0 * math.sqrt(2 * n + 1))
    return Coefficients(c1, 0, 0, -a, a)


def fock_like_recipe(n: int, r: float, gain: float = 1.0) -> Coefficients:
    """f = gain·(cosh r b + sinh r b†) + gain·√(cosh r sinh r / (2(2n+1))) {b†, b}."""
    n = _check_n(n)
    if not r > 0:
        raise InvalidParametersError("fock_like_recipe needs r > 0")
    if not math.isfinite(r):
        raise StabilityError("r must be finite")
    mu, nu = math.cosh(r), math.sinh(r)
    return Coefficients(gain * mu, gain * nu, 0, 0, gain * math.sqrt(mu * nu / (2.0 * (2 * n + 1))))


def fock_like_recipe_zeta(n: int, zeta: float, gain: float = 1.0) -> Coefficients:
    if not 0 < zeta < 1:
        raise StabilityError("zeta must lie in (0, 1)")
    return fock_like_recipe(n, math.atanh(zeta), gain)


def fock_like_d(n: int, zeta: float) -> float:
    """The d_n parameter of the Fock-like family."""
    if not 0 < zeta < 1:
        raise StabilityError("zeta must lie in (0, 1)")
    return (1 - zeta) / (4 * zeta) * math.sqrt(zeta * (2 * n + 1))


def nearest_integer(value: complex, tol: float = INTEGER_TOL) -> int | None:
    """The integer within tol of value (imaginary part included), else None."""
    value = complex(value)
    k = round(value.real)
    if abs(value.real - k) < tol and abs(value.imag) < tol:
        return int(k)
    return None


@dataclass(frozen=True)
class Family1Params:
    x1: complex
    z1: complex
    alpha: complex
    epsilon: complex

    @property
    def lam(self) -> complex:
        return cmath.sqrt(2 * self.alpha) * (self.x1 + self.z1)

    @property
    def n(self) -> int | None:
        return nearest_integer(self.epsilon)

    @property
    def physical(self) -> bool:
        return (
            self.n is not None
            and self.n >= 0
            and abs(self.alpha.imag) < FAMILY_TOL
            and self.alpha.real > 0
            and abs(self.x1.imag) < FAMILY_TOL
            and abs(self.z1.imag) < FAMILY_TOL
        )


def family1_params(coeffs: Coefficients, tol: float = FAMILY_TOL) -> Family1Params:
    """Wave function (x + x1)^ε exp(-α (x - z1)²) when c5 = (c3 + c4)/2."""
    c1, c2, c3, c4, c5 = coeffs.as_array()
    scale = max(abs(c3), abs(c4), abs(c5), 1e-300)
    if abs(c5 - 0.5 * (c3 + c4)) > tol * scale:
        raise WrongFamilyError("family 1 needs c5 = (c3 + c4)/2")
    if abs(c3 - c4) <= tol * scale or abs(c3 + c4) <= tol * scale:
        raise DegenerateFamilyError("family 1 excludes c3 = ±c4")
    x1 = (c1 - c2) / (math.sqrt(2) * (c3 - c4))
    z1 = math.sqrt(2) * (c1 * c4 - c2 * c3) / (c3 ** 2 - c4 ** 2)
    alpha = 0.5 * (c3 + c4) / (c3 - c4)
    eps = -0.5 - (c1 * c4 - c2 * c3) * (c1 - c2) / (c3 - c4) ** 3
    return Family1Params(complex(x1), complex(z1), complex(alpha), complex(eps))


@dataclass(frozen=True)
class Family2Params:
    """Family-2 parameters.

    The Gaussian of the wave function is centred at ``z2`` and the Hermite
    factor is centred at ``x2``: psi(x) ∝ exp(-α'(x - z2)²) H_η(τ(x - x2)).
    With y = √(2α')(x - z2) this is exp(-y²/2) H_η(s(y - u)).
    """

    x2: complex
    z2: complex
    alpha_p: complex
    tau: complex
    eta: complex
    sqrt_delta: complex

    @property
    def s(self) -> complex:
        return self.tau / cmath.sqrt(2 * self.alpha_p)

    @property
    def u(self) -> complex:
        return cmath.sqrt(2 * self.alpha_p) * (self.x2 - self.z2)

    @property
    def n(self) -> int | None:
        return nearest_integer(self.eta)

    @property
    def physical(self) -> bool:
        reals = (self.alpha_p, self.tau ** 2, self.x2, self.z2)
        return (
            self.n is not None
            and self.n >= 0
            and all(abs(v.imag) < FAMILY_TOL for v in reals)
            and self.alpha_p.real > 0
        )


def _family2_branch(c, w) -> Family2Params:
    c1, c2, c3, c4, c5 = c
    delta = c5 ** 2 - c3 * c4
    den = c3 + c4 - 2 * c5
    alpha_p = (c3 - c4 + 2 * w) / (2 * den)
    tau = math.sqrt(2) * cmath.sqrt(w) / cmath.sqrt(den)
    eta = (c1 ** 2 * c4 + c2 ** 2 * c3 - 2 * c1 * c2 * c5 - 4 * delta * w) / (8 * delta * w)
    z2 = (c2 * (c3 - c5 + w) + c1 * (c4 - c5 - w)) / (math.sqrt(2) * w * (c3 - c4 + 2 * w))
    x2 = (c1 * c4 + c2 * c3 - (c1 + c2) * c5) / (2 * math.sqrt(2) * delta)
    return Family2Params(complex(x2), complex(z2), complex(alpha_p), complex(tau), complex(eta), complex(w))


def family2_params(coeffs: Coefficients, branch: int | None = None, tol: float = FAMILY_TOL) -> Family2Params:
    """Family-2 parameters for c5² ≠ c3 c4 and c5 ≠ (c3 + c4)/2.

    The principal root of c5² - c3 c4 is tried first and the other root is used
    if that gives Re α' <= 0.  ``branch=+1/-1`` forces one of them.
    """
    c = coeffs.as_array()
    c1, c2, c3, c4, c5 = c
    scale = max(abs(c3), abs(c4), abs(c5), 1e-300)
    delta = c5 ** 2 - c3 * c4
    if abs(delta) <= tol * scale ** 2:
        raise DegenerateFamilyError("family 2 needs c5² ≠ c3 c4")
    if abs(c3 + c4 - 2 * c5) <= tol * scale:
        raise WrongFamilyError("c5 = (c3 + c4)/2 belongs to family 1")
    root = cmath.sqrt(delta)
    if branch is not None:
        if branch not in (1, -1):
            raise InvalidParametersError("branch must be +1 or -1")
        cand = [branch * root]
    else:
        cand = [root, -root]
    last = None
    for w in cand:
        if abs(c3 - c4 + 2 * w) <= tol * scale:
            continue
        last = _family2_branch(c, w)
        if branch is not None or last.alpha_p.real > 0:
            return last
    if last is None:
        raise DegenerateFamilyError("both square-root branches are degenerate")
    return last
