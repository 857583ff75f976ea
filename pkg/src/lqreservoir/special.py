"""Special functions: Hermite, generalized Laguerre, Airy Ai, terminating 2F1."""
from __future__ import annotations

import math

import numpy as np

from .errors import UnsupportedParametersError

# Ai(0) and -Ai'(0)
_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)

# Maclaurin series is used on [AIRY_SERIES_MIN, AIRY_SERIES_MAX]; outside that
# window the asymptotic expansions are more accurate than the cancelling series.
AIRY_SERIES_MIN = -7.0
AIRY_SERIES_MAX = 5.5


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) for real or complex (array) z."""
    return hermite_all(n, z)[n]


def hermite_all(n: int, z) -> np.ndarray:
    """Stack [H_0(z), ..., H_n(z)] built with the three-term recurrence."""
    if n < 0:
        raise UnsupportedParametersError("Hermite degree must be >= 0")
    z = np.asarray(z)
    dtype = np.result_type(z.dtype, float)
    out = np.empty((n + 1,) + z.shape, dtype=dtype)
    out[0] = 1.0
    if n >= 1:
        out[1] = 2.0 * z
    for k in range(1, n):
        out[k + 1] = 2.0 * z * out[k] - 2.0 * k * out[k - 1]
    return out


def laguerre_gen(n: int, a: float, y):
    """Generalized Laguerre polynomial L_n^{(a)}(y)."""
    if n < 0:
        raise UnsupportedParametersError("Laguerre degree must be >= 0")
    y = np.asarray(y, dtype=float)
    prev = np.zeros_like(y)
    cur = np.ones_like(y)
    for k in range(n):
        prev, cur = cur, ((2 * k + 1 + a - y) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _airy_series(z: np.ndarray) -> np.ndarray:
    z3 = z ** 3
    f = np.ones_like(z)
    g = z.copy()
    tf = np.ones_like(z)
    tg = z.copy()
    for k in range(200):
        tf = tf * z3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * z3 / ((3 * k + 3) * (3 * k + 4))
        f += tf
        g += tg
        if np.all(np.abs(tf) + np.abs(tg) <= 1e-17 * (np.abs(f) + np.abs(g))):
            break
    return _AI0 * f - _AIP0 * g


def _airy_u_coeffs(count: int) -> np.ndarray:
    u = np.empty(count)
    u[0] = 1.0
    for k in range(1, count):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
    return u


_U = _airy_u_coeffs(40)


def _optimal_sum(terms: list[np.ndarray]) -> np.ndarray:
    """Sum an asymptotic series, stopping each element at its smallest term."""
    total = np.zeros_like(terms[0])
    done = np.zeros(terms[0].shape, dtype=bool)
    last = np.full(terms[0].shape, np.inf)
    for t in terms:
        mag = np.abs(t)
        done |= mag > last
        total = np.where(done, total, total + t)
        last = np.where(done, last, mag)
    return total


def _airy_pos_asym(z: np.ndarray) -> np.ndarray:
    zeta = 2.0 / 3.0 * z ** 1.5
    terms = [(-1) ** k * _U[k] / zeta ** k for k in range(len(_U))]
    s = _optimal_sum(terms)
    return np.exp(-zeta) / (2 * math.sqrt(math.pi) * z ** 0.25) * s


def _airy_neg_asym(z: np.ndarray) -> np.ndarray:
    az = -z
    zeta = 2.0 / 3.0 * az ** 1.5
    even = [(-1) ** k * _U[2 * k] / zeta ** (2 * k) for k in range(len(_U) // 2)]
    odd = [(-1) ** k * _U[2 * k + 1] / zeta ** (2 * k + 1) for k in range(len(_U) // 2)]
    ph = zeta + math.pi / 4
    return (np.sin(ph) * _optimal_sum(even) - np.cos(ph) * _optimal_sum(odd)) / (
        math.sqrt(math.pi) * az ** 0.25
    )


def airy_ai(z):
    """Airy function Ai(z) for real (array) z."""
    z = np.asarray(z, dtype=float)
    flat = np.atleast_1d(z).ravel()
    out = np.empty_like(flat)
    mid = (flat >= AIRY_SERIES_MIN) & (flat <= AIRY_SERIES_MAX)
    hi = flat > AIRY_SERIES_MAX
    lo = flat < AIRY_SERIES_MIN
    if mid.any():
        out[mid] = _airy_series(flat[mid])
    if hi.any():
        out[hi] = _airy_pos_asym(flat[hi])
    if lo.any():
        out[lo] = _airy_neg_asym(flat[lo])
    out = out.reshape(z.shape)
    return out if out.ndim else float(out)


def hyp2f1_terminating(a: float, b: float, c: float, z: float) -> float:
    """Gauss 2F1(a, b; c; z) when a or b is a nonpositive integer (finite sum)."""
    m = None
    for p in (a, b):
        if p <= 0 and float(p).is_integer():
            m = int(-p) if m is None else min(m, int(-p))
    if m is None:
        raise UnsupportedParametersError(f"2F1({a}, {b}; {c}; z) does not terminate")
    total, term = 1.0, 1.0
    for k in range(m):
        if c + k == 0:
            raise UnsupportedParametersError("2F1 with c a nonpositive integer")
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
    return total


def double_factorial(m: int) -> int:
    """m!! with the conventions (-1)!! = 0!! = 1."""
    if m < -1:
        raise UnsupportedParametersError("double factorial needs m >= -1")
    out = 1
    for k in range(m, 0, -2):
        out *= k
    return out


def log_factorial(n) -> np.ndarray | float:
    n = np.asarray(n, dtype=float)
    out = np.vectorize(math.lgamma, otypes=[float])(n + 1.0)
    return out if out.ndim else float(out)


def log_binom(n: int, k) -> np.ndarray | float:
    return log_factorial(n) - log_factorial(k) - log_factorial(np.asarray(n) - np.asarray(k))
