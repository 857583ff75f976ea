"""Pure-numpy version of the Wigner kernel, vectorized over points."""
import numpy as np
from scipy.special import gammaln


def wigner_points(rho: np.ndarray, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    dim = rho.shape[0]
    xs = np.asarray(xs, float)
    ps = np.asarray(ps, float)
    y = 2.0 * (xs ** 2 + ps ** 2)
    phi = np.arctan2(ps, xs)
    pos = y > 0
    logy = np.log(np.where(pos, y, 1.0))
    acc = np.zeros_like(y)
    for L in range(dim):
        if L == 0:
            g0 = np.exp(-0.5 * y)
        else:
            g0 = np.where(pos, np.exp(0.5 * L * logy - 0.5 * gammaln(L + 1.0) - 0.5 * y), 0.0)
        cl, sl = np.cos(L * phi), np.sin(L * phi)
        g1 = np.zeros_like(y)
        diag = np.zeros_like(y)
        sgn = 1.0
        for m in range(dim - L):
            if m == 1:
                g1, g0 = g0, (1.0 + L - y) * g0 / np.sqrt(L + 1.0)
            elif m > 1:
                g2 = ((2.0 * m - 1.0 + L - y) * g0 - np.sqrt((m - 1.0) * (m - 1.0 + L)) * g1) / np.sqrt(m * (m + L) * 1.0)
                g1, g0 = g0, g2
            z = rho[m, m + L]
            if z != 0:
                diag += sgn * (z.real * cl - z.imag * sl) * g0
            sgn = -sgn
        acc += (1.0 if L == 0 else 2.0) * diag
    return acc / np.pi
