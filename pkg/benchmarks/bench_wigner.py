"""Time the compiled Wigner kernel against the numpy fallback.

Two inputs per dimension: a sparse cat state and a dense random density matrix.

    python benchmarks/bench_wigner.py [--dims 20,60,120] [--points 81] [--repeat 3]
"""
import argparse
import itertools
import time

import numpy as np

from lqreservoir import _wigner_kernel_py
from lqreservoir import states as st

try:
    from lqreservoir import _wigner_kernel
except ImportError:
    _wigner_kernel = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", default="20,60,120")
    ap.add_argument("--points", type=int, default=81)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    axis = np.linspace(-5, 5, args.points)
    xs, ps = (np.ascontiguousarray(a.ravel()) for a in np.meshgrid(axis, axis, indexing="ij"))
    rng = np.random.default_rng(0)
    print(f"{'state':>7} {'dim':>5} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for kind, dim in itertools.product(("cat", "dense"), (int(d) for d in args.dims.split(","))):
        if kind == "cat":
            rho = st.cat_psi_state(3, dim).projector().entries
        else:
            a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            rho = a @ a.conj().T
            rho /= np.trace(rho).real
        rho = np.ascontiguousarray(rho, dtype=complex)
        t_py, w_py = best_of(lambda: _wigner_kernel_py.wigner_points(rho, xs, ps), args.repeat)
        if _wigner_kernel is None:
            print(f"{kind:>7} {dim:>5} {t_py:>11.4f} {'n/a':>11}")
            continue
        t_cy, w_cy = best_of(lambda: _wigner_kernel.wigner_points(rho, xs, ps), args.repeat)
        diff = np.abs(np.asarray(w_py) - np.asarray(w_cy)).max()
        print(f"{kind:>7} {dim:>5} {t_py:>11.4f} {t_cy:>11.4f} {t_py / t_cy:>8.1f} {diff:>11.1e}")


if __name__ == "__main__":
    main()
