"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest -v -s tests/test_acceptance.py`` or as a script.
"""
import itertools
import math
import sys
import time

import mpmath
import numpy as np
import pytest

from lqreservoir import engineered as eng
from lqreservoir import fock
from lqreservoir import opensystem as osys
from lqreservoir import optomech as om
from lqreservoir import states as st
from lqreservoir import wigner as wg
from lqreservoir.darkstate import convergence_sweep, dark_state_solve, sweep_converged


def report(capsys, k: int, ok: bool, detail: str, t0: float) -> None:
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} ({detail}; {time.time() - t0:.1f} s)"
    # printed outside pytest's capture so every verdict shows in the log
    with capsys.disabled():
        print("\n" + line, flush=True)
    assert ok, line


# ---------------------------------------------------------------- 1


def test_criterion_1_dark_state_oracle(capsys):
    t0 = time.time()
    cases = [("cubic", {"gamma": 0.1, "r": 0.6, "theta": -math.pi, "ell": 0}, [350, 400])]
    cases += [("cat_phi", {"n": n}, [100, 120]) for n in range(1, 5)]
    cases += [("cat_psi", {"n": n}, [100, 120]) for n in range(1, 5)]
    cases += [("fock_like", {"n": n, "zeta": z}, [60, 80]) for n in range(1, 6) for z in (0.5, 0.7)]
    bad = []
    worst = 0.0
    for kind, p, dims in cases:
        c, phi = st.recipe_and_dark_state(kind, dims[-1], **p)
        res = dark_state_solve(c, dims[-1])
        conv = sweep_converged(convergence_sweep(c, dims))
        err = 1 - abs(res.states[0].overlap(phi)) if res.states else 1.0
        worst = max(worst, err)
        if not (conv and res.unique and err <= 1e-6):
            bad.append(f"{kind}{p}")
    elapsed = time.time() - t0
    ok = not bad and elapsed < 30
    report(capsys, 1, ok, f"{len(cases)} recipes, worst 1-F = {worst:.1e}, failing: {bad or 'none'}", t0)


# ---------------------------------------------------------------- 2


def test_criterion_2_bosonicity(capsys):
    t0 = time.time()
    grid = itertools.product((0, 0.3, 0.8), (0, -math.pi, math.pi / 2), (0, 0.2, 0.5), (0, 1), (0, 1))
    worst = max(np.abs(eng.bosonicity_defect(eng.cubic_recipe(*g))[0]).max() for g in grid)
    rng = np.random.default_rng(7)
    parity_ok = True
    for _ in range(10):
        c3, c4, c5 = rng.normal(size=3) + 1j * rng.normal(size=3)
        f = eng.build_f(eng.Coefficients(0, 0, c3, c4, c5), 40)
        par = fock.parity_op(40)
        parity_ok &= bool(np.array_equal(f @ par, par @ f))
    ok = worst < 1e-12 and parity_ok and time.time() - t0 < 5
    report(capsys, 2, ok, f"max bosonicity residual {worst:.1e}, parity commutes exactly: {parity_ok}", t0)


# ---------------------------------------------------------------- 3


def test_criterion_3_cubic_moments(capsys):
    t0 = time.time()
    dim = 160
    x, p = fock.quadrature_ops(dim)
    parts = []
    ok = True
    for gamma, r in [(0.1, 0.6), (0.4, 0.8)]:
        s = st.cubic_phase_state(gamma, r, dim, tail_tol=None)
        mx, mp = s.expect(x).real, s.expect(p).real
        want = 1.5 * gamma * math.exp(2 * r)
        good = abs(mx) <= 1e-8 and abs(mp - want) <= 1e-6
        ok &= good
        parts.append(f"({gamma},{r}): <x>={mx:.1e}, <p>={mp:.6f} vs {want:.6f} (err {abs(mp - want):.1e})")
    ok &= time.time() - t0 < 10
    report(capsys, 3, ok, "; ".join(parts), t0)


# ---------------------------------------------------------------- 4


def _wigner_matrix():
    yield "cubic(0.1,0.6)", wg.wigner_cubic_analytic, {"gamma": 0.1, "r": 0.6}, lambda: st.cubic_phase_state(0.1, 0.6, 300), True
    for n in range(5):
        for lam in (0.0, 0.7):
            yield (f"family1({n},{lam})", wg.wigner_family1_analytic, {"n": n, "lam": lam},
                   lambda n=n, lam=lam: st.family1_superposition(n, lam, n + 1), n >= 1)
        for s, u in itertools.product((0.6, 1.3), (0.0, 0.4)):
            yield (f"family2({n},{s},{u})", wg.wigner_family2_analytic, {"n": n, "s": s, "u": u},
                   lambda n=n, s=s, u=u: st.family2_superposition(n, s, u, n + 1), n >= 1)


def test_criterion_4_wigner_agreement(capsys):
    t0 = time.time()
    worst, bad, count = 0.0, [], 0
    for name, func, params, make, non_gaussian in _wigner_matrix():
        a = wg.analytic_grid(func, (-5, 5), (-5, 5), 81, 81, renormalize=True, **params)
        b = wg.wigner_numeric(make(), (-5, 5), (-5, 5), 81, 81).normalized()
        d = a.sup_diff(b)
        worst = max(worst, d)
        count += 1
        if d > 1e-6 or (non_gaussian and min(a.minimum(), b.minimum()) >= -1e-3):
            bad.append(name)
    ok = not bad and time.time() - t0 < 60
    report(capsys, 4, ok, f"{count} cases, worst sup-diff {worst:.1e}, failing: {bad or 'none'}", t0)


# ---------------------------------------------------------------- 5


def test_criterion_5_cat_fidelity(capsys):
    t0 = time.time()
    phi = osys.max_cat_fidelity(10, "phi").fidelity
    psi = osys.max_cat_fidelity(10, "psi").fidelity
    cross = 0.0
    for n in range(1, 11):
        wrong = "odd" if n % 2 == 0 else "even"
        for alpha in (0.5, 1.5, 3.0):
            cat = st.cat_state(alpha, wrong, 80)
            for target in (st.cat_phi_state(n, 80), st.cat_psi_state(n, 80)):
                cross = max(cross, abs(cat.overlap(target)))
    ok = abs(phi - 0.97) <= 0.01 and abs(psi - 0.92) <= 0.01 and cross < 1e-14 and time.time() - t0 < 10
    report(capsys, 5, ok, f"F_max(10): phi {phi:.5f}, psi {psi:.5f}; max cross-parity overlap {cross:.1e}", t0)


# ---------------------------------------------------------------- 6


def test_criterion_6_fock_fidelity(capsys):
    t0 = time.time()
    zetas = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99]
    mono = above = True
    for n in range(1, 11):
        f = dict(osys.fock_fidelity_curve(n, zetas))
        vals = [f[z] for z in zetas]
        mono &= all(b >= a for a, b in zip(vals, vals[1:]))
        above &= f[0.99] > f[0.7]
    limit = min(osys.fock_fidelity_curve(n, [0.999])[0][1] for n in range(1, 6))
    ok = mono and above and limit > 0.97 and time.time() - t0 < 5
    report(capsys, 6, ok, f"monotone {mono}, F(0.99) > F(0.7) {above}, min F(0.999) for n<=5 = {limit:.5f}", t0)


# ---------------------------------------------------------------- 7

NBAR = np.linspace(0, 0.2, 5)
COOP = np.logspace(3, 6, 5)


def _thermal_sets():
    r = 0.69
    return {
        "cubic": (st.recipe_and_dark_state("cubic", 100, gamma=0.1, r=0.6, theta=-math.pi, tail_tol=None), 100),
        "fock_like5": (st.recipe_and_dark_state("fock_like", 70, n=5, zeta=math.tanh(r)), 70),
        "cat_psi3": (st.recipe_and_dark_state("cat_psi", 80, n=3), 80),
        "cat_psi5": (st.recipe_and_dark_state("cat_psi", 80, n=5), 80),
    }


def test_criterion_7_thermal_map(capsys):
    t0 = time.time()
    dim = 60
    f1 = osys.fidelity(osys.adiabatic_steady_state(eng.cat_psi_recipe(1), osys.AdiabaticParams(coop=1e4), dim, tail_tol=None),
                       st.cat_psi_dark_state(1, dim))
    f3 = osys.fidelity(osys.adiabatic_steady_state(eng.cat_psi_recipe(3), osys.AdiabaticParams(coop=1e4), dim, tail_tol=None),
                       st.cat_psi_dark_state(3, dim))
    maps = {}
    for name, ((coeffs, target), d) in _thermal_sets().items():
        maps[name] = osys.thermal_fidelity_map(coeffs, target, NBAR, COOP, d).values
    decreasing = {k: bool(np.all(np.diff(v, axis=0) < 0)) for k, v in maps.items()}
    excess = float((maps["cat_psi5"] - maps["cat_psi3"]).max())
    ok = f1 >= 0.99 and f3 >= 0.95 and all(decreasing.values()) and excess <= 1e-3 and time.time() - t0 < 600
    detail = (f"F(cat_psi1) = {f1:.5f} (>= 0.99), F(cat_psi3) = {f3:.5f} (>= 0.95); strictly decreasing in n_bar: "
              f"{all(decreasing.values())}; max(n5 - n3) = {excess:.4f}")
    report(capsys, 7, ok, detail, t0)


# ---------------------------------------------------------------- 8


def test_criterion_8_imprecision_map(capsys):
    t0 = time.time()
    grid = np.linspace(-0.05, 0.05, 21)
    centre = 10
    parts, ok = [], True
    for n, dim in [(1, 60), (3, 80)]:
        m = osys.imprecision_map(n, grid, grid, dim=dim)
        rho = osys.adiabatic_steady_state(eng.cat_psi_recipe(n), osys.AdiabaticParams(coop=math.inf), dim, tail_tol=None)
        base = osys.fidelity(rho, st.cat_psi_dark_state(n, dim))
        same = abs(m.values[centre, centre] - base) <= 1e-10
        below = bool(np.all(m.values <= m.values[centre, centre]))
        ok &= same and below
        msg = f"n={n}: baseline match {same}, F(d) <= F(0) {below}"
        if n == 1:
            inner = m.values[centre - 1:centre + 2, centre - 1:centre + 2].min()
            ok &= inner >= 0.99
            msg += f", min F for |d| <= 0.005 = {inner:.5f}"
        parts.append(msg)
    ok &= time.time() - t0 < 600
    report(capsys, 8, ok, "; ".join(parts), t0)


# ---------------------------------------------------------------- 9


def test_criterion_9_two_mode_consistency(capsys):
    t0 = time.time()
    c = eng.cat_psi_recipe(1)
    kappa_a = 20 * float(np.abs(c.as_array()).max())
    parts, ok = [], True
    for gamma_m in (0.0, 0.01):
        p = osys.TwoModeParams(kappa_a, (4, 20), gamma_m=gamma_m)
        res = osys.two_mode_steady_state(c, p)
        ad = osys.adiabatic_steady_state(c, osys.equivalent_adiabatic(c, p), 20, tail_tol=None)
        ft = osys.fidelity_mixed(res.target, ad)
        fa = osys.fidelity(res.auxiliary, fock.basis_state(0, 4))
        # damping is unspecified for this check; at gamma_m > 0 the auxiliary picks up
        # real excitation, so its vacuum bound is asserted only for the default gamma_m = 0
        ok &= ft > 0.99 and (gamma_m > 0 or fa > 0.999)
        parts.append(f"gamma_m={gamma_m}: target {ft:.6f}, auxiliary {fa:.6f}")
    ok &= time.time() - t0 < 120
    report(capsys, 9, ok, "; ".join(parts), t0)


# ---------------------------------------------------------------- 10


def test_criterion_10_optomech(capsys):
    t0 = time.time()
    recipes = [eng.cat_phi_recipe(n) for n in range(6)] + [eng.cat_psi_recipe(n) for n in range(6)]
    recipes += [eng.fock_like_recipe_zeta(n, z) for n in range(6) for z in (0.5, 0.7)]
    recipes += [eng.cubic_recipe(0.6, -math.pi, eng.t_for_cubicity(0.1, 0.6))]
    worst = 0.0
    for c in recipes:
        back = om.dressed_couplings(om.drive_inverse_design(c, 1.0, 0.1, 0.02, 0.003))
        worst = max(worst, np.abs(back.as_array() - c.as_array()).max() / np.abs(c.as_array()).max())
    counts = [om.drive_count(om.drive_inverse_design(c, 1.0, 0.1, 0.02, 0.003)) for c in (
        eng.cubic_recipe(0.6, -math.pi, 0.3), eng.cat_phi_recipe(2), eng.cat_psi_recipe(1), eng.fock_like_recipe_zeta(3, 0.5))]
    mpmath.mp.dps = 40
    fd_err = 0.0
    for p in (om.CrystalParams(1.0, 0.3, -0.5, 0.7, 0.05), om.CrystalParams(2.5, 1.2, 0.4, -1.3, 0.01)):
        def w(X, p=p):
            return (p.g_L + p.g_R) / 2 * X + mpmath.sqrt(p.J ** 2 + ((p.g_L - p.g_R) / 2 * X) ** 2)
        got = om.crystal_couplings(p)
        d1, d2 = float(mpmath.diff(w, p.X0, 1)), float(mpmath.diff(w, p.X0, 2)) / 2
        fd_err = max(fd_err, abs(got.g_lin / p.x_zpf - d1) / abs(d1), abs(got.g_quad / p.x_zpf ** 2 - d2) / abs(d2))
    mf = om.MeanFieldParams(kappa_p=0.3, Omega=1.7, g0_1=0.02, g0_2=0.005)
    alphas = [0.3 - 0.1j, 1.2j, 0.5]
    resid = abs(om.beta_dot(mf, alphas, om.mean_field_beta(mf, alphas)))
    ok = worst <= 1e-12 and counts == [5, 4, 3, 3] and fd_err <= 1e-8 and resid < 1e-12 and time.time() - t0 < 5
    report(capsys, 10, ok, f"roundtrip {worst:.1e}, drive counts {counts}, Taylor rel err {fd_err:.1e}, beta residual {resid:.1e}", t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
