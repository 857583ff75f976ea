import math

import numpy as np
import pytest

from lqreservoir import engineered as eng
from lqreservoir import fock
from lqreservoir import opensystem as osys
from lqreservoir import states as st
from lqreservoir.errors import DegeneracyError, InvalidDimensionError, InvalidParametersError, TruncationError
from lqreservoir.fock import DensityMatrix

C = eng.Coefficients
AP = osys.AdiabaticParams


def _trace_row(dim):
    row = np.zeros(dim * dim)
    row[:: dim + 1] = 1.0
    return row


def test_dissipator_decay():
    dim = 4
    one = fock.basis_state(1, dim).projector().entries
    out = osys.unvec(osys.dissipator(fock.annihilation_op(dim)) @ osys.vec(one), dim)
    ref = np.zeros((dim, dim))
    ref[0, 0], ref[1, 1] = 1, -1
    assert np.allclose(out, ref, atol=1e-15)


def test_vec_roundtrip():
    m = np.arange(9).reshape(3, 3) + 1j
    assert np.array_equal(osys.unvec(osys.vec(m), 3), m)


@pytest.mark.parametrize("coop", [math.inf, 1e3])
def test_liouvillian_preserves_trace(coop):
    dim = 20
    liou = osys.adiabatic_liouvillian(eng.cat_psi_recipe(2), AP(coop=coop, n_bar=0.1), dim)
    assert np.abs(_trace_row(dim) @ liou).max() < 1e-14 * abs(liou).max()


def test_two_mode_liouvillian_preserves_trace():
    p = osys.TwoModeParams(2.0, (3, 8), gamma_m=0.1, n_bar=0.2)
    liou = osys.two_mode_liouvillian(eng.cat_psi_recipe(1), p)
    assert np.abs(_trace_row(24) @ liou).max() < 1e-12


def _check_state(rho, liou):
    m = rho.entries
    assert np.abs(m - m.conj().T).max() < 1e-14
    assert np.trace(m).real == pytest.approx(1, abs=1e-12)
    assert np.linalg.eigvalsh(m).min() >= -1e-8
    resid = np.abs(liou @ osys.vec(m)).max() / abs(liou).max()
    assert resid <= 1e-9


def test_linear_adiabatic_example():
    params = AP(coop=1e4)
    rho = osys.adiabatic_steady_state(C(1, 0.3), params, 40)
    _check_state(rho, osys.adiabatic_liouvillian(C(1, 0.3), params, 40))
    assert osys.fidelity(rho, st.squeezed_vacuum(math.atanh(0.3), 40)) > 0.999


def test_cat_psi1_adiabatic_example():
    c, phi = st.recipe_and_dark_state("cat_psi", 60, n=1)
    rho = osys.adiabatic_steady_state(c, AP(coop=1e4), 60, tail_tol=None)
    assert osys.fidelity(rho, phi) > 0.99


def test_cat_psi1_infinite_cooperativity():
    c, phi = st.recipe_and_dark_state("cat_psi", 60, n=1)
    rho = osys.adiabatic_steady_state(c, AP(coop=math.inf), 60)
    assert osys.fidelity(rho, phi) == pytest.approx(1, abs=1e-3)


def test_truncation_error_at_finite_coop():
    with pytest.raises(TruncationError):
        osys.adiabatic_steady_state(eng.cat_psi_recipe(1), AP(coop=1e4), 60)


def test_monotone_in_nbar():
    c, phi = st.recipe_and_dark_state("cat_psi", 40, n=1)
    f = [osys.fidelity(osys.adiabatic_steady_state(c, AP(coop=1e3, n_bar=n), 40, tail_tol=None), phi)
         for n in (0, 0.05, 0.1, 0.2, 0.5)]
    assert all(b < a for a, b in zip(f, f[1:]))


LARGE_COOP = (
    [("cat_phi", {"n": n}) for n in range(4)]
    + [("cat_psi", {"n": n}) for n in range(4)]
    + [("fock_like", {"n": n, "zeta": z}) for n in range(4) for z in (0.5, 0.7)]
)


@pytest.mark.parametrize("kind,p", LARGE_COOP)
def test_large_coop_consistency(kind, p):
    c, phi = st.recipe_and_dark_state(kind, 60, **p)
    lo, hi = (osys.fidelity(osys.adiabatic_steady_state(c, AP(coop=k), 60, tail_tol=None), phi) for k in (1e2, 1e4))
    assert hi > lo


def test_adiabatic_argument_checks():
    with pytest.raises(InvalidParametersError):
        osys.adiabatic_liouvillian(C(0, 0, 1, 0.3, 0.2), AP(coop=10), 20)
    with pytest.raises(InvalidParametersError):
        AP(coop=0)
    with pytest.raises(InvalidParametersError):
        AP(coop=1, n_bar=-0.1)
    with pytest.raises(InvalidDimensionError):
        osys.TwoModeParams(1.0, (1, 10))
    assert osys.cooperativity(0.5, 0.1, 2.0) == pytest.approx(5.0)


def test_two_mode_linear_example():
    res = osys.two_mode_steady_state(C(1, 0.4), osys.TwoModeParams(1.0, (4, 16)))
    assert osys.fidelity(res.auxiliary, fock.basis_state(0, 4)) > 0.999
    assert osys.fidelity(res.target, st.squeezed_vacuum(math.atanh(0.4), 16)) > 0.995


def test_two_mode_cat_psi1_example():
    c, phi = st.recipe_and_dark_state("cat_psi", 20, n=1)
    res = osys.two_mode_steady_state(c, osys.TwoModeParams(1.0, (4, 20)))
    assert osys.fidelity(res.target, phi) > 0.99


def test_two_mode_matches_adiabatic():
    c = eng.cat_psi_recipe(1)
    p = osys.TwoModeParams(20.0, (4, 20), gamma_m=0.01)
    res = osys.two_mode_steady_state(c, p)
    ad = osys.adiabatic_steady_state(c, osys.equivalent_adiabatic(c, p), 20, tail_tol=None)
    assert osys.equivalent_adiabatic(c, p).coop == pytest.approx(20.0)
    assert osys.fidelity_mixed(res.target, ad) > 0.99


def test_two_mode_quadratic_only_is_degenerate():
    with pytest.raises(DegeneracyError):
        osys.two_mode_steady_state(C(0, 0, 1, 0.3, 0.2), osys.TwoModeParams(4.0, (3, 12)))


def test_parity_is_conserved_in_evolution():
    r = 0.3
    mu, nu = math.cosh(r), math.sinh(r)
    c = C(0, 0, mu * mu, nu * nu, mu * nu)  # f = (μb + νb†)²
    p = osys.TwoModeParams(4.0, (3, 20))
    liou = osys.two_mode_liouvillian(c, p)
    par = np.kron(np.eye(3), fock.parity_op(20))
    finals = []
    for n in (0, 1):
        psi0 = np.kron(fock.basis_state(0, 3).amps, fock.basis_state(n, 20).amps)
        rho = osys.evolve(liou, np.outer(psi0, psi0.conj()), 100.0)
        assert np.trace(par @ rho.entries).real == pytest.approx((-1) ** n, abs=1e-8)
        target = osys.partial_trace(rho.entries, p.dims, 1)
        sq = st.apply_gaussian(fock.basis_state(n, 20), xi=r)
        assert osys.fidelity(DensityMatrix(target), sq) > 1 - 1e-6
        finals.append(target)
    assert osys.fidelity_mixed(DensityMatrix(finals[0]), DensityMatrix(finals[1])) < 1e-6


def test_fidelity_conventions():
    psi = st.cat_psi_state(2, 10)
    assert osys.fidelity(psi.projector(), psi) == pytest.approx(1, abs=1e-14)
    mixed = DensityMatrix(np.eye(10) / 10)
    assert osys.fidelity(mixed, psi) == pytest.approx(1 / math.sqrt(10), abs=1e-14)
    assert osys.fidelity(mixed, psi, squared=True) == pytest.approx(0.1, abs=1e-14)
    with pytest.raises(InvalidDimensionError):
        osys.fidelity(mixed, fock.basis_state(0, 9))
    assert osys.fidelity_mixed(psi.projector(), psi.projector()) == pytest.approx(1, abs=1e-7)


def test_partial_trace_of_product():
    a = fock.basis_state(1, 3).projector().entries
    b = st.squeezed_vacuum(0.2, 5).projector().entries
    joint = np.kron(a, b)
    assert np.allclose(osys.partial_trace(joint, (3, 5), 0), a)
    assert np.allclose(osys.partial_trace(joint, (3, 5), 1), b)


def test_max_cat_fidelity_n1():
    for fam in ("phi", "psi"):
        res = osys.max_cat_fidelity(1, fam)
        alphas = np.linspace(1e-3, 3.5, 400)
        brute = max(abs(st.cat_state(a, "odd", 40).amps[1]) for a in alphas)
        assert res.fidelity >= brute - 1e-9
        assert res.fidelity == pytest.approx(1, abs=1e-5)


@pytest.mark.parametrize("family,expected", [("phi", 0.97), ("psi", 0.92)])
def test_max_cat_fidelity_n10(family, expected):
    res = osys.max_cat_fidelity(10, family)
    assert res.fidelity == pytest.approx(expected, abs=0.01)
    assert res.alpha > 1


def test_max_cat_fidelity_checks():
    with pytest.raises(InvalidParametersError):
        osys.max_cat_fidelity(0, "phi")
    with pytest.raises(InvalidParametersError):
        osys.max_cat_fidelity(2, "chi")


def test_fock_fidelity_curve():
    zetas = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99]
    for n in range(1, 11):
        f = [v for _, v in osys.fock_fidelity_curve(n, zetas)]
        assert all(b >= a for a, b in zip(f, f[1:]))
    assert osys.fock_fidelity_curve(3, [1e-4])[0][1] < 1e-3
    assert osys.fock_fidelity_curve(3, [1 - 1e-6])[0][1] > 0.999


def test_thermal_map_small():
    c, phi = st.recipe_and_dark_state("cat_psi", 40, n=1)
    m = osys.thermal_fidelity_map(c, phi, [0, 0.1], [1e2, 1e3, 1e4], 40)
    assert m.values.shape == (2, 3) and m.tails.shape == (2, 3)
    assert m.values[0, -1] == m.values.max()
    assert np.all(np.diff(m.values, axis=0) < 0)
    rows = list(m.rows())
    assert rows[1] == (0.0, 1e3, m.values[0, 1])
    with pytest.raises(InvalidParametersError):
        osys.thermal_fidelity_map(c, phi, [0, math.nan], [1e2], 40)


def test_imprecision_map_small():
    d = np.linspace(-0.005, 0.005, 3)
    m = osys.imprecision_map(1, d, d, dim=60)
    base = osys.fidelity(osys.adiabatic_steady_state(eng.cat_psi_recipe(1), AP(coop=math.inf), 60),
                         st.cat_psi_dark_state(1, 60))
    assert m.values[1, 1] == pytest.approx(base, abs=1e-10)
    assert np.all(m.values <= m.values[1, 1] + 1e-12)
    assert m.values.min() >= 0.99


def test_perturbed_recipe():
    c = osys.perturbed_cat_psi(2, 0.1, -0.2)
    ref = eng.cat_psi_recipe(2)
    assert c.c4 == pytest.approx(ref.c4 * 1.1) and c.c5 == pytest.approx(ref.c5 * 0.8)
    assert c.c1 == ref.c1 and c.c3 == ref.c3
