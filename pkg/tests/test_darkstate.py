import math

import numpy as np
import pytest

from lqreservoir import engineered as eng
from lqreservoir import states as st
from lqreservoir.darkstate import convergence_sweep, dark_state_solve, sweep_converged
from lqreservoir.errors import InvalidDimensionError, InvalidParametersError

C = eng.Coefficients


def test_linear_squeezed():
    r = dark_state_solve(C(1, 0.5), 60)
    assert r.unique and r.converged
    assert abs(r.states[0].overlap(st.squeezed_vacuum(math.atanh(0.5), 60))) > 1 - 1e-8
    assert np.all(np.diff(r.singular_values) >= 0)


def test_unstable_linear_has_no_dark_state():
    r = dark_state_solve(C(0.5, 1), 60)
    assert r.count == 0 and not r.converged
    report = convergence_sweep(C(0.5, 1), [20, 40, 60])
    assert all(p.count == 0 and math.isnan(p.fidelity) for p in report)
    assert not sweep_converged(report)


def test_quadratic_only_parity_split():
    r = dark_state_solve(C(0, 0, 1, 0.3, 0.2), 60)
    assert r.count >= 2
    assert sorted(r.parity) == [-1, 1]
    for s, par in zip(r.states, r.parity):
        wrong = s.amps[0::2] if par < 0 else s.amps[1::2]
        assert np.abs(wrong).max() < 1e-10
    gram = np.array([[np.vdot(a.amps, b.amps) for b in r.states] for a in r.states])
    assert np.abs(gram - np.eye(r.count)).max() < 1e-10


def test_cat_psi3_dim100():
    c, phi = st.recipe_and_dark_state("cat_psi", 100, n=3)
    r = dark_state_solve(c, 100)
    assert r.unique
    assert abs(r.states[0].overlap(phi)) > 1 - 1e-6


def test_cat_psi3_dim80():
    # the state's top-decile population at dim 80 exceeds the 1e-8 honesty bound
    c, phi = st.recipe_and_dark_state("cat_psi", 80, n=3)
    r = dark_state_solve(c, 80)
    assert r.unique
    assert abs(r.states[0].overlap(phi)) > 1 - 1e-6


def test_truncation_artifacts_are_rejected():
    r = dark_state_solve(eng.cat_psi_recipe(3), 80)
    assert r.rejected == 1 and r.count == 0


def test_cat_phi1_sweep():
    report = convergence_sweep(eng.cat_phi_recipe(1), [20, 40, 60, 80])
    assert [p.dim for p in report] == [20, 40, 60, 80]
    assert sweep_converged(report)
    assert abs(report[1].fidelity - report[2].fidelity) < 1e-9


def test_cubic_sweep_gap_grows():
    report = convergence_sweep(eng.cubic_recipe(0.8, -math.pi, 0.5), [60, 100, 140, 180])
    gaps = [p.singular_gap for p in report]
    assert all(b > a for a, b in zip(gaps, gaps[1:]))


def test_sweep_needs_ascending_dims():
    with pytest.raises(InvalidParametersError):
        convergence_sweep(C(1), [40, 20])


def test_solver_argument_checks():
    with pytest.raises(InvalidDimensionError):
        dark_state_solve(C(1), 7)
    with pytest.raises(InvalidParametersError):
        dark_state_solve(C(1), 20, threshold=0)


def test_deterministic_phase():
    a = dark_state_solve(eng.cat_psi_recipe(2), 100).states[0].amps
    b = dark_state_solve(eng.cat_psi_recipe(2), 100).states[0].amps
    assert np.array_equal(a, b)
    j = np.argmax(np.abs(a))
    assert abs(a[j].imag) < 1e-15 and a[j].real > 0


# converged dims chosen per recipe family
UNIQUE_CASES = (
    [("cat_phi", {"n": n}, 120) for n in range(4)]
    + [("cat_phi", {"n": 4}, 100), ("cat_phi", {"n": 5}, 100)]
    + [("cat_psi", {"n": n}, 120) for n in range(5)]
    + [("cat_psi", {"n": 5}, 140)]
    + [("fock_like", {"n": n, "zeta": z}, 80) for n in range(6) for z in (0.5, 0.7)]
)


@pytest.mark.parametrize("kind,p,dim", UNIQUE_CASES)
def test_uniqueness_and_gap(kind, p, dim):
    c, phi = st.recipe_and_dark_state(kind, dim, **p)
    r = dark_state_solve(c, dim)
    assert r.unique
    assert r.gap_ratio > 1e4
    assert abs(r.states[0].overlap(phi)) > 1 - 1e-6
