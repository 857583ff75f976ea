"""Command-line interface: configs in, CSV/JSON data with provenance out.

Exit codes: 0 success, 2 invalid input, 3 numerical or truncation failure,
4 infeasible optomechanical design.
"""
from __future__ import annotations

import argparse
import cmath
import math
import sys
from pathlib import Path

import numpy as np
import tomli

from . import darkstate as ds
from . import engineered as eng
from . import io
from . import opensystem as osys
from . import optomech as om
from . import states as st
from . import wigner as wg
from .errors import (
    DegeneracyError,
    InfeasibleDesignError,
    InvalidDimensionError,
    InvalidParametersError,
    LQResError,
    TruncationError,
)
from .fock import FockState, parity_op, quadrature_ops, state_to_dict

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_INFEASIBLE = 0, 2, 3, 4

STATE_KINDS = ("cubic", "family1", "family2", "cat_phi", "cat_psi", "fock_like", "squeezed")
RECIPES = ("cat_phi", "cat_psi", "fock_like", "squeezed", "cubic")


class UsageError(InvalidParametersError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


# ------------------------------------------------------------------ parsing


def _floats(text: str) -> list:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _ints(text: str) -> list:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _axis(text: str) -> tuple:
    vals = _floats(text)
    if len(vals) != 3 or not float(vals[2]).is_integer():
        raise UsageError(f"grid spec must be 'min,max,points', got {text!r}")
    return (vals[0], vals[1]), int(vals[2])


def _linspace(text: str) -> np.ndarray:
    (lo, hi), n = _axis(text)
    return np.linspace(lo, hi, n)


def _logspace(text: str) -> np.ndarray:
    (lo, hi), n = _axis(text)
    return np.logspace(lo, hi, n)


def _coeffs_from_text(text: str) -> eng.Coefficients:
    try:
        vals = [complex(v.replace(" ", "")) for v in str(text).split(",")]
    except ValueError as exc:
        raise UsageError(f"bad coefficient list {text!r}") from exc
    if len(vals) != 5:
        raise UsageError("--coeffs needs five comma-separated complex numbers")
    return eng.Coefficients(*vals)


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except (OSError, tomli.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc


def _merge(args: argparse.Namespace, config: dict, defaults: dict) -> dict:
    """Top-level config keys fill flags left unset; flags always win."""
    params = dict(vars(args))
    for key, val in config.items():
        if isinstance(val, dict):
            continue
        name = key.replace("-", "_")
        if name not in params:
            raise UsageError(f"unknown config key {key!r}")
        if params[name] is None:
            params[name] = val
    for key, val in defaults.items():
        if params.get(key) is None:
            params[key] = val
    return params


def _need(p: dict, *keys):
    missing = [k for k in keys if p.get(k) is None]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))
    return [p[k] for k in keys]


# ------------------------------------------------------------- constructors


def _family2_sign(p: dict):
    s, u = _need(p, "s", "u")
    return float(s), float(u)


def build_state(kind: str, p: dict, dim: int) -> FockState:
    """Analytic state named by ``kind``; with p['dark'] the displaced/squeezed dark state."""
    dark = bool(p.get("dark"))
    if kind == "cubic":
        gamma, r = _need(p, "gamma", "r")
        kw = {"tail_tol": float(p["tail_tol"])} if p.get("tail_tol") is not None else {}
        return st.cubic_phase_state(float(gamma), float(r), dim, **kw)
    if kind == "squeezed":
        (r,) = _need(p, "r")
        return st.squeezed_vacuum(float(r) * cmath.exp(1j * float(p.get("theta") or 0.0)), dim)
    if kind == "family1":
        n, lam = _need(p, "n", "lam")
        if dark:
            alpha, z1 = _need(p, "alpha", "z1")
            return st.family1_dark_state(int(n), float(lam), float(alpha), float(z1), dim)
        return st.family1_superposition(int(n), float(lam), dim)
    if kind == "family2":
        n, s, u = _need(p, "n", "s", "u")
        if dark:
            alpha_p, z2 = _need(p, "alpha_p", "z2")
            return st.family2_dark_state(int(n), float(s), float(u), float(alpha_p), float(z2), dim)
        return st.family2_superposition(int(n), float(s), float(u), dim)
    if kind == "cat_phi":
        (n,) = _need(p, "n")
        return (st.cat_phi_dark_state if dark else st.cat_phi_state)(int(n), dim)
    if kind == "cat_psi":
        (n,) = _need(p, "n")
        return (st.cat_psi_dark_state if dark else st.cat_psi_state)(int(n), dim)
    if kind == "fock_like":
        n, zeta = _need(p, "n", "zeta")
        return (st.fock_like_dark_state if dark else st.fock_like_state)(int(n), float(zeta), dim)
    raise UsageError(f"unknown state kind {kind!r}")


def analytic_wigner(kind: str, p: dict):
    """(function, params) of a closed-form Wigner function, or raise UsageError."""
    if p.get("dark"):
        raise UsageError("closed-form Wigner functions are available for the undisplaced states only")
    if kind == "cubic":
        gamma, r = _need(p, "gamma", "r")
        return wg.wigner_cubic_analytic, {"gamma": float(gamma), "r": float(r)}
    if kind == "family1":
        n, lam = _need(p, "n", "lam")
        return wg.wigner_family1_analytic, {"n": int(n), "lam": float(lam)}
    if kind == "family2":
        n, s, u = _need(p, "n", "s", "u")
        return wg.wigner_family2_analytic, {"n": int(n), "s": float(s), "u": float(u)}
    if kind == "cat_phi":
        (n,) = _need(p, "n")
        lam = eng.family1_params(eng.cat_phi_recipe(int(n))).lam
        return wg.wigner_family1_analytic, {"n": int(n), "lam": float(np.real(lam))}
    if kind == "cat_psi":
        (n,) = _need(p, "n")
        f2 = eng.family2_params(eng.cat_psi_recipe(int(n)))
        return wg.wigner_family2_analytic, {"n": int(n), "s": float(np.real(f2.s)), "u": float(np.real(f2.u))}
    raise UsageError(f"no closed-form Wigner function for {kind!r}; use --numeric")


def build_recipe(p: dict) -> tuple:
    """(coefficients, analytic dark state or None, description) from --recipe or --coeffs."""
    dim = int(p["dim"])
    if p.get("coeffs") is not None:
        return _coeffs_from_text(p["coeffs"]), None, {"coeffs": p["coeffs"]}
    if p.get("coeff_table") is not None:
        return eng.Coefficients.from_toml_dict(p["coeff_table"]), None, {"coeffs": p["coeff_table"]}
    kind = p.get("recipe")
    if kind is None:
        raise UsageError("give --recipe or --coeffs")
    if kind not in RECIPES:
        raise UsageError(f"unknown recipe {kind!r}")
    keys = {"cat_phi": ("n",), "cat_psi": ("n",), "fock_like": ("n", "zeta"), "squeezed": ("r",), "cubic": ("gamma", "r")}[kind]
    vals = dict(zip(keys, _need(p, *keys)))
    if "n" in vals:
        vals["n"] = int(vals["n"])
    if kind == "squeezed" and p.get("theta") is not None:
        vals["theta"] = float(p["theta"])
    if kind == "cubic":
        if p.get("tail_tol") is not None:
            vals["tail_tol"] = float(p["tail_tol"])
        if p.get("theta") is not None:
            vals["theta"] = float(p["theta"])
    coeffs, target = st.recipe_and_dark_state(kind, dim, **vals)
    desc = {"recipe": kind, **{k: v for k, v in vals.items() if k != "tail_tol"}}
    return coeffs, target, desc


def _summary(state: FockState) -> dict:
    x, pq = quadrature_ops(state.dim)
    pops = state.populations()
    nz = np.nonzero(pops > 1e-24)[0]
    return {
        "norm": state.norm,
        "parity": state.expect(parity_op(state.dim)).real,
        "mean_x": state.expect(x).real,
        "mean_p": state.expect(pq).real,
        "peak_k": int(np.argmax(pops)),
        "max_k": int(nz[-1]) if nz.size else 0,
        "tail_population": state.tail_population(),
    }


# ----------------------------------------------------------------- commands


def _state_params(p: dict) -> dict:
    keep = ("n", "zeta", "r", "theta", "gamma", "lam", "alpha", "z1", "s", "u", "alpha_p", "z2", "dark")
    return {k: p[k] for k in keep if p.get(k) is not None}


def cmd_state(p: dict) -> int:
    kind = p["kind"]
    dim = int(p["dim"])
    state = build_state(kind, p, dim)
    summary = _summary(state)
    doc = {
        "command": "state",
        "kind": kind,
        "parameters": _state_params(p),
        "dim": dim,
        "tolerances": {"tail_tol": p.get("tail_tol", st.CUBIC_TAIL_TOL) if kind == "cubic" else None},
        "version": io.version(),
        "summary": summary,
        "state": state_to_dict(state),
    }
    if p.get("out"):
        io.write_json(p["out"], doc)
    for k, v in summary.items():
        print(f"{k} = {io.fmt(v) if isinstance(v, float) else v}")
    return EXIT_OK


def cmd_wigner(p: dict) -> int:
    kind = p["kind"]
    (out,) = _need(p, "out")
    xr, nx = _axis(p["grid"])
    pr, npts = _axis(p["pgrid"] or p["grid"])
    mode = p["mode"]
    prov = {
        "command": "wigner",
        "kind": kind,
        "parameters": _state_params(p),
        "grid": {"x": [*xr, nx], "p": [*pr, npts]},
        "dim": int(p["dim"]),
        "tolerances": {"tail_tol": p.get("tail_tol")},
    }
    grids = {}
    if mode in ("analytic", "both"):
        func, params = analytic_wigner(kind, p)
        grids["analytic"] = wg.analytic_grid(func, xr, pr, nx, npts, renormalize=True, **params)
    if mode in ("numeric", "both"):
        state = build_state(kind, p, int(p["dim"]))
        grids["numeric"] = wg.wigner_numeric(state, xr, pr, nx, npts).normalized()
    if mode == "both":
        prov["sup_diff"] = grids["analytic"].sup_diff(grids["numeric"])
        print(f"sup_diff = {io.fmt(prov['sup_diff'])}")
    for name, grid in grids.items():
        path = Path(f"{out}_{name}.csv") if len(grids) > 1 else Path(out).with_suffix(".csv")
        meta = dict(prov, method=name, minimum=grid.minimum(), integral=grid.integral())
        io.write_csv(path, ["x", "p", "w"], ((x, q, grid.values[i, j]) for i, x in enumerate(grid.x) for j, q in enumerate(grid.p)), meta)
        print(f"{name}: {path} (min W = {io.fmt(grid.minimum())})")
    return EXIT_OK


def cmd_darkstate(p: dict) -> int:
    dims = _ints(p["dims"])
    if not dims:
        raise UsageError("--dims must list at least one dimension")
    p = dict(p, dim=max(dims))
    coeffs, target, desc = build_recipe(p)
    threshold = float(p["threshold"])
    tail_tol = float(p["tail_tol"]) if p.get("tail_tol") is not None else ds.TAIL_TOL
    report = ds.convergence_sweep(coeffs, dims, threshold, tail_tol=tail_tol)
    final = ds.dark_state_solve(coeffs, dims[-1], threshold, tail_tol)
    doc = {
        "command": "darkstate",
        "parameters": desc,
        "coefficients": coeffs.as_array(),
        "dims": dims,
        "tolerances": {"threshold": threshold, "tail_tol": tail_tol, "converged_tol": 1e-9},
        "version": io.version(),
        "sweep": [pt._asdict() for pt in report],
        "converged": ds.sweep_converged(report) and final.count > 0,
        "unique": final.unique,
        "count": final.count,
        "rejected": final.rejected,
    }
    if final.states:
        doc["state"] = state_to_dict(final.states[0])
        if target is not None:
            doc["fidelity_to_analytic"] = abs(final.states[0].overlap(target.resized(dims[-1]).normalized()))
    if p.get("out"):
        io.write_json(p["out"], doc)
    for key in ("converged", "unique", "count", "fidelity_to_analytic"):
        if key in doc:
            print(f"{key} = {doc[key]}")
    return EXIT_OK


def cmd_steady(p: dict) -> int:
    coeffs, target, desc = build_recipe(p)
    dim = int(p["dim"])
    doc = {"command": "steady", "parameters": desc, "coefficients": coeffs.as_array(), "dim": dim, "version": io.version()}
    if p.get("two_mode") is not None:
        params = osys.TwoModeParams(kappa_a=float(p["two_mode"]), dims=(int(p["dim_a"]), dim))
        res = osys.two_mode_steady_state(coeffs, params)
        rho = res.target
        doc["model"] = {"two_mode": {"kappa_a": params.kappa_a, "dims": list(params.dims)}}
        doc["auxiliary_vacuum_population"] = float(res.auxiliary.entries[0, 0].real)
        doc["tolerances"] = {"residual": osys.RESIDUAL_TOL}
    else:
        n_bar, coop = (p["thermal"] if p.get("thermal") is not None else (0.0, 1e4))
        params = osys.AdiabaticParams(coop=float(coop), n_bar=float(n_bar))
        tail = p.get("tail_tol")
        rho = osys.adiabatic_steady_state(coeffs, params, dim, float(tail) if tail is not None else osys.STEADY_TAIL_TOL)
        doc["model"] = {"thermal": {"n_bar": params.n_bar, "coop": params.coop}}
        doc["tolerances"] = {"residual": osys.RESIDUAL_TOL, "tail_tol": tail if tail is not None else osys.STEADY_TAIL_TOL}
    doc["purity"] = rho.purity()
    doc["tail_population"] = rho.tail_population()
    if target is not None:
        doc["fidelity"] = osys.fidelity(rho, target.resized(rho.dim).normalized())
    out = p.get("out")
    if out:
        path = Path(out).with_suffix(".csv")
        pops = np.real(np.diag(rho.entries))
        io.write_csv(path, ["k", "population"], ((k, v) for k, v in enumerate(pops)), doc)
    for key in ("purity", "fidelity", "tail_population"):
        if key in doc:
            print(f"{key} = {io.fmt(doc[key])}")
    return EXIT_OK


def cmd_sweep(p: dict) -> int:
    (out,) = _need(p, "out")
    kind = p["kind"]
    workers = int(p["workers"]) if p.get("workers") else None
    prov = {"command": f"sweep {kind}", "version": io.version()}
    if kind == "thermal":
        coeffs, target, desc = build_recipe(p)
        if target is None:
            raise UsageError("thermal sweeps need a --recipe with an analytic target")
        nb, cg = _linspace(p["nbar_grid"]), _logspace(p["coop_grid"])
        fmap = osys.thermal_fidelity_map(coeffs, target, nb, cg, int(p["dim"]), workers=workers, squared=bool(p["squared"]))
        prov.update(parameters=desc, dim=int(p["dim"]), nbar_grid=p["nbar_grid"], coop_grid_log10=p["coop_grid"],
                    tolerances={"residual": osys.RESIDUAL_TOL}, convention="squared" if p["squared"] else "uhlmann",
                    max_tail_population=float(fmap.tails.max()))
        io.write_csv(out, ["n_bar", "coop", "fidelity"], fmap.rows(), prov)
    elif kind == "imprecision":
        (n,) = _need(p, "n")
        dmax, pts = float(p["delta_max"]), int(p["points"])
        grid = np.linspace(-dmax, dmax, pts)
        coop = float(p["coop"]) if p.get("coop") is not None else math.inf
        params = osys.AdiabaticParams(coop=coop, n_bar=0.0)
        fmap = osys.imprecision_map(int(n), grid, grid, params, int(p["dim"]), workers=workers, squared=bool(p["squared"]))
        prov.update(parameters={"n": int(n), "delta_max": dmax, "points": pts, "coop": coop, "n_bar": 0.0},
                    dim=int(p["dim"]), tolerances={"residual": osys.RESIDUAL_TOL},
                    convention="squared" if p["squared"] else "uhlmann", max_tail_population=float(fmap.tails.max()))
        io.write_csv(out, ["delta1", "delta2", "fidelity"], fmap.rows(), prov)
        print(f"F(0,0) = {io.fmt(fmap.values[pts // 2, pts // 2])}, min F = {io.fmt(fmap.values.min())}")
    elif kind == "cat-fidelity":
        family = p["family"] or "phi"
        nmax = int(p["n_max"])
        rows = []
        for n in range(1, nmax + 1):
            res = osys.max_cat_fidelity(n, family)
            rows.append((n, res.alpha, res.fidelity))
        prov.update(parameters={"family": family, "n_max": nmax}, tolerances={"golden_tol": 1e-6})
        io.write_csv(out, ["n", "alpha", "fidelity"], rows, prov)
        print(f"F_max(n={nmax}) = {io.fmt(rows[-1][2])}")
    elif kind == "fock-fidelity":
        nmax = int(p["n_max"])
        zetas = _floats(p["zetas"])
        rows = [(n, z, f) for n in range(1, nmax + 1) for z, f in osys.fock_fidelity_curve(n, zetas)]
        prov.update(parameters={"n_max": nmax, "zetas": zetas})
        io.write_csv(out, ["n", "zeta", "fidelity"], rows, prov)
    else:
        raise UsageError(f"unknown sweep {kind!r}")
    print(f"wrote {out}")
    return EXIT_OK


CRYSTAL_DEFAULTS = {"omega_m": 1.0, "kappa": 0.1}


def _drive_list(section: dict) -> tuple:
    out = []
    for d in section.get("drives", []):
        eps_re, delta = _need(dict(d), "eps_re", "delta")
        out.append((complex(float(eps_re), float(d.get("eps_im", 0.0))), float(delta)))
    return tuple(out)


def _hardware(config: dict) -> dict:
    """Couplings, frequencies and optional drive list from an [optomech] or [crystal] table."""
    if "optomech" in config:
        hw = dict(config["optomech"])
        omega_m, kappa, g_lin, g_quad = (float(v) for v in _need(hw, "omega_m", "kappa", "g_lin", "g_quad"))
        out = {"source": "optomech", "omega_m": omega_m, "kappa": kappa, "g_lin": g_lin, "g_quad": g_quad}
    elif "crystal" in config:
        hw = {**CRYSTAL_DEFAULTS, **config["crystal"]}
        J, gL, gR, X0, xz = (float(v) for v in _need(hw, "J", "gL", "gR", "X0", "x_zpf"))
        cc = om.crystal_couplings(om.CrystalParams(J, gL, gR, X0, xz))
        out = {"source": "crystal", "omega_m": float(hw["omega_m"]), "kappa": float(hw["kappa"]),
               "g_lin": cc.g_lin, "g_quad": cc.g_quad, "purely_quadratic": cc.purely_quadratic}
    else:
        raise UsageError("hardware file needs an [optomech] or [crystal] table")
    out["drives"] = _drive_list(hw) or _drive_list(config)
    mf = dict(config.get("meanfield", {}))
    if "gamma_m" in hw and "kappa_p" not in mf:
        mf["kappa_p"] = hw["gamma_m"]
    out["meanfield"] = mf or None
    return out


def _meanfield(hw: dict, design: om.OptomechParams) -> dict:
    mf = hw["meanfield"]
    if not mf:
        return {"beta": None, "note": "no mechanical damping (gamma_m or [meanfield] kappa_p) given"}
    (kappa_p,) = _need(mf, "kappa_p")
    params = om.MeanFieldParams(float(kappa_p), float(mf.get("Omega", hw["omega_m"])),
                                float(mf.get("g0_1", hw["g_lin"])), float(mf.get("g0_2", hw["g_quad"])))
    alphas = om.stationary_cavity_amplitudes(design)
    beta = om.mean_field_beta(params, alphas)
    return {"beta": beta, "residual": abs(om.beta_dot(params, alphas, beta)), "params": params.__dict__}


def cmd_optomech(p: dict) -> int:
    """Inverse design for --target, or the forward map for a drive list in the hardware file."""
    hw_path, out = _need(p, "hardware", "out")
    hw = _hardware(_load_config(hw_path))
    omega_m, kappa, g_lin, g_quad = hw["omega_m"], hw["kappa"], hw["g_lin"], hw["g_quad"]
    if p.get("recipe") or p.get("coeffs") or p.get("coeff_table"):
        coeffs, _, desc = build_recipe(dict(p, dim=p.get("dim") or 60))
        peak = float(np.abs(coeffs.as_array()).max())
        coeffs = coeffs.scaled(float(p["gain"]) * omega_m / peak)
        design = om.drive_inverse_design(coeffs, omega_m, kappa, g_lin, g_quad)
    elif hw["drives"]:
        desc = {"drives": "hardware file"}
        design = om.OptomechParams(omega_m, kappa, g_lin, g_quad, hw["drives"])
        coeffs = om.dressed_couplings(design)
    else:
        raise UsageError("give --target or a drive list in the hardware file")
    back = om.dressed_couplings(design)
    threshold = float(p["threshold"])
    report = {
        "command": "optomech",
        "hardware": {k: v for k, v in hw.items() if k not in ("meanfield", "drives")},
        "target": desc,
        "coefficients": coeffs.as_array(),
        "roundtrip_error": float(np.max(np.abs(back.as_array() - coeffs.as_array()))),
        "drive_count": om.drive_count(design),
        "rwa_threshold": threshold,
        "version": io.version(),
    }
    if g_lin > 0 and g_quad > 0:
        margins = om.rwa_margins(coeffs, g_quad / g_lin, omega_m)
        report["rwa_margins"] = {m.label: m.ratio for m in margins}
        report["rwa_valid"] = om.rwa_valid(margins, threshold)
    else:
        report["rwa_margins"] = None
        report["rwa_valid"] = None
    if om.drive_count(design) >= 2:
        mf = om.rwa_meanfield_validity(design, threshold)
        report["meanfield_rwa"] = {"worst_ratio": mf.worst_ratio, "pair": list(mf.pair), "valid": mf.valid}
    report["meanfield"] = _meanfield(hw, design)
    rows = [(k, d.eps.real, d.eps.imag, d.delta) for k, d in enumerate(design.drives, start=1)]
    io.write_csv(out, ["k", "eps_re", "eps_im", "delta"], rows, report)
    print(f"drives = {report['drive_count']}")
    if report["rwa_valid"] is not None:
        worst = max(report["rwa_margins"].values())
        print("RWA " + ("VALID" if report["rwa_valid"] else "INVALID") + f" (max margin {io.fmt(worst)})")
    return EXIT_OK


# ------------------------------------------------------------------- parser


def _state_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--n", type=int)
    for name in ("zeta", "r", "theta", "gamma", "lam", "alpha", "z1", "s", "u", "alpha-p", "z2"):
        sp.add_argument(f"--{name}", type=float)
    sp.add_argument("--dark", action="store_true", default=None, help="displaced/squeezed dark state instead of the bare superposition")
    sp.add_argument("--dim", type=int)
    sp.add_argument("--tail-tol", type=float)


def _recipe_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--recipe", choices=RECIPES)
    sp.add_argument("--coeffs", help="c1,c2,c3,c4,c5 as Python complex literals")
    sp.add_argument("--n", type=int)
    for name in ("zeta", "r", "theta", "gamma"):
        sp.add_argument(f"--{name}", type=float)
    sp.add_argument("--dim", type=int)
    sp.add_argument("--tail-tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lqreservoir", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="TOML file; top-level keys act as flag defaults")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("state", help="analytic state amplitudes and summary")
    s.add_argument("kind", choices=STATE_KINDS)
    _state_flags(s)
    s.add_argument("--out")

    w = sub.add_parser("wigner", help="Wigner grid (closed form, numeric or both)")
    w.add_argument("kind", choices=STATE_KINDS)
    _state_flags(w)
    w.add_argument("--grid", help="x axis 'min,max,points' (use --grid=-5,5,81)")
    w.add_argument("--pgrid", help="p axis, defaults to --grid")
    g = w.add_mutually_exclusive_group()
    g.add_argument("--analytic", dest="mode", action="store_const", const="analytic")
    g.add_argument("--numeric", dest="mode", action="store_const", const="numeric")
    g.add_argument("--both", dest="mode", action="store_const", const="both")
    w.add_argument("--out")

    d = sub.add_parser("darkstate", help="numerical dark state and truncation sweep")
    _recipe_flags(d)
    d.add_argument("--dims", help="ascending list, e.g. 40,60,80")
    d.add_argument("--threshold", type=float)
    d.add_argument("--out")

    t = sub.add_parser("steady", help="steady state of the thermal or two-mode model")
    _recipe_flags(t)
    m = t.add_mutually_exclusive_group()
    m.add_argument("--thermal", nargs=2, type=float, metavar=("NBAR", "COOP"))
    m.add_argument("--two-mode", type=float, metavar="KAPPA_A")
    t.add_argument("--dim-a", type=int)
    t.add_argument("--out")

    w2 = sub.add_parser("sweep", help="fidelity maps and curves")
    w2.add_argument("kind", choices=("thermal", "imprecision", "cat-fidelity", "fock-fidelity"))
    _recipe_flags(w2)
    w2.add_argument("--nbar-grid", help="linear 'min,max,points'")
    w2.add_argument("--coop-grid", help="log10 'min,max,points'")
    w2.add_argument("--delta-max", type=float)
    w2.add_argument("--points", type=int)
    w2.add_argument("--coop", type=float, help="cooperativity for imprecision maps (default: no thermal bath)")
    w2.add_argument("--family", choices=("phi", "psi"))
    w2.add_argument("--n-max", type=int)
    w2.add_argument("--zetas")
    w2.add_argument("--squared", action="store_true", default=None, help="report ⟨ψ|ρ|ψ⟩ instead of its square root")
    w2.add_argument("--workers", type=int)
    w2.add_argument("--out")

    o = sub.add_parser("optomech", help="drive design for a hardware file")
    o.add_argument("--hardware", help="TOML with [optomech] or [crystal] (and optional [meanfield])")
    _recipe_flags(o)
    o.add_argument("--target", dest="recipe", choices=RECIPES, help="same as --recipe")
    o.add_argument("--gain", type=float, help="largest |c_k| of the target, in units of omega_m")
    o.add_argument("--threshold", type=float, help="RWA policy threshold")
    o.add_argument("--out")
    return ap


DEFAULTS = {
    "state": {"dim": 300},
    "wigner": {"dim": 300, "grid": "-5,5,81", "mode": "numeric"},
    "darkstate": {"dims": "40,60,80", "threshold": ds.DEFAULT_THRESHOLD, "dim": 80},
    "steady": {"dim": 60, "dim_a": 4},
    "sweep": {"dim": 60, "nbar_grid": "0,0.2,5", "coop_grid": "2,6,5", "delta_max": 0.05, "points": 21,
              "n_max": 10, "zetas": "0.5,0.6,0.7,0.8,0.9,0.95,0.99", "squared": False},
    "optomech": {"gain": 0.01, "threshold": om.RWA_THRESHOLD},
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INVALID
    handlers = {"state": cmd_state, "wigner": cmd_wigner, "darkstate": cmd_darkstate,
                "steady": cmd_steady, "sweep": cmd_sweep, "optomech": cmd_optomech}
    try:
        config = _load_config(args.config)
        params = _merge(args, config, DEFAULTS[args.command])
        if "coeffs" in config and isinstance(config["coeffs"], dict) and params.get("coeffs") is None:
            params["coeff_table"] = config["coeffs"]
        return handlers[args.command](params)
    except InfeasibleDesignError as exc:
        print(f"infeasible design: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (TruncationError, DegeneracyError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidParametersError, InvalidDimensionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except LQResError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
