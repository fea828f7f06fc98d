"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with
the measured value against its pinned tolerance (see the terminal summary)."""
import numpy as np
from scipy import ndimage

import conftest
from drivenqubit import cli
from drivenqubit.diagnostics import determinant, scan2d
from drivenqubit.dynamics import propagator, steady_state
from drivenqubit.fluorescence import (doublet_terms, g0_closed_form, g_eps_closed_form,
                                      linewidth, spectrum_numeric)
from drivenqubit.generators import (DriveParams, Frame, QubitState, generalized_generator,
                                    lab_generator, redfield_appendix_generator,
                                    rotating_generator, state_to_lab, to_dressed, to_lab)
from drivenqubit.spectral import RateSet


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] {number:>2}. {title}: {detail}"
    conftest.ACCEPTANCE_LINES[number] = line
    assert passed, line


def bundled(name):
    return cli.validate(cli.load_file(cli.bundled_scenarios()[name]), name)


def rel_sup(a, ref):
    return float(np.abs(a - ref).max() / np.abs(ref).max())


def random_rates(rng, eps=True):
    Gd, Gu, G0, Gp, Gm = rng.uniform(0, 2, 5)
    e, ee = rng.uniform(-0.9, 0.9, 2) if eps else (0.0, 0.0)
    return RateSet(Gd, Gu, G0, Gp, Gm, e, ee)


def random_drive(rng, min_rabi=0.0):
    return DriveParams(rng.uniform(min_rabi, 6), rng.normal() * 3, 1000.0)


def test_01_lab_limit_identity():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        r = random_rates(rng, eps=False)
        r = RateSet(r.down, r.up, r.z0, r.z0, r.z0)
        d = random_drive(rng)
        Rg, Rl = generalized_generator(r, d).R, lab_generator(r.lab(), d).R
        worst = max(worst, np.abs(Rg - Rl).max() / np.abs(Rl).max())
    record(1, "lab-limit identity", worst <= 1e-14, f"max rel diff {worst:.2e} (tol 1e-14, 1000 draws)")


def test_02_appendix_oracle():
    rng = np.random.default_rng(102)
    worst_full = worst_sec = 0.0
    for _ in range(1000):
        r, d = random_rates(rng), random_drive(rng, min_rabi=1e-3)
        Rg = generalized_generator(r, d).R
        worst_full = max(worst_full, np.abs(redfield_appendix_generator(r, d).R - Rg).max()
                         / np.abs(Rg).max())
        Rr = rotating_generator(r, d).R
        Rs = redfield_appendix_generator(r, d, secular=True, frame=Frame.DRESSED).R
        worst_sec = max(worst_sec, np.abs(Rs - Rr).max() / np.abs(Rr).max())
    ok = worst_full < 1e-12 and worst_sec <= 1e-14
    record(2, "appendix oracle", ok, f"full {worst_full:.2e} (tol 1e-12), secular vs rotating "
           f"{worst_sec:.2e} (tol 1e-14, roundoff only)")


def test_03_rotating_limit_convergence():
    rates = RateSet(1.0, 0.3, 0.4, 0.4, 0.4)
    gaps = []
    for lam in (1, 10, 100, 1000):
        d = DriveParams(5.0 * lam, 2.0 * lam)
        sg = steady_state(to_dressed(generalized_generator(rates, d))).matrix()
        sr = steady_state(rotating_generator(rates, d)).matrix()
        gaps.append(np.abs(sg - sr).max())
    ratios = np.array(gaps[:-1]) / np.array(gaps[1:])
    record(3, "rotating-limit convergence", bool(np.all(ratios >= 8)),
           f"gap ratios per decade {np.array2string(ratios, precision=3)} (need >= 8)")


def test_04_closed_form_spectrum():
    worst = 0.0
    for rabi in (1.8, 10.0):
        nu = np.linspace(-4 * rabi - 20, 4 * rabi + 20, 2001)
        g = spectrum_numeric(generalized_generator(RateSet(1.0), DriveParams(rabi)), nu).values
        ref = g0_closed_form(rabi, 1.0, nu)
        worst = max(worst, float(np.max(np.abs(g - ref) / np.abs(ref))))
    spot = g0_closed_form(1.0, 1.0, 0.0)
    ok = worst < 1e-6 and abs(spot - 4 / 3) < 1e-14
    record(4, "closed-form spectrum g0", ok,
           f"max pointwise rel err {worst:.2e} (tol 1e-6), g0(0) = {spot:.15f} (4/3)")


def test_05_first_order_asymmetry():
    e = 1e-3
    errors = []
    for rabi in (2.0, 8.0):
        nu = np.linspace(-4 * rabi, 4 * rabi, 801)
        gp = spectrum_numeric(generalized_generator(RateSet(1.0, eps=e), DriveParams(rabi)), nu).values
        gm = spectrum_numeric(generalized_generator(RateSet(1.0, eps=-e), DriveParams(rabi)), nu).values
        errors.append(rel_sup((gp - gm) / 2, g_eps_closed_form(rabi, 1.0, e, nu)))
    nu = np.linspace(-30, 30, 601)
    ge = g_eps_closed_form(2.0, 1.0, e, nu)
    odd = float(np.abs(ge + ge[::-1]).max())
    zero = abs(float(g_eps_closed_form(2.0, 1.0, e, 0.0)))
    ok = max(errors) < 1e-2 and odd < 1e-10 and zero == 0.0
    record(5, "first-order asymmetry g_eps", ok,
           f"rel err Omega=2: {errors[0]:.3f}, Omega=8: {errors[1]:.3f} (tol 1e-2); "
           f"g_eps(0) = {zero:.1e}, odd residual {odd:.1e} (tol 1e-10)")


def test_06_population_inversion_map():
    scn = bundled("fig3a")
    ax1, ax2 = scn.params["axis1"], scn.params["axis2"]
    gen = scan2d(lambda **kw: scn.generator("generalized", kw), ax1, ax2, "n_ss")
    lab = scan2d(lambda **kw: scn.generator("lab", kw), ax1, ax2, "n_ss")
    labels, count = ndimage.label(gen.values > 0.5)
    largest = int(np.bincount(labels.ravel())[1:].max()) if count else 0
    lab_max = float(np.nanmax(lab.values))
    ok = largest >= 2 and lab_max <= 0.5 and not gen.status and not lab.status
    record(6, "population inversion map", ok,
           f"{int((gen.values > 0.5).sum())} inverted points, largest region {largest}, "
           f"max n_gen {np.nanmax(gen.values):.4f}; lab max n {lab_max:.4f} (need <= 0.5)")


def test_07_positivity_map():
    scn = bundled("fig6")
    ax1, ax2 = scn.params["axis1"], scn.params["axis2"]
    res = scan2d(lambda **kw: scn.generator("generalized", kw), ax1, ax2, "det_ss")
    rabi, delta = np.asarray(ax1[1]), np.asarray(ax2[1])
    corner = res.values[np.ix_(rabi <= 1.0, delta >= 0.5)]
    edge_min = float(res.values[:, delta == 0.0].min())
    strong_min = float(res.values[rabi >= 50.0].min())
    ok = bool((corner < 0).any()) and edge_min >= -1e-12 and strong_min >= -1e-12
    record(7, "positivity map", ok,
           f"{int((corner < 0).sum())} negative points in Omega<=1, delta>=0.5 corner; "
           f"min det on delta=0 edge {edge_min:.2e}, for Omega>=50 {strong_min:.2e} (tol -1e-12)")


def test_08_power_flow_breakdown():
    regions = []
    for name in ("fig7a", "fig7b"):
        scn = bundled(name)
        res = scan2d(lambda **kw: scn.generator("generalized", kw), scn.params["axis1"],
                     scn.params["axis2"], "im_alpha_ss")
        assert not res.status
        regions.append(res.values < 0)
    a, b = regions
    ok = a.any() and b.any() and not np.array_equal(a, b)
    record(8, "power-flow breakdown", ok,
           f"Im(alpha)<0 at {int(a.sum())} points (up=1/4) and {int(b.sum())} (up=1/2), "
           f"{int((a ^ b).sum())} points differ")


def test_09_lindblad_positivity():
    rng = np.random.default_rng(109)
    worst = np.inf
    for _ in range(10_000):
        r = RateSet(*rng.uniform(0, 2, 5), *rng.uniform(-0.9, 0.9, 2))
        d = DriveParams(rng.uniform(0, 8), rng.normal() * 3)
        G = lab_generator(r.lab(), d) if rng.uniform() < 0.5 else rotating_generator(r, d)
        v = rng.normal(size=3)
        v *= (1.0 if rng.uniform() < 0.2 else rng.uniform()) / np.linalg.norm(v)  # some pure
        rho0 = QubitState((1 - v[2]) / 2, complex(v[0], v[1]) / 2)
        s = QubitState.from_vec(propagator(G, 10 ** rng.uniform(-3, 1.3)) @ rho0.vec())
        worst = min(worst, determinant(state_to_lab(s, G)))
    record(9, "Lindblad positivity", worst >= -1e-12, f"min det {worst:.2e} over 1e4 samples (tol -1e-12)")


def test_10_eid_law():
    scn = bundled("fig5-eid")
    name, rabis = scn.params["sweep"]
    nu = np.linspace(-scn.params["half_width"], scn.params["half_width"], scn.params["points"])
    widths = []
    for rabi in rabis:
        G = scn.generator("generalized", {name: rabi})
        widths.append(linewidth(spectrum_numeric(G, nu), "central"))
    x, y = np.asarray(rabis) ** 2, np.asarray(widths)
    fit = np.polyfit(x, y, 1)
    r2 = 1 - np.sum((y - np.polyval(fit, x)) ** 2) / np.sum((y - y.mean()) ** 2)
    record(10, "EID law", r2 > 0.99 and fit[0] > 0,
           f"FWHM vs Omega^2 slope {fit[0]:.2e}, R^2 = {r2:.4f} (need > 0.99)")


def test_11_doublet_regime():
    delta, nu = 0.04, np.linspace(-6, 6, 121)
    errors = []
    for rabi in (0.5, 1.0, 2.0):
        g0 = spectrum_numeric(generalized_generator(RateSet(0, 0, 1.0, 1.0, 1.0), DriveParams(rabi)), nu)
        gd = spectrum_numeric(generalized_generator(
            RateSet(0, 0, 1.0, 1 + delta * rabi, 1 - delta * rabi), DriveParams(rabi)), nu)
        t3 = doublet_terms(rabi, 1.0, delta, nu)[2] / delta
        errors.append(rel_sup((gd.values - g0.values) / delta, t3))
    record(11, "doublet asymmetry term", max(errors) < 0.05,
           "rel err " + ", ".join(f"Omega={w}: {e:.4f}" for w, e in zip((0.5, 1, 2), errors))
           + " (tol 0.05)")


def test_12_backend_discrimination():
    out = {}
    for name in ("fig4a", "fig4b"):
        scn = bundled(name)
        gens = {b: to_lab(scn.generator(b)) for b in scn.backends}
        w = scn.drive_params().omega
        nu = np.linspace(-4 * max(w, 5), 4 * max(w, 5), scn.params["points"])
        g = {b: spectrum_numeric(G, nu).values for b, G in gens.items()}
        out[name] = (np.abs(g["lab"] - g["generalized"]).max(),
                     np.abs(g["rotating"] - g["generalized"]).max())
    (la, ra), (lb, rb) = out["fig4a"], out["fig4b"]
    ok = la < ra / 5 and rb < lb / 5
    record(12, "three-backend discrimination", ok,
           f"Omega=1.8: |rot-gen|/|lab-gen| = {ra / la:.2f}; Omega=10: |lab-gen|/|rot-gen| = "
           f"{lb / rb:.2f} (need > 5 each)")
