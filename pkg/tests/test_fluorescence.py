import numpy as np
import pytest

from drivenqubit.fluorescence import (ConditioningError, PeakError, Spectrum, default_grid,
                                      doublet_closed_form, g0_closed_form, g_eps_closed_form,
                                      linewidth, relaxation_scale, spectrum_numeric)
from drivenqubit.generators import (Backend, DriveParams, Frame, Generator, generalized_generator,
                                    lab_generator, rotating_generator, superop, to_lab)
from drivenqubit.dynamics import steady_state
from drivenqubit.spectral import LabRates, RateSet


def test_g0_spot_value_and_symmetry():
    assert g0_closed_form(1.0, 1.0, 0.0) == pytest.approx(4 / 3, rel=1e-15)
    nu = np.linspace(-7, 7, 57)
    assert np.allclose(g0_closed_form(2.3, 0.7, nu), g0_closed_form(2.3, 0.7, -nu), rtol=0, atol=1e-15)
    assert g0_closed_form(3.0, 1.0, 1e6) < 1e-5


@pytest.mark.parametrize("rabi", [1.8, 10.0])
def test_numeric_spectrum_matches_g0(rabi):
    G = generalized_generator(RateSet(1.0), DriveParams(rabi))
    nu = default_grid(rabi, relaxation_scale(G))
    g = spectrum_numeric(G, nu).values
    ref = g0_closed_form(rabi, 1.0, nu)
    assert np.max(np.abs(g - ref) / np.abs(ref)) < 1e-6


def test_symmetric_scenario_gives_even_spectrum():
    G = generalized_generator(RateSet(1.0, 0.2, 0.4, 0.7, 0.7), DriveParams(3.0))
    nu = np.linspace(-12, 12, 241)
    g = spectrum_numeric(G, nu).values
    assert np.abs(g - g[::-1]).max() < 1e-10


def test_g_eps_symmetry_and_linearity():
    assert g_eps_closed_form(2.0, 1.0, 0.1, 0.0) == 0.0
    nu = np.random.default_rng(0).uniform(-10, 10, 50)
    a = g_eps_closed_form(3.0, 1.0, 0.1, nu)
    assert np.abs(a + g_eps_closed_form(3.0, 1.0, 0.1, -nu)).max() < 1e-10
    assert np.allclose(g_eps_closed_form(3.0, 1.0, 0.2, nu), 2 * a, rtol=1e-14)


def _resonant_radiative(rabi, eps, dn_weight):
    """Resonant radiative generator whose eps coupling into dn/dt has weight ``dn_weight``."""
    base = generalized_generator(RateSet(1.0, eps=eps), DriveParams(rabi)).R

    def extra(r):
        re_alpha = (r[0, 1] + r[1, 0]) / 2
        d = -(dn_weight - 0.5) * eps * re_alpha
        return np.array([[-d, 0], [0, d]])
    return Generator(base + superop(extra), Frame.LAB, Backend.GENERALIZED)


@pytest.mark.parametrize("rabi", [2.0, 8.0])
def test_g_eps_is_first_order_of_unit_weight_population_coupling(rabi):
    # the closed-form asymmetry corresponds to an eps coupling -Gamma*eps*Re(alpha) in dn/dt,
    # twice the one carried by the generalized generator (see acceptance criterion 5)
    nu = np.linspace(-3 * rabi, 3 * rabi, 121)
    e = 1e-3
    gp = spectrum_numeric(_resonant_radiative(rabi, e, 1.0), nu).values
    gm = spectrum_numeric(_resonant_radiative(rabi, -e, 1.0), nu).values
    ref = g_eps_closed_form(rabi, 1.0, e, nu)
    mask = np.abs(ref) > 1e-3 * np.abs(ref).max()
    assert np.max(np.abs((gp - gm) / 2 - ref)[mask] / np.abs(ref[mask])) < 1e-2


def test_doublet_examples():
    assert doublet_closed_form(1.7, 1.0, 0.0, 0.0) == pytest.approx(0.25)
    nu = np.linspace(-5, 5, 41)
    assert np.abs(doublet_closed_form(1.3, 1.0, 0.0, nu) - doublet_closed_form(1.3, 1.0, 0.0, -nu)).max() < 1e-15


@pytest.mark.parametrize("rabi", [0.5, 1.0, 2.0])
def test_doublet_symmetric_part_is_exact(rabi):
    G = generalized_generator(RateSet(0.0, 0.0, 1.0, 1.0, 1.0), DriveParams(rabi))
    nu = np.linspace(-6, 6, 61)
    g = spectrum_numeric(G, nu).values
    assert np.abs(g - doublet_closed_form(rabi, 1.0, 0.0, nu)).max() < 1e-13


@pytest.mark.parametrize("rabi", [0.5, 1.0, 2.0])
def test_doublet_asymmetry_is_odd_part_of_numeric(rabi):
    delta = 0.04
    G = generalized_generator(RateSet(0.0, 0.0, 1.0, 1 + delta * rabi, 1 - delta * rabi),
                              DriveParams(rabi))
    nu = np.linspace(-6, 6, 121)
    g = spectrum_numeric(G, nu).values
    odd = (g - g[::-1]) / 2
    ref = doublet_closed_form(rabi, 1.0, delta, nu)
    assert np.abs(odd - (ref - ref[::-1]) / 2).max() < 1e-12


@pytest.mark.parametrize("rabi", [0.5, 1.0, 2.0])
def test_doublet_formula_difference_is_exact(rabi):
    # the full formula, including its even (1 - a^2) factor, tracks the numeric change in Delta
    delta, nu = 0.04, np.linspace(-6, 6, 121)
    g = [spectrum_numeric(generalized_generator(
        RateSet(0.0, 0.0, 1.0, 1 + d * rabi, 1 - d * rabi), DriveParams(rabi)), nu).values
        for d in (0.0, delta)]
    ref = doublet_closed_form(rabi, 1.0, delta, nu) - doublet_closed_form(rabi, 1.0, 0.0, nu)
    assert np.abs(g[1] - g[0] - ref).max() < 1e-12 * np.abs(ref).max() / delta


def test_sum_rule():
    for rates, drive in [(RateSet(1.0), DriveParams(1.0)),
                         (RateSet(1.0, 0.1, 0.3, 0.4, 0.2, 0.1), DriveParams(2.0, 1.0)),
                         (RateSet(1.0, 0.0, 0.0, 0.0, 0.0), DriveParams(0.5, -0.5))]:
        G = generalized_generator(rates, drive)
        core = 4 * drive.omega + 20 * relaxation_scale(G)
        tail = np.geomspace(core, 1000 * core, 2000)
        nu = np.concatenate([-tail[::-1], np.linspace(-core, core, 8001)[1:-1], tail])
        sp = spectrum_numeric(G, nu)
        total = np.trapezoid(sp.values, nu) / (2 * np.pi) + sp.elastic_weight
        assert total == pytest.approx(1 - steady_state(G).n, rel=1e-2)


def test_lindblad_spectra_nonnegative():
    rng = np.random.default_rng(1)
    for _ in range(20):
        r = RateSet(*rng.uniform(0.1, 2, 5), *rng.uniform(-0.5, 0.5, 2))
        d = DriveParams(rng.uniform(0.1, 8), rng.normal() * 2)
        nu = np.linspace(-30, 30, 601)
        for G in (lab_generator(r.lab(), d), to_lab(rotating_generator(r, d))):
            assert spectrum_numeric(G, nu).values.min() >= -1e-10


def test_elastic_weight_is_coherence_squared():
    G = lab_generator(LabRates(1.0, 0.1, 0.2), DriveParams(1.5, 0.3))
    assert spectrum_numeric(G, [0.0]).elastic_weight == pytest.approx(abs(steady_state(G).alpha) ** 2)


def test_conditioning_error_names_frequency():
    R = np.zeros((4, 4), dtype=complex)
    R[0, 3], R[3, 3] = 1.0, -1.0  # decay to ground
    R[1, 1], R[2, 2] = -2j, 2j  # undamped coherence
    G = Generator(R, Frame.LAB, Backend.LAB)
    with pytest.raises(ConditioningError) as err:
        spectrum_numeric(G, [0.0, 1.0, 2.0])
    assert err.value.nu == 2.0


def test_dressed_frame_rejected():
    G = rotating_generator(RateSet(1.0), DriveParams(1.0))
    with pytest.raises(ValueError, match="lab"):
        spectrum_numeric(G, [0.0])


def test_linewidth_of_lorentzian():
    w = 0.37
    nu = np.linspace(-10, 10, 4001)
    sp = Spectrum(nu, w / (w * w + (nu - 0.5) ** 2), 0.0)
    assert linewidth(sp) == pytest.approx(2 * w, rel=1e-2)


def test_side_peaks_of_strong_drive():
    nu = np.linspace(-20, 20, 8001)
    sp = Spectrum(nu, g0_closed_form(10.0, 1.0, nu), 0.0)
    red = nu[np.argmax(np.where(nu < -5, sp.values, 0))]
    blue = nu[np.argmax(np.where(nu > 5, sp.values, 0))]
    assert red == pytest.approx(-10, abs=0.2) and blue == pytest.approx(10, abs=0.2)
    assert linewidth(sp, "red") == pytest.approx(linewidth(sp, "blue"), rel=1e-3)
    assert linewidth(sp, "central") == pytest.approx(1.0, rel=0.05)  # 2 * Gamma/2 for the central line


def test_linewidth_errors():
    nu = np.linspace(-1, 1, 11)
    with pytest.raises(PeakError):
        linewidth(Spectrum(nu, nu, 0.0))
    with pytest.raises(PeakError):
        linewidth(Spectrum(nu, 1 / (1 + (nu / 0.05) ** 2), 0.0))  # under-resolved
    with pytest.raises(PeakError):
        linewidth(Spectrum(nu, 1 / (1 + nu ** 2), 0.0))  # never falls to half maximum


def test_default_grid():
    nu = default_grid(2.0, 1.0)
    assert nu.size == 2001 and nu[-1] == 20.0 and nu[0] == -20.0
    assert default_grid(10.0, 0.1)[-1] == 40.0
