"""Excitation-induced dephasing: the central line broadens as Omega^2.

The bath curvature upsilon = (omega/omega_bath)^2 adds a drive-dependent
dephasing rate, visible as a linear growth of the central FWHM with Omega^2.
"""
import numpy as np

from drivenqubit import DriveParams, RateSet, generalized_generator, linewidth, spectrum_numeric

omega_bath = -20.0
nu = np.linspace(-3, 3, 3001)
rabis = np.arange(2.0, 8.01, 1.0)
widths = []
for rabi in rabis:
    x = rabi / omega_bath
    G = generalized_generator(RateSet(1.0, eps=x, upsilon=x * x), DriveParams(rabi))
    widths.append(linewidth(spectrum_numeric(G, nu), "central"))
    print(f"Omega={rabi:.0f}: FWHM = {widths[-1]:.4f}")
slope, icpt = np.polyfit(rabis ** 2, widths, 1)
print(f"linear fit: FWHM = {icpt:.4f} + {slope:.2e} Omega^2")
