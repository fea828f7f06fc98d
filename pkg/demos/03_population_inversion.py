"""Steady-state population inversion from a tilted bath.

A bath that tilts across the dressed splitting (eps != 0), combined with a
detuning of the same sign, pumps the qubit past n = 1/2. The lab treatment
never inverts.
Printed map: '#' marks n_ss > 1/2, '.' otherwise (rows: eps, columns: detuning).
"""
import numpy as np

from drivenqubit import DriveParams, RateSet, generalized_generator, lab_generator, scan2d

def builder(kind):
    def make(eps, detuning):
        r = RateSet(1.0, z0=0.05, z_plus=0.05, z_minus=0.05, eps=eps)
        d = DriveParams(25.0, detuning)
        return generalized_generator(r, d) if kind == "gen" else lab_generator(r.lab(), d)
    return make

eps_axis = ("eps", np.linspace(-0.5, 0.5, 21))
det_axis = ("detuning", np.linspace(-10, 10, 41))
gen = scan2d(builder("gen"), eps_axis, det_axis, "n_ss")
lab = scan2d(builder("lab"), eps_axis, det_axis, "n_ss")
for eps, row in zip(eps_axis[1][::-1], gen.values[::-1]):
    print(f"eps={eps:+.2f} " + "".join("#" if v > 0.5 else "." for v in row))
print(f"generalized max n = {gen.values.max():.4f}; lab max n = {lab.values.max():.4f}")
