"""Where the generalized (non-Lindblad) generator stops being physical.

Strong asymmetric dephasing at weak drive drives the steady-state determinant
negative (an eigenvalue of rho below zero), and, with some upward transitions,
reverses the power flow from the drive. Both signal the end of the treatment's
validity rather than new physics.
"""
import numpy as np

from drivenqubit import DriveParams, RateSet, generalized_generator, scan2d

def make(up, detuning):
    def build(rabi, z_asym):
        return generalized_generator(RateSet(1.0, up, 2.0, 2 * (1 + z_asym), 2 * (1 - z_asym)),
                                     DriveParams(rabi, detuning))
    return build

rabi = ("rabi", np.geomspace(0.1, 100, 13))
asym = ("z_asym", np.linspace(0, 1, 11))
det = scan2d(make(0.0, 0.0), rabi, asym, "det_ss")
print("det_ss < 0 ('x'), rows: Omega, columns: asymmetry 0..1")
for w, row in zip(rabi[1], det.values):
    print(f"Omega={w:7.2f} " + "".join("x" if v < 0 else "." for v in row))
for up in (0.25, 0.5):
    im = scan2d(make(up, -1.0), ("rabi", np.linspace(0.1, 10, 45)), asym, "im_alpha_ss")
    print(f"up={up}: power flow reversed at {(im.values < 0).sum()} of {im.values.size} points")
