"""From a bath spectral density to the rates each treatment uses.

A qubit at omega_0 ~ 1000 couples transversally to a cavity-like bath peaked
20 units above the drive. The lab treatment samples K only at +-omega_d; the
generalized one also records how K tilts across the dressed splitting.
"""
from drivenqubit import CouplingParams, DriveParams, LorentzianCavity, generalized_rates, lab_rates

bath = LorentzianCavity(amplitude=1.0, width=30.0, center=1020.0)
coupling = CouplingParams(ax=1.0, az=0.3)

print("lab rates:", lab_rates(bath, coupling, 1000.0))
for rabi in (1.0, 3.0, 10.0):
    drive = DriveParams(rabi)
    r = generalized_rates(bath, coupling, drive, order=2)
    print(f"Omega={rabi:5.1f}  down={r.down:.4f}  eps={r.eps:+.4f}  upsilon={r.upsilon:+.5f}  "
          f"z+/z-={r.z_plus / r.z_minus:.4f}")
print("eps grows linearly with the Rabi frequency and upsilon quadratically.")
