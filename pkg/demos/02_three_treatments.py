"""Transient dynamics under the three treatments for a moderately driven qubit.

The drive (Omega=12, detuning 3) is neither weak against the bath scale nor strong
against the rates, so the lab-frame and rotating-frame answers disagree with the
generalized one, most visibly in the steady state.
"""
import numpy as np

from drivenqubit import DriveParams, QubitState, RateSet, build, evolve, steady_state, state_to_lab, to_lab

rates = RateSet(down=1.0, z0=0.5, z_plus=0.75, z_minus=0.25, eps=0.1)
drive = DriveParams(12.0, 3.0)
times = np.linspace(0, 6, 7)

for backend in ("lab", "rotating", "generalized"):
    G = build(backend, rates, drive)
    traj = evolve(to_lab(G), QubitState(0.0), times)
    ss = state_to_lab(steady_state(G), G)
    print(f"{backend:12s} n(t) = " + " ".join(f"{n:.3f}" for n in traj.n)
          + f"   n_ss = {ss.n:.4f}, alpha_ss = {ss.alpha:.4f}")
