"""Driven dissipative qubit: lab-frame, secular dressed-frame and non-secular
master equations, with steady states, fluorescence spectra and diagnostics."""
from .spectral import (CouplingParams, Composite, Flat, LabRates, LorentzianCavity, RateSet,
                       SpectralModel, Tabulated, ThermalLinear, eval_K, generalized_rates,
                       lab_rates)
from .generators import (Backend, DegenerateDriveError, DriveParams, Frame, Generator,
                         QubitState, build, frame_transform, generalized_generator,
                         inverse_frame_transform, lab_generator, redfield_appendix_generator,
                         rotating_generator, state_to_lab, to_dressed, to_lab)
from .dynamics import SteadyStateError, Trajectory, evolve, propagator, steady_state
from .fluorescence import (Spectrum, doublet_closed_form, g0_closed_form, g_eps_closed_form,
                           linewidth, spectrum_numeric)
from .diagnostics import RegimeReport, determinant, power_flow, regime_report, scan2d

__version__ = "0.1.0"
