"""
Absorption estimation with two-mode bright squeezed light
=========================================================

Walks through the weak-absorption problem: build the probe state, push it
through a lossy sample, read out with balanced detection or an SU(1,1)
interferometer, and compare each against a coherent beam and against the
quantum Cramer-Rao bound.

Run::

    python3 demos/01_absorption_advantage.py
"""

import numpy as np

from squeezemetro import (
    Detection,
    Medium,
    ProbeConfig,
    SchemeSpec,
    crb_sensitivity,
    optimize_r,
    sensitivity,
)
from squeezemetro.gaussian import loss_channel, tmbss

ALPHA = 0.05
U = 1e4

# %% The probe and the sample
cfg = ProbeConfig(U, 2.0)
state = loss_channel(tmbss(cfg), ALPHA)
print("displacement after the sample:", np.round(state.d[:2].real, 2))
print("symplectic spectrum:", np.round(state.symplectic_spectrum(), 6))
print(f"probe photons / |u|^2 at r=2: {cfg.probe_photons / U**2:.2f}")

# %% Quantum advantage along r
print("\n   r     BD    SU11-1  SU11-sum   CRB")
for r in np.arange(0.0, 3.51, 0.25):
    cfg = ProbeConfig(U, r)
    row = []
    for det in (Detection.BALANCED, Detection.SU11_SINGLE, Detection.SU11_SUM):
        try:
            row.append(f"{sensitivity(SchemeSpec(det, Medium.LOSS), cfg, ALPHA).qa:7.3f}")
        except ArithmeticError:
            row.append("   sing")
    row.append(f"{crb_sensitivity(cfg, Medium.LOSS, ALPHA)[1]:7.3f}")
    print(f"{r:5.2f} " + " ".join(row))

# %% Best operating points
for det in (Detection.BALANCED, Detection.SU11_SINGLE):
    opt = optimize_r(SchemeSpec(det, Medium.LOSS), ALPHA)
    print(f"\n{det.value}: r_opt = {opt.r_opt:.4f}, QA = {opt.qa_opt:.4f}")
# balanced detection peaks where cosh^2 r = 1 / (sqrt(2) alpha)
print(f"stationarity check: {np.arccosh(np.sqrt(1 / (np.sqrt(2) * ALPHA))):.4f}")
