"""
Gain estimation: balanced detection versus time-reversed readout
================================================================

A quantum-limited amplifier adds noise from its ancilla, so the squeezing that
helps absorption estimation helps gain estimation less.  The second OPA of the
SU(1,1) scheme undoes part of that noise, and the sum of its output ports beats
balanced detection at every squeezing level.

Run::

    python3 demos/02_gain_schemes.py
"""

import numpy as np

from squeezemetro import Detection, Medium, ProbeConfig, SchemeSpec, crb_sensitivity, sensitivity
from squeezemetro.estimation import closed_form_sensitivity

GAIN = 1.05
U = 1e4
BD = SchemeSpec(Detection.BALANCED, Medium.GAIN)
SUM = SchemeSpec(Detection.SU11_SUM, Medium.GAIN)

print("   r   QA_BD  QA_SU11  QA_CRB   printed BD   printed SU11")
for r in np.linspace(0.0, 3.5, 15):
    cfg = ProbeConfig(U, r)
    bd, su = sensitivity(BD, cfg, GAIN), sensitivity(SUM, cfg, GAIN)
    # the printed formulas agree with moment propagation for these two schemes
    pbd = closed_form_sensitivity(BD, cfg, GAIN).value
    psu = closed_form_sensitivity(SUM, cfg, GAIN).value
    print(f"{r:5.2f} {bd.qa:7.3f} {su.qa:7.3f} {crb_sensitivity(cfg, Medium.GAIN, GAIN)[1]:7.3f}"
          f"   {bd.delta_theta_coherent / pbd:9.3f}   {su.delta_theta_coherent / psu:9.3f}")

# without squeezing the amplifier noise already costs a factor sqrt(2G - 1)
print(f"\nQA at r=0: {sensitivity(BD, ProbeConfig(U, 0.0), GAIN).qa:.4f}"
      f" = 1/sqrt(2G-1) = {1 / np.sqrt(2 * GAIN - 1):.4f}")
