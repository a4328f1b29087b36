"""
Where the printed closed forms and moment propagation part ways
===============================================================

The single-port SU(1,1) formula as printed carries a cross term with
coefficient 4; moment propagation gives 2.  The sum-port formula as printed
has a negative radicand at large r.  Both are evaluated verbatim here and set
against the moment engine, together with the singular point where the sum
signal stops depending on the absorption.

Run::

    python3 demos/03_printed_forms_and_singularity.py
"""

from squeezemetro import Detection, Medium, ProbeConfig, SchemeSpec, sensitivity, su11_sum_singularity
from squeezemetro.estimation import closed_form_sensitivity, coherent_baseline, singularity_residual

ALPHA, R = 0.05, 2.35
cfg = ProbeConfig(1.0, R)
single = SchemeSpec(Detection.SU11_SINGLE, Medium.LOSS)
total = SchemeSpec(Detection.SU11_SUM, Medium.LOSS)
coh = coherent_baseline(cfg, Medium.LOSS, ALPHA)

for coeff in (4.0, 2.0):
    res = closed_form_sensitivity(single, cfg, ALPHA, cross_coefficient=coeff)
    print(f"single port, coefficient {coeff:g}: QA = {coh / res.value:.4f}  ({res.fidelity})")
print(f"single port, moment engine:     QA = {sensitivity(single, cfg, ALPHA).qa:.4f}")

res = closed_form_sensitivity(total, cfg, ALPHA)
print(f"\nsum port as printed: radicand = {res.radicand:.4g}, value = {res.value}")
print(f"sum port, moment engine: QA = {sensitivity(total, cfg, ALPHA).qa:.4f}")

for alpha in (0.05, 0.01):
    r_star = su11_sum_singularity(alpha)
    print(f"\nalpha = {alpha}: r* = {r_star:.6f} (residual {singularity_residual(alpha, r_star):.1e})")
    for dr in (-0.3, -0.01, 0.01, 0.3):
        rep = sensitivity(total, ProbeConfig(1.0, r_star + dr), alpha)
        print(f"  r* {dr:+.2f}: delta_alpha * |u| = {rep.delta_theta:.4f}")
